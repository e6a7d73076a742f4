#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "displab/config.hpp"
#include "displab/oscillatory.hpp"

namespace displab {

struct OscSweepRow {
  std::size_t index = 0;
  std::string family;
  // lambda / u families
  PhaseLambda phase;
  DampedWeight weight;
  // statphase family
  double a = 0, t = 0, L = 0;

  OscResult result;
  bool ok = false;
  std::string error;
};

// Configuration i is drawn from the stream (seed, i) alone, so rows do not
// depend on the worker count or on which other rows are evaluated.
OscSweepRow draw_osc_config(const SweepBlock& sw, const std::string& family, std::uint64_t seed, std::size_t i);
void evaluate_osc_row(OscSweepRow& row, const OscOptions& opt = {});
std::vector<OscSweepRow> osc_sweep(const SweepBlock& sw, const std::string& family, std::uint64_t seed,
                                   std::size_t count, const OscOptions& opt = {});

void write_sweep_csv(std::ostream& out, const std::vector<OscSweepRow>& rows, const std::string& config_hash);

}  // namespace displab
