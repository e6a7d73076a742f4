#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "displab/config.hpp"

namespace displab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptOptions {
  std::string constants_file = default_constants_path();
  std::uint64_t seed = 1;
};

// Seed streams of the calibration and validation sweeps. Disjoint by construction.
inline constexpr std::uint64_t kCalibrationSeed = 0xCA1;
inline constexpr std::uint64_t kValidationSeed = 0x7A1;

// 1..10; "all" -> 0; unknown -> -1
int suite_id(const std::string& name);
const std::vector<std::string>& suite_names();

CriterionResult run_criterion(int id, const AcceptOptions& opt);
std::vector<CriterionResult> run_suite(int id, const AcceptOptions& opt, std::ostream* log = nullptr);
std::string format_result(const CriterionResult& r);

// Runs the calibration sweeps and writes the constants file.
FittedConstants calibrate(const AcceptOptions& opt, std::ostream* log = nullptr);

}  // namespace displab
