#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "displab/norms.hpp"
#include "displab/potentials.hpp"
#include "displab/propagator.hpp"

namespace displab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "section.key = value" text. Values are scalars, lists [a, b] or
// lists of tuples [(a, b, c), ...]. '#' starts a comment.
class RawConfig {
 public:
  static RawConfig parse(const std::string& text);
  static RawConfig load(const std::filesystem::path& file);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::vector<double>> get_tuples(const std::string& key) const;

  // canonical text (sorted keys) and its FNV-1a hash
  std::string canonical() const;
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> kv_;
};

struct SweepBlock {
  std::string family = "lambda";
  std::size_t count = 500;
  std::size_t m_max = 8;
  double b_min = 1e-2, b_max = 1e2;
  double sigma_max = 1e4;
  double c_min = 1e-2, c_max = 1e2;
};

struct InitialBlock {
  double a = 1.0;  // exp(-|x|^2/(4a))
};

struct SolverBlock {
  double s = 0.0;
  double dt = 0.05;
  double t_final = 4.0;
  std::size_t snap_every = 0;
};

struct ExperimentConfig {
  SeparablePotential potential;
  Grid3 grid{64, 12.0};
  SolverBlock solver;
  SweepBlock sweep;
  InitialBlock initial;
  NormThresholds thresholds;
  std::string constants_file;
  std::uint64_t seed = 1;
  std::uint64_t hash = 0;
};

// Rejects unknown keys and invalid blocks with ConfigError naming the key.
ExperimentConfig build_config(const RawConfig& raw);
ExperimentConfig default_config();

std::string fnv1a_hex(std::uint64_t h);

// Fitted constants file: "name = value" lines.
struct FittedConstants {
  std::map<std::string, double> values;
  std::optional<double> get(const std::string& name) const;
};
FittedConstants load_constants(const std::filesystem::path& file);
void save_constants(const std::filesystem::path& file, const FittedConstants& c, const std::string& header);
std::string default_constants_path();

}  // namespace displab
