#include "displab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace displab {

namespace {

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
    throw ConfigError("bad numeric value for '" + key + "': " + text);
  return v;
}

// split on top-level commas (outside parentheses)
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::string strip_brackets(const std::string& key, const std::string& v, char open, char close) {
  const std::string t = trim(v);
  if (t.size() < 2 || t.front() != open || t.back() != close)
    throw ConfigError("expected " + std::string(1, open) + "..." + std::string(1, close) + " for '" + key + "'");
  return t.substr(1, t.size() - 2);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k{
      "space.kind",     "space.amplitude",  "space.width",     "space.radius",  "space.epsilon",
      "space.breakpoints", "space.values",  "time.atoms",      "time.profile",  "time.omega",
      "grid.n",         "grid.L",           "solver.s",        "solver.dt",     "solver.t_final",
      "solver.snap_every", "sweep.family",  "sweep.count",     "sweep.m_max",   "sweep.b_min",
      "sweep.b_max",    "sweep.sigma_max",  "sweep.c_min",     "sweep.c_max",   "initial.a",
      "thresholds.c0",  "thresholds.constants", "run.seed"};
  return k;
}

}  // namespace

RawConfig RawConfig::parse(const std::string& text) {
  RawConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || key.find('.') == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": key must look like section.key");
    c.kv_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

RawConfig RawConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& RawConfig::raw(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double RawConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, raw(key)) : fallback;
}

std::int64_t RawConfig::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string t = trim(raw(key));
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
    throw ConfigError("bad integer value for '" + key + "': " + t);
  return v;
}

std::string RawConfig::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? trim(raw(key)) : fallback;
}

std::vector<double> RawConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_top(strip_brackets(key, raw(key), '[', ']'))) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::vector<double>> RawConfig::get_tuples(const std::string& key) const {
  std::vector<std::vector<double>> out;
  for (const auto& item : split_top(strip_brackets(key, raw(key), '[', ']'))) {
    std::vector<double> tup;
    for (const auto& x : split_top(strip_brackets(key, item, '(', ')'))) tup.push_back(to_double(key, x));
    out.push_back(std::move(tup));
  }
  return out;
}

std::string RawConfig::canonical() const {
  std::string s;
  for (const auto& [k, v] : kv_) s += k + "=" + v + "\n";
  return s;
}

std::uint64_t RawConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig default_config() { return build_config(RawConfig{}); }

ExperimentConfig build_config(const RawConfig& raw) {
  for (const auto& [k, v] : raw.entries())
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  ExperimentConfig c;
  c.hash = raw.hash();
  try {
    const std::string kind = raw.get_string("space.kind", "gaussian");
    const double amp = raw.get_double("space.amplitude", 0.005);
    if (kind == "gaussian") {
      c.potential = {TimeProfile{}, Gaussian{amp, raw.get_double("space.width", 1.0)}};
    } else if (kind == "inverse_power") {
      c.potential = {TimeProfile{},
                     InversePower{amp, raw.get_double("space.epsilon", 1.0), raw.get_double("space.width", 1.0)}};
    } else if (kind == "ball") {
      c.potential = {TimeProfile{}, BallIndicator{amp, raw.get_double("space.radius", 1.0)}};
    } else if (kind == "radial") {
      c.potential = {TimeProfile{}, RadialPiecewise{raw.get_list("space.breakpoints"), raw.get_list("space.values")}};
    } else {
      throw ConfigError("space.kind: unknown profile '" + kind + "'");
    }
    TimeProfile tp;
    if (raw.has("time.atoms")) {
      if (raw.has("time.profile")) throw ConfigError("time.profile and time.atoms are exclusive");
      std::vector<TimeAtom> atoms;
      for (const auto& t : raw.get_tuples("time.atoms")) {
        if (t.size() != 3) throw ConfigError("time.atoms: each atom is (freq, re, im)");
        atoms.push_back({t[0], {t[1], t[2]}});
      }
      tp = TimeProfile(atoms);
    } else {
      const std::string prof = raw.get_string("time.profile", "constant");
      if (prof == "constant") tp = TimeProfile::constant();
      else if (prof == "cos") tp = TimeProfile::cosine(raw.get_double("time.omega", 1.0));
      else throw ConfigError("time.profile: unknown profile '" + prof + "'");
    }
    c.potential = SeparablePotential(tp, c.potential.space());

    c.grid.n = static_cast<std::size_t>(raw.get_int("grid.n", 64));
    c.grid.L = raw.get_double("grid.L", 12.0);
    c.grid.validate();

    c.solver.s = raw.get_double("solver.s", 0.0);
    c.solver.dt = raw.get_double("solver.dt", 0.05);
    c.solver.t_final = raw.get_double("solver.t_final", 4.0);
    const auto snap = raw.get_int("solver.snap_every", 0);
    if (snap < 0) throw ConfigError("solver.snap_every must be >= 0");
    c.solver.snap_every = static_cast<std::size_t>(snap);
    if (!(c.solver.dt > 0)) throw ConfigError("solver.dt must be positive");
    if (!(c.solver.t_final > c.solver.s)) throw ConfigError("solver.t_final must exceed solver.s");

    c.sweep.family = raw.get_string("sweep.family", "lambda");
    if (c.sweep.family != "lambda" && c.sweep.family != "u" && c.sweep.family != "statphase")
      throw ConfigError("sweep.family must be lambda, u or statphase");
    const auto count = raw.get_int("sweep.count", 500);
    const auto mmax = raw.get_int("sweep.m_max", 8);
    if (count < 1 || mmax < 1) throw ConfigError("sweep.count and sweep.m_max must be positive");
    c.sweep.count = static_cast<std::size_t>(count);
    c.sweep.m_max = static_cast<std::size_t>(mmax);
    c.sweep.b_min = raw.get_double("sweep.b_min", 1e-2);
    c.sweep.b_max = raw.get_double("sweep.b_max", 1e2);
    c.sweep.sigma_max = raw.get_double("sweep.sigma_max", 1e4);
    c.sweep.c_min = raw.get_double("sweep.c_min", 1e-2);
    c.sweep.c_max = raw.get_double("sweep.c_max", 1e2);
    if (!(c.sweep.b_min > 0 && c.sweep.b_max >= c.sweep.b_min && c.sweep.c_min > 0 &&
          c.sweep.c_max >= c.sweep.c_min && c.sweep.sigma_max > 0))
      throw ConfigError("sweep ranges are inconsistent");

    c.initial.a = raw.get_double("initial.a", 1.0);
    if (!(c.initial.a > 0)) throw ConfigError("initial.a must be positive");
    c.thresholds.c0 = raw.get_double("thresholds.c0", 0.05);
    c.constants_file = raw.get_string("thresholds.constants", default_constants_path());
    const auto seed = raw.get_int("run.seed", 1);
    if (seed < 0) throw ConfigError("run.seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

std::optional<double> FittedConstants::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

FittedConstants load_constants(const std::filesystem::path& file) {
  FittedConstants c;
  std::ifstream in(file);
  if (!in) return c;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string k = trim(line.substr(0, eq));
    c.values[k] = to_double(k, line.substr(eq + 1));
  }
  return c;
}

void save_constants(const std::filesystem::path& file, const FittedConstants& c, const std::string& header) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  std::istringstream hs(header);
  for (std::string l; std::getline(hs, l);) out << "# " << l << "\n";
  char buf[64];
  for (const auto& [k, v] : c.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << k << " = " << buf << "\n";
  }
}

std::string default_constants_path() {
#ifdef DISPLAB_CONSTANTS_FILE
  return DISPLAB_CONSTANTS_FILE;
#else
  return "data/constants.txt";
#endif
}

}  // namespace displab
