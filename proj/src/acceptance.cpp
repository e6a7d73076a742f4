#include "displab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include "displab/born.hpp"
#include "displab/propagator.hpp"
#include "displab/rng.hpp"
#include "displab/stein_tomas.hpp"
#include "displab/sweep.hpp"

namespace displab {

namespace {

// tolerances, pinned
constexpr double kIdentityAbs = 1e-10;
constexpr double kFractionsRel = 1e-9;
constexpr std::size_t kIdentityCases = 10000;
constexpr double kDispersiveRel = 0.02;
constexpr double kGaussianRel = 1e-6;
constexpr double kL2Slack = 1e-10;
constexpr std::size_t kKatoSamples = 1'000'000;
constexpr double kSigmas = 3.0;
constexpr std::size_t kOscCount = 500;
constexpr double kFitMargin = 1.25;
constexpr double kDegenerateSmall = 1e-6;
constexpr double kDegenerateRel = 1e-4;
constexpr double kSlopeTarget = -0.25, kSlopeTol = 0.02;
constexpr double kBornRel = 1e-2;
constexpr double kPartialSumRel = 1e-3;
constexpr double kDecayRatio = 0.5;
constexpr double kTimedepFactor = 1.5;

const double kFreeConstant = std::pow(4.0 * pi, -1.5);

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

cplx gaussian_free(double a, double t, const Vec3& x) {
  const cplx z(a, t);
  return std::pow(a / z, 1.5) * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (4.0 * z));
}

WaveField gaussian_field(const Grid3& g, double a) {
  return WaveField::from_function(g, [a](const Vec3& x) { return gaussian_free(a, 0.0, x); });
}

SeparablePotential small_gaussian(TimeProfile tp) { return {std::move(tp), Gaussian{0.005, 1.0}}; }

// ---- 1
CriterionResult identities() {
  CriterionResult r;
  auto g = make_stream(0x1D, 0);
  double worst_sine = 0;
  for (std::size_t i = 0; i < kIdentityCases; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(uniform01(g) * 8);
    std::vector<double> a(n);
    for (auto& v : a) v = -10.0 + 20.0 * uniform01(g);
    const auto [lhs, rhs] = sine_telescope(a);
    worst_sine = std::max(worst_sine, std::abs(lhs - rhs));
  }
  auto h = make_stream(0x1D, 1);
  double worst_pf = 0;
  for (std::size_t i = 0; i < kIdentityCases; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform01(h) * 6);
    std::vector<cplx> z;
    while (z.size() < n) {
      const cplx c(-2.0 + 4.0 * uniform01(h), -2.0 + 4.0 * uniform01(h));
      if (std::abs(c) < 0.1) continue;
      bool ok = true;
      for (const auto& w : z) ok = ok && std::abs(w - c) >= 0.1;
      if (ok) z.push_back(c);
    }
    const auto [lhs, rhs] = partial_fractions(z);
    worst_pf = std::max(worst_pf, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  r.pass = worst_sine <= kIdentityAbs && worst_pf <= kFractionsRel;
  r.detail = "sine max abs " + fmt("%.2e", worst_sine) + ", fractions max rel " + fmt("%.2e", worst_pf);
  return r;
}

// ---- 2
CriterionResult dispersive() {
  CriterionResult r;
  const Grid3 g{128, 20.0};
  const SeparablePotential V0 = small_gaussian(TimeProfile::constant(0.0));
  r.pass = true;
  for (double t : {2.0, 4.0, 8.0}) {
    // width tied to t so the profile stays inside the box
    const WaveField psi0 = gaussian_field(g, t / 8.0);
    EvolveOptions eo;
    eo.record_every = 1000000;
    const Trajectory tr = evolve(psi0, V0, 0.0, t, 0.5, eo);
    const double scaled = measure_dispersive(tr).back().scaled;
    const double rel = std::abs(scaled / kFreeConstant - 1.0);
    r.pass = r.pass && rel <= kDispersiveRel;
    r.detail += "t=" + fmt("%g", t) + " ratio " + fmt("%.4f", scaled / kFreeConstant) + "; ";
  }
  return r;
}

// ---- 3
cplx periodized_gaussian(double a, double t, const Vec3& x, double L) {
  cplx sum{};
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k)
        sum += gaussian_free(a, t, {x[0] + 2 * L * i, x[1] + 2 * L * j, x[2] + 2 * L * k});
  return sum;
}

CriterionResult gaussian_oracle() {
  CriterionResult r;
  const Grid3 g{64, 12.0};
  const double a = 1.0;
  const WaveField psi0 = gaussian_field(g, a);
  double worst = 0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const WaveField num = free_evolve(psi0, t);
    const WaveField ref = WaveField::from_function(g, [&](const Vec3& x) { return periodized_gaussian(a, t, x, g.L); });
    const double e = relative_l2(num, ref);
    worst = std::max(worst, e);
    r.detail += "t=" + fmt("%g", t) + " " + fmt("%.1e", e) + "; ";
  }
  r.pass = worst <= kGaussianRel;
  return r;
}

// ---- 4
CriterionResult l2_monotone() {
  CriterionResult r;
  const Grid3 g{64, 12.0};
  const SeparablePotential V = small_gaussian(TimeProfile::cosine(1.0));
  const WaveField psi0 = gaussian_field(g, 1.0);
  const double n0 = field_norms(psi0).l2;
  const Trajectory tr = evolve(psi0, V, 0.0, 16.0, 0.05);
  double worst = 0;
  for (const auto& n : tr.norms) worst = std::max(worst, n.l2 / n0);
  r.pass = worst <= 1.0 + kL2Slack;
  r.detail = "max ratio - 1 = " + fmt("%.2e", worst - 1.0) + " over " + std::to_string(tr.norms.size()) + " samples";
  return r;
}

// ---- 5
CriterionResult kato_chain() {
  CriterionResult r;
  r.pass = true;
  const std::vector<std::pair<std::string, SpatialPotential>> pots{{"ball", BallIndicator{1.0, 1.0}},
                                                                   {"gaussian", Gaussian{1.0, 1.0}}};
  const Vec3 x0{0.3, 0.0, 0.0}, x1{-0.5, 0.4, 0.0};
  std::uint64_t seed = 0x5A;
  for (const auto& [name, V] : pots) {
    for (int k = 1; k <= 3; ++k) {
      const IteratedKato e = iterated_kato_estimate(V, k, x0, x1, kKatoSamples, seed++);
      const bool ok = e.estimate <= e.bound + kSigmas * e.std_error;
      r.pass = r.pass && ok;
      r.detail += name + " k=" + std::to_string(k) + " " + fmt("%.4g", e.estimate) + "<=" + fmt("%.4g", e.bound) +
                  (ok ? "" : " FAIL") + "; ";
      if (k == 1) {
        // telescoped: (A1)(x0) + (A1)(x1)
        const double exact = kato_apply_const(V, 1.0, x0) + kato_apply_const(V, 1.0, x1);
        const bool agree = std::abs(e.estimate - exact) <= kSigmas * e.std_error;
        r.pass = r.pass && agree;
        r.detail += "telescoped " + fmt("%.5g", exact) + " vs " + fmt("%.5g", e.estimate) + " +- " +
                    fmt("%.1e", e.std_error) + (agree ? "" : " FAIL") + "; ";
      }
    }
  }
  return r;
}

// ---- 6
struct SweepMax {
  double max_ratio = 0;
  std::size_t errors = 0;
  std::string first_error;
};

SweepMax sweep_max(const std::string& family, std::uint64_t seed) {
  const SweepBlock sw;
  SweepMax m;
  for (const auto& row : osc_sweep(sw, family, seed, kOscCount)) {
    if (!row.ok) {
      if (m.errors++ == 0) m.first_error = row.error;
      continue;
    }
    m.max_ratio = std::max(m.max_ratio, row.result.ratio);
  }
  return m;
}

CriterionResult osc_bounds(const AcceptOptions& opt) {
  CriterionResult r;
  const FittedConstants fc = load_constants(opt.constants_file);
  const auto C0 = fc.get("osc_C0");
  const auto Cs = fc.get("statphase_C");
  if (!C0 || !Cs) {
    r.detail = "constants missing in " + opt.constants_file + "; run accept --calibrate";
    return r;
  }
  const SweepMax lam = sweep_max("lambda", kValidationSeed);
  const SweepMax u = sweep_max("u", kValidationSeed);
  const SweepMax sp = sweep_max("statphase", kValidationSeed);
  const std::size_t errors = lam.errors + u.errors + sp.errors;
  r.pass = errors == 0 && lam.max_ratio <= *C0 && u.max_ratio <= *C0 && sp.max_ratio <= *Cs;
  r.detail = "lambda max " + fmt("%.4f", lam.max_ratio) + ", u max " + fmt("%.4f", u.max_ratio) + " vs C0 " +
             fmt("%.4f", *C0) + "; statphase max " + fmt("%.4f", sp.max_ratio) + " vs C " + fmt("%.4f", *Cs);
  if (errors) r.detail += "; " + std::to_string(errors) + " quadrature errors (" + lam.first_error + u.first_error +
                          sp.first_error + ")";
  return r;
}

// ---- 7
CriterionResult degenerate() {
  CriterionResult r;
  PhaseLambda p;
  p.sign = Sign::minus;
  p.b = {1.0, 1.0};
  const double m = static_cast<double>(p.m());
  for (double b : p.b) p.sigma.push_back(m * m * b * b);
  auto phi = [&](double x) {
    double v = 0.5 * x * x;
    for (std::size_t j = 0; j < p.m(); ++j) v -= p.b[j] * std::sqrt(x * x + p.sigma[j]);
    return v;
  };
  auto d1 = [&](double h) { return (phi(h) - phi(-h)) / (2 * h); };
  auto d2 = [&](double h) { return (phi(h) - 2 * phi(0) + phi(-h)) / (h * h); };
  auto d3 = [&](double h) { return (phi(2 * h) - 2 * phi(h) + 2 * phi(-h) - phi(-2 * h)) / (2 * h * h * h); };
  auto d4 = [&](double h) { return (phi(2 * h) - 4 * phi(h) + 6 * phi(0) - 4 * phi(-h) + phi(-2 * h)) / (h * h * h * h); };
  auto rich = [](auto f, double h) { return (4 * f(h / 2) - f(h)) / 3; };
  const double f1 = rich(d1, 1e-3), f2 = rich(d2, 1e-3), f3 = rich(d3, 1e-2), f4 = rich(d4, 0.02);
  double sinv = 0;
  for (double b : p.b) sinv += 1.0 / (b * b);
  const double target = 3.0 / (m * m) * sinv;
  const double rel = std::abs(f4 - target) / target;
  const bool small = std::abs(f1) <= kDegenerateSmall && std::abs(f2) <= kDegenerateSmall &&
                     std::abs(f3) <= kDegenerateSmall;
  r.pass = small && rel <= kDegenerateRel;
  r.detail = "phi' " + fmt("%.1e", f1) + " phi'' " + fmt("%.1e", f2) + " phi''' " + fmt("%.1e", f3) + "; phi'''' " +
             fmt("%.8f", f4) + " vs 3/m^2 sum b^-2 = " + fmt("%.4f", target) + " (rel " + fmt("%.2e", rel) + ")";
  return r;
}

// ---- 8
CriterionResult stein_tomas() {
  CriterionResult r;
  std::vector<SteinTomasResult> rs;
  for (double lam = 1.0; lam <= 256.0; lam *= 2.0) rs.push_back(stein_tomas_check(lam, gaussian_radial(1.0, lam)));
  const double slope = loglog_slope(rs);
  r.pass = std::abs(slope - kSlopeTarget) <= kSlopeTol;
  r.detail = "slope " + fmt("%.5f", slope) + " over lambda in [1, 256]";
  return r;
}

// ---- 9
CriterionResult born_crosscheck() {
  CriterionResult r;
  const Grid3 g{64, 12.0};
  const double a = 1.0, T = 2.0;
  const SeparablePotential V = small_gaussian(TimeProfile::constant());
  const WaveField psi0 = gaussian_field(g, a);
  const DuhamelResult d = duhamel_iterate(psi0, V, 0.0, T, 0.02, 4);
  const std::size_t origin = g.index(g.n / 2, g.n / 2, g.n / 2);
  const cplx grid1 = d.terms[1][origin];
  const McEstimateC mc = born_apply_gaussian(V, 1, T, 0.0, {0, 0, 0}, a, 400000, 0xB0);
  const double rel1 = std::abs(mc.value - grid1) / std::abs(grid1);

  EvolveOptions eo;
  eo.record_every = 1000000;
  eo.keep_fields = true;
  const Trajectory tr = evolve(psi0, V, 0.0, T, 0.02, eo);
  const double relp = relative_l2(d.partial_sum(4), tr.fields.back());
  double worst_ratio = 0;
  for (double q : d.ratios) worst_ratio = std::max(worst_ratio, q);
  r.pass = rel1 <= kBornRel && relp <= kPartialSumRel && worst_ratio <= kDecayRatio;
  r.detail = "kernel vs grid first iterate rel " + fmt("%.2e", rel1) + " (mc se " +
             fmt("%.1e", mc.std_error / std::abs(grid1)) + "); partial sum rel " + fmt("%.2e", relp) +
             "; max order ratio " + fmt("%.3e", worst_ratio);
  return r;
}

// ---- 10
CriterionResult timedep(const AcceptOptions& opt) {
  CriterionResult r;
  const FittedConstants fc = load_constants(opt.constants_file);
  const double C1 = fc.get("timedep_C1").value_or(kTimedepFactor * kFreeConstant);
  const Grid3 g{128, 40.0};
  const SeparablePotential V = small_gaussian(TimeProfile::cosine(1.0));
  const NormReport nr = y_norm(V, {}, 20000, opt.seed);
  const WaveField psi0 = gaussian_field(g, 1.0);
  const Trajectory tr = evolve(psi0, V, 0.0, 16.0, 0.1);
  double worst = 0;
  std::size_t n = 0;
  bool wrapped = false;
  for (const auto& d : measure_dispersive(tr, wrap_horizon(psi0))) {
    if (d.t < 1.0 - 1e-9) continue;
    worst = std::max(worst, d.scaled);
    wrapped = wrapped || d.past_wrap;
    ++n;
  }
  r.pass = nr.flags.y_small && !wrapped && worst <= C1;
  r.detail = "y " + fmt("%.4f", nr.y_norm) + (nr.flags.y_small ? " (small)" : " (NOT small)") + "; max scaled " +
             fmt("%.5f", worst) + " vs " + fmt("%.5f", C1) + " over " + std::to_string(n) + " samples" +
             (wrapped ? "; wrap horizon exceeded" : "");
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"identities", "dispersive", "gaussian", "l2",          "kato",
                                          "osc",        "degenerate", "stein-tomas", "born", "timedep"};
  return n;
}

int suite_id(const std::string& name) {
  if (name == "all") return 0;
  const auto& n = suite_names();
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] == name || std::to_string(i + 1) == name) return static_cast<int>(i + 1);
  return -1;
}

CriterionResult run_criterion(int id, const AcceptOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = identities(); break;
      case 2: r = dispersive(); break;
      case 3: r = gaussian_oracle(); break;
      case 4: r = l2_monotone(); break;
      case 5: r = kato_chain(); break;
      case 6: r = osc_bounds(opt); break;
      case 7: r = degenerate(); break;
      case 8: r = stein_tomas(); break;
      case 9: r = born_crosscheck(); break;
      case 10: r = timedep(opt); break;
      default: throw std::out_of_range("no criterion " + std::to_string(id));
    }
  } catch (const std::out_of_range&) {
    throw;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = suite_names()[static_cast<std::size_t>(id - 1)];
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_suite(int id, const AcceptOptions& opt, std::ostream* log) {
  std::vector<CriterionResult> out;
  const int lo = id == 0 ? 1 : id, hi = id == 0 ? 10 : id;
  for (int i = lo; i <= hi; ++i) {
    out.push_back(run_criterion(i, opt));
    if (log) *log << format_result(out.back()) << std::endl;
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-12s (%.1f s) ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

FittedConstants calibrate(const AcceptOptions& opt, std::ostream* log) {
  const SweepMax lam = sweep_max("lambda", kCalibrationSeed);
  const SweepMax u = sweep_max("u", kCalibrationSeed);
  const SweepMax sp = sweep_max("statphase", kCalibrationSeed);
  if (lam.errors + u.errors + sp.errors)
    throw QuadratureError("calibration sweep had quadrature errors: " + lam.first_error + u.first_error +
                          sp.first_error);
  FittedConstants fc;
  fc.values["osc_C0"] = kFitMargin * std::max(lam.max_ratio, u.max_ratio);
  fc.values["statphase_C"] = kFitMargin * sp.max_ratio;
  fc.values["timedep_C1"] = kTimedepFactor * kFreeConstant;
  std::string h = "fitted constants, written by accept --calibrate\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "calibration seed 0x%llX, %zu configs per family, margin %.2f\n",
                static_cast<unsigned long long>(kCalibrationSeed), kOscCount, kFitMargin);
  h += buf;
  std::snprintf(buf, sizeof buf, "observed max: lambda %.6f, u %.6f, statphase %.6f\n", lam.max_ratio, u.max_ratio,
                sp.max_ratio);
  h += buf;
  save_constants(opt.constants_file, fc, h);
  if (log) *log << h << "wrote " << opt.constants_file << std::endl;
  return fc;
}

}  // namespace displab
