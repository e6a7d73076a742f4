#include "displab/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "displab/acceptance.hpp"
#include "displab/born.hpp"
#include "displab/config.hpp"
#include "displab/propagator.hpp"
#include "displab/stein_tomas.hpp"
#include "displab/sweep.hpp"

namespace displab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Loaded {
  ExperimentConfig cfg;
  std::string hash;
};

Loaded load(const std::string& file) {
  const RawConfig raw = file.empty() ? RawConfig{} : RawConfig::load(file);
  Loaded l{build_config(raw), ""};
  l.hash = fnv1a_hex(l.cfg.hash);
  return l;
}

// Output goes to the file when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    file_.open(p);
    if (!file_) throw std::runtime_error("cannot write " + path);
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_norms(const std::string& config, std::size_t samples, std::uint64_t seed, const std::string& out) {
  const Loaded l = load(config);
  const NormReport r = y_norm(l.cfg.potential, l.cfg.thresholds, samples, seed);
  Sink s(out);
  s.out() << "# config_hash=" << l.hash << "\n"
          << "rollnik,rollnik_se,kato,l32,ynorm,rollnik_small,kato_small,y_small\n"
          << num(r.rollnik) << ',' << num(r.rollnik_se) << ',' << num(r.kato_global) << ',' << num(r.l32) << ','
          << num(r.y_norm) << ',' << r.flags.rollnik_small << ',' << r.flags.kato_small << ',' << r.flags.y_small
          << "\n";
  return 0;
}

int cmd_oscsweep(const std::string& config, std::string family, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
  const Loaded l = load(config);
  if (family.empty()) family = l.cfg.sweep.family;
  if (family != "lambda" && family != "u" && family != "statphase")
    throw ConfigError("--family must be lambda, u or statphase");
  if (n == 0) n = l.cfg.sweep.count;
  const auto rows = osc_sweep(l.cfg.sweep, family, seed, n);
  Sink s(out);
  write_sweep_csv(s.out(), rows, l.hash);
  std::size_t bad = 0;
  for (const auto& r : rows) bad += r.ok ? 0 : 1;
  if (bad) std::cerr << bad << " configurations failed to integrate\n";
  return 0;
}

int cmd_born(const std::string& config, int m, double t, double s, std::size_t samples, std::uint64_t seed,
             const std::vector<double>& x, const std::vector<double>& y, const std::string& out) {
  const Loaded l = load(config);
  if (m < 0 || m > 2) throw ConfigError("--m must be 0, 1 or 2");
  if (!(t > s)) throw ConfigError("--t must exceed --s");
  const Vec3 X{x[0], x[1], x[2]}, Y{y[0], y[1], y[2]};
  const NormReport nr = y_norm(l.cfg.potential, l.cfg.thresholds, 20000, seed);
  const double T = t - s;
  Sink sk(out);
  sk.out() << "# config_hash=" << l.hash << "\n"
           << "order,t,s,value_re,value_im,std_error,bound,scaled\n";
  for (int j = 0; j <= m; ++j) {
    const McEstimateC e = born_kernel(l.cfg.potential, j, t, s, X, Y, samples, seed + static_cast<std::uint64_t>(j));
    const double bound = std::pow(4.0 * pi, -1.5) * std::pow(nr.y_norm, j);
    sk.out() << j << ',' << num(t) << ',' << num(s) << ',' << num(e.value.real()) << ',' << num(e.value.imag()) << ','
             << num(e.std_error) << ',' << num(bound) << ',' << num(std::abs(e.value) * std::pow(T, 1.5)) << "\n";
  }
  return 0;
}

int cmd_evolve(const std::string& config, double t, double dt, std::size_t snap_every, const std::string& out) {
  const Loaded l = load(config);
  const SolverBlock& sb = l.cfg.solver;
  if (t <= 0) t = sb.t_final;
  if (dt <= 0) dt = sb.dt;
  if (snap_every == 0) snap_every = sb.snap_every;
  if (!(t > sb.s)) throw ConfigError("--t must exceed solver.s");
  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);
  const double a = l.cfg.initial.a;
  const WaveField psi0 = WaveField::from_function(
      l.cfg.grid, [a](const Vec3& x) { return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (4 * a))); });
  EvolveOptions eo;
  std::size_t snaps = 0;
  if (snap_every > 0) {
    eo.on_record = [&](std::size_t step, double, const WaveField& f) {
      if (step % snap_every != 0) return;
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06zu.wf3d", step);
      write_snapshot(dir / name, f);
      ++snaps;
    };
  }
  const Trajectory tr = evolve(psi0, l.cfg.potential, sb.s, t, dt, eo);
  std::ofstream csv(dir / "norms.csv");
  if (!csv) throw std::runtime_error("cannot write " + (dir / "norms.csv").string());
  csv << "# config_hash=" << l.hash << "\n"
      << "t,l2,l6,linf,linf_scaled\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double T = tr.times[k] - tr.s;
    const double scaled = T > 0 ? tr.norms[k].linf * std::pow(T, 1.5) / tr.l1_initial : 0.0;
    csv << num(tr.times[k]) << ',' << num(tr.norms[k].l2) << ',' << num(tr.norms[k].l6) << ','
        << num(tr.norms[k].linf) << ',' << num(scaled) << "\n";
  }
  std::cerr << "wrote " << tr.times.size() << " norm rows and " << snaps << " snapshots to " << dir.string() << "\n";
  return 0;
}

int cmd_stein_tomas(double lmin, double lmax, std::size_t points, const std::string& out) {
  if (!(lmin > 0 && lmax > lmin) || points < 2) throw ConfigError("need 0 < --lmin < --lmax and --points >= 2");
  std::vector<SteinTomasResult> rs;
  for (std::size_t i = 0; i < points; ++i) {
    const double lam = lmin * std::pow(lmax / lmin, static_cast<double>(i) / static_cast<double>(points - 1));
    rs.push_back(stein_tomas_check(lam, gaussian_radial(1.0, lam)));
  }
  Sink s(out);
  s.out() << "# slope=" << num(loglog_slope(rs)) << "\n"
          << "lambda,r4,f43,ratio\n";
  for (const auto& r : rs) s.out() << num(r.lambda) << ',' << num(r.r4) << ',' << num(r.f43) << ',' << num(r.ratio) << "\n";
  return 0;
}

int cmd_accept(const std::string& suite, bool calib, const std::string& constants, std::uint64_t seed) {
  AcceptOptions opt;
  if (!constants.empty()) opt.constants_file = constants;
  opt.seed = seed;
  if (calib) {
    calibrate(opt, &std::cout);
    return 0;
  }
  const int id = suite_id(suite);
  if (id < 0) throw ConfigError("unknown suite '" + suite + "'");
  bool ok = true;
  for (const auto& r : run_suite(id, opt, &std::cout)) ok = ok && r.pass;
  return ok ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"dispersive estimate laboratory"};
  app.require_subcommand(1);

  std::string config, out, family, suite = "all", constants;
  std::size_t samples = 200000, n = 0, snap_every = 0, points = 9;
  std::uint64_t seed = 1;
  int m = 1;
  double t = 4.0, s = 0.0, dt = 0.0, lmin = 1.0, lmax = 256.0;
  std::vector<double> x{0, 0, 0}, y{1, 0, 0};
  bool calib = false;

  auto* norms = app.add_subcommand("norms", "norm report of the configured potential (CSV)");
  norms->add_option("--config", config);
  norms->add_option("--samples", samples);
  norms->add_option("--seed", seed);
  norms->add_option("--out", out);

  auto* osc = app.add_subcommand("oscsweep", "seeded oscillatory-integral sweep (CSV)");
  osc->add_option("--config", config);
  osc->add_option("--family", family);
  osc->add_option("--n", n);
  osc->add_option("--seed", seed);
  osc->add_option("--out", out);

  auto* ids = app.add_subcommand("identities", "randomized algebraic identity checks");

  auto* born = app.add_subcommand("born-verify", "Born kernel terms at a point pair (CSV)");
  born->add_option("--config", config);
  born->add_option("--m", m);
  born->add_option("--t", t);
  born->add_option("--s", s);
  born->add_option("--samples", samples);
  born->add_option("--seed", seed);
  born->add_option("--x", x)->expected(3)->delimiter(',');
  born->add_option("--y", y)->expected(3)->delimiter(',');
  born->add_option("--out", out);

  auto* evo = app.add_subcommand("evolve", "split-step evolution with snapshots and norms.csv");
  evo->add_option("--config", config);
  double t_evo = 0.0;
  evo->add_option("--t", t_evo, "final time (default solver.t_final)");
  evo->add_option("--dt", dt);
  evo->add_option("--snap-every", snap_every);
  evo->add_option("--out", out)->required();

  auto* st = app.add_subcommand("stein-tomas", "resolvent L4/L(4/3) ratios over lambda (CSV)");
  st->add_option("--lmin", lmin);
  st->add_option("--lmax", lmax);
  st->add_option("--points", points);
  st->add_option("--out", out);

  auto* acc = app.add_subcommand("accept", "acceptance suite");
  acc->add_option("--suite", suite);
  acc->add_flag("--calibrate", calib);
  acc->add_option("--constants", constants);
  acc->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*norms) return cmd_norms(config, samples, seed, out);
    if (*osc) return cmd_oscsweep(config, family, n, seed, out);
    if (*ids) return cmd_accept("identities", false, "", seed);
    if (*born) return cmd_born(config, m, t, s, samples, seed, x, y, out);
    if (*evo) return cmd_evolve(config, t_evo, dt, snap_every, out);
    if (*st) return cmd_stein_tomas(lmin, lmax, points, out);
    if (*acc) return cmd_accept(suite, calib, constants, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace displab
