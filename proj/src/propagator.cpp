#include "displab/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

#include "displab/simd.hpp"

namespace displab {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

// In-place 3D plans, one pair per n. FFTW's planner is not thread-safe.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }
  PlanPair get(std::size_t n) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> scratch(n * n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_3d(ni, ni, ni, buf, buf, FFTW_FORWARD, flags),
               fftw_plan_dft_3d(ni, ni, ni, buf, buf, FFTW_BACKWARD, flags)};
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plans() {
  static PlanCache c;
  return c;
}

void fft(WaveField& psi, bool forward) {
  const PlanPair p = plans().get(psi.grid().n);
  auto* buf = reinterpret_cast<fftw_complex*>(psi.values().data());
  fftw_execute_dft(forward ? p.fwd : p.bwd, buf, buf);
}

// e^{-i dt |xi|^2} / n^3, the normalization of the inverse transform folded in
std::vector<cplx> free_multiplier(const Grid3& g, double dt) {
  const std::size_t n = g.n;
  std::vector<double> k2(n);
  for (std::size_t k = 0; k < n; ++k) k2[k] = g.freq(k) * g.freq(k);
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<cplx> m(g.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[g.index(i, j, k)] = std::polar(scale, -dt * (k2[i] + k2[j] + k2[k]));
  return m;
}

void apply_free(WaveField& psi, const std::vector<cplx>& mult) {
  fft(psi, true);
  simd::cmul_inplace(psi.values(), mult);
  fft(psi, false);
}

std::vector<double> sample_v0(const Grid3& g, const SpatialPotential& V0) {
  std::vector<double> v(g.size());
  const std::size_t n = g.n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) v[g.index(i, j, k)] = V0({g.coord(i), g.coord(j), g.coord(k)});
  return v;
}

void check_same_grid(const Grid3& a, const Grid3& b) {
  if (a.n != b.n || a.L != b.L) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

void Grid3::validate() const {
  if (n < 16 || !std::has_single_bit(n)) throw std::invalid_argument("grid: n must be a power of two >= 16");
  if (!(L > 0)) throw std::invalid_argument("grid: L must be positive");
}

double Grid3::freq(std::size_t k) const {
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  auto kk = static_cast<std::ptrdiff_t>(k);
  if (kk >= half) kk -= static_cast<std::ptrdiff_t>(n);
  return pi * static_cast<double>(kk) / L;
}

WaveField::WaveField(const Grid3& g) : grid_(g), values_(g.size()) { g.validate(); }

WaveField WaveField::from_function(const Grid3& g, const std::function<cplx(const Vec3&)>& f) {
  WaveField w(g);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      for (std::size_t k = 0; k < g.n; ++k) w[g.index(i, j, k)] = f({g.coord(i), g.coord(j), g.coord(k)});
  return w;
}

Vec3 WaveField::point(std::size_t idx) const {
  const std::size_t n = grid_.n;
  const std::size_t k = idx % n, j = (idx / n) % n, i = idx / (n * n);
  return {grid_.coord(i), grid_.coord(j), grid_.coord(k)};
}

FieldNorms field_norms(const WaveField& psi) {
  const simd::FieldSums s = simd::field_sums(psi.values());
  const double c = psi.grid().cell();
  return {s.abs1 * c, std::sqrt(s.abs2 * c), std::cbrt(std::sqrt(s.abs6 * c)), s.max_abs};
}

double relative_l2(const WaveField& a, const WaveField& b) {
  check_same_grid(a.grid(), b.grid());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

WaveField free_evolve(const WaveField& psi, double dt) {
  WaveField out = psi;
  if (dt == 0.0) return out;
  apply_free(out, free_multiplier(psi.grid(), dt));
  return out;
}

SplitStepper::SplitStepper(const Grid3& g, const SeparablePotential& V, double dt)
    : grid_(g), V_(V), dt_(dt), v0_(sample_v0(g, V.space())), free_mult_(free_multiplier(g, dt)) {
  g.validate();
  const double supv = fourier_mass(V) * V.space().sup_abs();
  if (std::abs(dt) * supv > 0.5)
    throw StabilityError("split step: dt * sup|V| = " + std::to_string(std::abs(dt) * supv) + " exceeds 0.5");
}

void SplitStepper::free_step(WaveField& psi) const { apply_free(psi, free_mult_); }

void SplitStepper::multiply_potential(WaveField& psi, double t) const {
  const double phi = V_.time()(t);
  auto v = psi.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= phi * v0_[i];
}

void SplitStepper::step(WaveField& psi, double t) const {
  check_same_grid(psi.grid(), grid_);
  const double phi = V_.time()(t + 0.5 * dt_);
  auto v = psi.values();
  if (phi != 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, -0.5 * dt_ * phi * v0_[i]);
  }
  apply_free(psi, free_mult_);
  if (phi != 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, -0.5 * dt_ * phi * v0_[i]);
  }
}

WaveField step_splitstep(const WaveField& psi, const SeparablePotential& V, double t, double dt) {
  WaveField out = psi;
  SplitStepper(psi.grid(), V, dt).step(out, t);
  return out;
}

Trajectory evolve(const WaveField& psi_s, const SeparablePotential& V, double s, double t, double dt,
                  const EvolveOptions& opt) {
  if (!(t > s)) throw std::invalid_argument("evolve: need t > s");
  if (!(dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil((t - s) / dt - 1e-9));
  const double h = (t - s) / static_cast<double>(steps);
  const SplitStepper st(psi_s.grid(), V, h);
  Trajectory tr;
  tr.s = s;
  WaveField psi = psi_s;
  auto record = [&](std::size_t k, double time) {
    tr.times.push_back(time);
    tr.norms.push_back(field_norms(psi));
    if (opt.keep_fields) tr.fields.push_back(psi);
    if (opt.on_record) opt.on_record(k, time, psi);
  };
  tr.l1_initial = field_norms(psi).l1;
  record(0, s);
  const std::size_t every = std::max<std::size_t>(1, opt.record_every);
  for (std::size_t k = 0; k < steps; ++k) {
    st.step(psi, s + h * static_cast<double>(k));
    if ((k + 1) % every == 0 || k + 1 == steps) record(k + 1, s + h * static_cast<double>(k + 1));
  }
  return tr;
}

WaveField DuhamelResult::partial_sum(std::size_t m) const {
  WaveField out = terms.at(0);
  for (std::size_t j = 1; j <= m && j < terms.size(); ++j) {
    auto o = out.values();
    auto v = terms[j].values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += v[i];
  }
  return out;
}

DuhamelResult duhamel_iterate(const WaveField& psi_s, const SeparablePotential& V, double s, double t, double dt,
                              std::size_t m_max, bool require_small, const NormThresholds& th) {
  if (!(t > s)) throw std::invalid_argument("duhamel: need t > s");
  if (require_small && m_max > 0) {
    const NormReport r = y_norm(V, th, 1000, 1);
    if (!r.flags.y_small)
      throw std::domain_error("duhamel: potential is not y-small (y = " + std::to_string(r.y_norm) + ")");
  }
  const auto steps = static_cast<std::size_t>(std::ceil((t - s) / dt - 1e-9));
  const double h = (t - s) / static_cast<double>(steps);
  const SplitStepper st(psi_s.grid(), V, h);
  std::vector<WaveField> cur(m_max + 1, WaveField(psi_s.grid()));
  cur[0] = psi_s;
  WaveField tmp(psi_s.grid());
  for (std::size_t n = 0; n < steps; ++n) {
    const double t0 = s + h * static_cast<double>(n), t1 = t0 + h;
    // pre-step sources V(t_n) psi_{j-1}(t_n), taken before anything is overwritten
    std::vector<WaveField> src(m_max + 1);
    for (std::size_t j = 1; j <= m_max; ++j) {
      src[j] = cur[j - 1];
      st.multiply_potential(src[j], t0);
    }
    st.free_step(cur[0]);
    for (std::size_t j = 1; j <= m_max; ++j) {
      auto c = cur[j].values();
      auto sv = src[j].values();
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= cplx(0.0, 0.5 * h) * sv[i];
      st.free_step(cur[j]);
      tmp = cur[j - 1];  // already at t_{n+1}
      st.multiply_potential(tmp, t1);
      auto tv = tmp.values();
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= cplx(0.0, 0.5 * h) * tv[i];
    }
  }
  DuhamelResult res;
  res.terms = std::move(cur);
  for (const auto& f : res.terms) res.term_norms.push_back(field_norms(f).l2);
  for (std::size_t j = 1; j < res.term_norms.size(); ++j) {
    const double prev = res.term_norms[j - 1];
    res.ratios.push_back(prev > 0 ? res.term_norms[j] / prev : 0.0);
    if (res.ratios.back() >= 1.0) res.contraction_warning = true;
  }
  return res;
}

double wrap_horizon(const WaveField& psi0) {
  WaveField f = psi0;
  fft(f, true);
  double peak = 0;
  for (const cplx& z : f.values()) peak = std::max(peak, std::abs(z));
  if (peak == 0) return std::numeric_limits<double>::infinity();
  const Grid3& g = f.grid();
  double lam = 0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (std::abs(f[idx]) < 1e-8 * peak) continue;
    const std::size_t k = idx % g.n, j = (idx / g.n) % g.n, i = idx / (g.n * g.n);
    const double xi = std::sqrt(g.freq(i) * g.freq(i) + g.freq(j) * g.freq(j) + g.freq(k) * g.freq(k));
    lam = std::max(lam, xi);
  }
  if (lam == 0) return std::numeric_limits<double>::infinity();
  return g.L * static_cast<double>(g.n) / (2.0 * pi * lam);
}

std::vector<DispersiveRecord> measure_dispersive(const Trajectory& traj, double wrap) {
  std::vector<DispersiveRecord> out;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double dt = traj.times[k] - traj.s;
    if (!(dt > 0)) continue;
    DispersiveRecord r;
    r.t = traj.times[k];
    r.scaled = traj.l1_initial > 0 ? traj.norms[k].linf * std::pow(dt, 1.5) / traj.l1_initial : 0.0;
    r.past_wrap = wrap > 0 && dt > wrap;
    out.push_back(r);
  }
  return out;
}

StrichartzNorms measure_strichartz(const Trajectory& traj) {
  StrichartzNorms s;
  double integral = 0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    s.sup_l2 = std::max(s.sup_l2, traj.norms[k].l2);
    if (k > 0) {
      const double a = traj.norms[k - 1].l6, b = traj.norms[k].l6;
      integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (a * a + b * b);
    }
  }
  s.l2_l6 = std::sqrt(integral);
  return s;
}

void write_snapshot(const std::filesystem::path& file, const WaveField& psi) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  const auto n = static_cast<std::uint32_t>(psi.grid().n);
  const double L = psi.grid().L;
  out.write("WF3D", 4);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(psi.values().data()),
            static_cast<std::streamsize>(psi.values().size() * sizeof(cplx)));
}

WaveField read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  char magic[4];
  std::uint32_t n = 0;
  double L = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  if (!in || std::memcmp(magic, "WF3D", 4) != 0) throw std::runtime_error("not a WF3D snapshot: " + file.string());
  WaveField w(Grid3{n, L});
  in.read(reinterpret_cast<char*>(w.values().data()), static_cast<std::streamsize>(w.values().size() * sizeof(cplx)));
  if (!in) throw std::runtime_error("truncated snapshot: " + file.string());
  return w;
}

}  // namespace displab
