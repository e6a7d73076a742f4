#include "displab/born.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "displab/kernels.hpp"
#include "displab/mc.hpp"
#include "displab/norms.hpp"
#include "displab/rng.hpp"

namespace displab {

namespace {

constexpr cplx I{0.0, 1.0};

cplx ipow_minus_i(int n) {
  static const cplx cyc[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return cyc[((n % 4) + 4) % 4];
}

std::vector<double> link_lengths(const ChainSample& c) {
  std::vector<double> r(c.points.size() - 1);
  for (std::size_t j = 0; j + 1 < c.points.size(); ++j) r[j] = dist3(c.points[j], c.points[j + 1]);
  return r;
}

// prod V0(x_i) over interior points times prod 1/(4 pi r)
double chain_density(const ChainSample& c, const std::vector<double>& r, const SpatialPotential& V0) {
  double v = 1.0;
  for (std::size_t j = 1; j + 1 < c.points.size(); ++j) v *= V0(c.points[j]);
  for (double rr : r) v /= four_pi * rr;
  return v;
}

}  // namespace

ChainSampler::ChainSampler(const SpatialPotential& V0, std::size_t k)
    : k_(k), scale_(length_scale(V0)), pot_(V0, 2.0, 1.0) {}

double ChainSampler::shell_pdf(const Vec3& x, const Vec3& c) const {
  const double rho = dist3(x, c);
  if (rho == 0.0) return 0.0;
  const double u = 1.0 + rho / scale_;
  return (1.0 / scale_) / (u * u) / (four_pi * rho * rho);
}

Vec3 ChainSampler::shell_draw(const Vec3& c, std::mt19937_64& g) const {
  const double u = uniform01(g);
  const double rho = scale_ * u / (1.0 - u);
  const Vec3 d = random_direction(g);
  return {c[0] + rho * d[0], c[1] + rho * d[1], c[2] + rho * d[2]};
}

ChainSample ChainSampler::draw(const Vec3& x0, const Vec3& xend, std::mt19937_64& g) const {
  ChainSample s;
  s.points.reserve(k_ + 2);
  s.points.push_back(x0);
  double q_total = 1.0;
  for (std::size_t j = 1; j <= k_; ++j) {
    const Vec3 prev = s.points.back();
    const bool last = j == k_;
    const double w_prev = last ? 0.3 : 0.5, w_end = last ? 0.4 : 0.0, w_pot = 1.0 - w_prev - w_end;
    Vec3 x{};
    for (;;) {
      const double u = uniform01(g);
      if (u < w_prev) x = shell_draw(prev, g);
      else if (u < w_prev + w_end) x = shell_draw(xend, g);
      else x = pot_.sample_point(g);
      if (dist3(x, prev) > 0.0 && (!last || dist3(x, xend) > 0.0)) break;
    }
    double q = w_prev * shell_pdf(x, prev) + w_pot * pot_.pdf3(norm3(x));
    if (w_end > 0) q += w_end * shell_pdf(x, xend);
    q_total *= q;
    s.points.push_back(x);
  }
  s.points.push_back(xend);
  s.weight = 1.0 / q_total;
  return s;
}

McEstimate kato_apply(const SpatialPotential& V0, const std::function<double(const Vec3&)>& f, const Vec3& x,
                      std::size_t samples, std::uint64_t seed) {
  if (V0.sup_abs() == 0.0) return {0.0, 0.0, samples};
  const ChainSampler cs(V0, 1);
  return mc_mean(samples, seed, [&](std::mt19937_64& g) {
    // endpoint = x as well, so the mixture puts 0.7 of its mass in shells around x
    const ChainSample c = cs.draw(x, x, g);
    const Vec3& y = c.points[1];
    return std::abs(V0(y)) * f(y) / dist3(x, y) * c.weight;
  });
}

double kato_apply_const(const SpatialPotential& V0, double c, const Vec3& x) {
  return c * newton_potential(V0, norm3(x));
}

IteratedKato iterated_kato_estimate(const SpatialPotential& V0, int k, const Vec3& x0, const Vec3& xk1,
                                    std::size_t samples, std::uint64_t seed) {
  if (k < 1 || k > 3) throw std::invalid_argument("iterated Kato estimate: k must be 1, 2 or 3");
  if (dist3(x0, xk1) == 0.0) throw std::invalid_argument("iterated Kato estimate: endpoints must differ");
  IteratedKato out;
  const double K = kato_global(V0);
  out.bound = (k + 1) * std::pow(K, k);
  if (V0.sup_abs() == 0.0) return out;
  const ChainSampler cs(V0, static_cast<std::size_t>(k));
  const McEstimate e = mc_mean(samples, seed, [&](std::mt19937_64& g) {
    const ChainSample c = cs.draw(x0, xk1, g);
    double v = c.weight;
    for (int j = 1; j <= k; ++j) v *= std::abs(V0(c.points[j]));
    if (v == 0.0) return 0.0;
    double sum = 0.0, prod = 1.0;
    for (int j = 0; j <= k; ++j) {
      const double d = dist3(c.points[j], c.points[j + 1]);
      sum += d;
      prod *= d;
    }
    return v * sum / prod;
  });
  out.estimate = e.value;
  out.std_error = e.std_error;
  out.low_precision = e.value > 0 && e.std_error / e.value > 0.05;
  return out;
}

std::pair<cplx, double> sine_telescope(const std::vector<double>& a) {
  if (a.size() < 2) throw std::invalid_argument("sine telescope needs at least two entries");
  const std::size_t n = a.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + a[k];
  cplx lhs{};
  double prefix = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    lhs += std::polar(1.0, prefix - suffix[k + 1]) * std::sin(a[k]);
    prefix += a[k];
  }
  return {lhs, std::sin(std::accumulate(a.begin(), a.end(), 0.0))};
}

std::pair<cplx, cplx> partial_fractions(const std::vector<cplx>& z) {
  if (z.empty()) throw std::invalid_argument("partial fractions: empty input");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == cplx{}) throw DomainError("partial fractions: zero entry");
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < 1e-8) throw DomainError("partial fractions: entries closer than 1e-8");
  }
  cplx lhs{}, rhs{1.0, 0.0};
  for (std::size_t k = 0; k < z.size(); ++k) {
    cplx term = 1.0 / z[k];
    for (std::size_t r = 0; r < z.size(); ++r)
      if (r != k) term /= (z[r] - z[k]);
    lhs += term;
    rhs /= z[k];
  }
  return {lhs, rhs};
}

void BornTermParams::validate() const {
  if (m < 0) throw std::invalid_argument("Born term: negative order");
  if (taus.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("Born term: need m frequencies");
  if (!(t > s)) throw std::invalid_argument("Born term: need t > s");
}

std::vector<double> BornTermParams::sigmas() const {
  std::vector<double> th(static_cast<std::size_t>(m) + 1, 0.0);
  for (int r = 1; r <= m; ++r) th[r] = th[r - 1] + taus[r - 1];
  const double mn = *std::min_element(th.begin(), th.end());
  for (double& v : th) v -= mn;
  return th;
}

double BornTermParams::theta_min() const {
  double th = 0.0, mn = 0.0;
  for (double v : taus) {
    th += v;
    mn = std::min(mn, th);
  }
  return mn;
}

std::vector<double> BornTermParams::omegas() const {
  std::vector<double> w = sigmas();
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

std::size_t BornTermParams::link_of_rank(std::size_t c) const {
  const std::vector<double> sg = sigmas();
  std::vector<std::size_t> idx(sg.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sg[a] > sg[b]; });
  return idx.at(c - 1);
}

std::vector<double> BornTermParams::rhos(std::size_t d) const {
  const std::vector<double> w = omegas();
  std::vector<double> out;
  for (std::size_t a = d; a <= w.size(); ++a) out.push_back(w[d - 2] - w[a - 1]);
  return out;
}

cplx BornTermParams::prefactor() const {
  return ipow_minus_i(m + 1) / (pi * T()) * std::polar(1.0, theta_min() * T());
}

cplx born_inner_L(const BornTermParams& p, std::size_t ell, const std::vector<double>& r, const OscOptions& opt) {
  p.validate();
  const std::size_t n = static_cast<std::size_t>(p.m) + 1;
  if (r.size() != n || ell >= n) throw std::out_of_range("born_inner_L: bad link index");
  const double sc = std::sqrt(2.0 * p.T());
  const std::vector<double> sg = p.sigmas();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sg[a] > sg[b]; });
  PhaseLambda ph;
  DampedWeight w;
  w.kind = DampedWeight::Kind::kato;
  for (std::size_t j = 0; j < n; ++j) {
    ph.b.push_back(r[idx[j]] / sc);
    ph.sigma.push_back(2.0 * p.T() * sg[idx[j]]);
    if (idx[j] == ell) w.k = j;
  }
  ph.sign = Sign::plus;
  const cplx ip = osc_integral_lambda(ph, w, kInfinity, opt).value;
  ph.sign = Sign::minus;
  const cplx im = osc_integral_lambda(ph, w, kInfinity, opt).value;
  return std::conj((ip + im) / (2.0 * sc));
}

cplx born_inner_M(const BornTermParams& p, std::size_t d, std::size_t c, bool tilde, const std::vector<double>& r,
                  const OscOptions& opt) {
  p.validate();
  const std::size_t n = static_cast<std::size_t>(p.m) + 1;
  if (r.size() != n) throw std::out_of_range("born_inner_M: need m+1 link lengths");
  if (d < 2 || d > n) throw std::out_of_range("born_inner_M: region index out of range");
  if (tilde ? (c < d || c > n) : (c < 1 || c >= d)) throw std::out_of_range("born_inner_M: weight index out of range");
  const std::vector<double> w = p.omegas();
  const double rho_d = w[d - 2] - w[d - 1];
  if (!(rho_d > 0)) return {};
  const double T = p.T(), sc = std::sqrt(2.0 * T);
  PhaseLambda ph;
  for (std::size_t cc = 1; cc < d; ++cc) {
    ph.b.push_back(r[p.link_of_rank(cc)] / sc);
    ph.sigma.push_back(2.0 * T * (w[cc - 1] - w[d - 2]));
  }
  DampedWeight dw;
  for (std::size_t a = n; a >= d; --a) {
    dw.rho.push_back(2.0 * T * (w[d - 2] - w[a - 1]));
    dw.c.push_back(r[p.link_of_rank(a)] / sc);
  }
  if (tilde) {
    dw.kind = DampedWeight::Kind::singular;
    dw.k = n - c;
  } else {
    dw.kind = DampedWeight::Kind::kato;
    dw.k = c - 1;
  }
  ph.sign = Sign::plus;
  const cplx ip = osc_integral_lambda(ph, dw, kInfinity, opt).value;
  ph.sign = Sign::minus;
  const cplx im = osc_integral_lambda(ph, dw, kInfinity, opt).value;
  if (tilde) return std::conj((ip - im) / (2.0 * I)) / sc;
  return std::conj((ip + im) / 2.0) / sc;
}

cplx born_bracket(const BornTermParams& p, const std::vector<double>& r, const OscOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(p.m) + 1;
  const std::vector<double> sg = p.sigmas();
  cplx total{};
  // the L integral depends on ell only through sigma_ell
  std::vector<std::pair<double, cplx>> cache;
  for (std::size_t ell = 0; ell < n; ++ell) {
    cplx J{};
    auto hit = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return e.first == sg[ell]; });
    if (hit != cache.end()) {
      J = hit->second;
    } else {
      J = born_inner_L(p, ell, r, opt);
      cache.emplace_back(sg[ell], J);
    }
    total += r[ell] * J;
  }
  const std::vector<double> w = p.omegas();
  for (std::size_t d = 2; d <= n; ++d) {
    if (!(w[d - 2] - w[d - 1] > 0)) continue;
    cplx region{};
    for (std::size_t c = 1; c < d; ++c) region += r[p.link_of_rank(c)] * born_inner_M(p, d, c, false, r, opt);
    for (std::size_t a = d; a <= n; ++a) region += r[p.link_of_rank(a)] * born_inner_M(p, d, a, true, r, opt);
    total += std::polar(1.0, w[d - 2] * p.T()) * region;
  }
  return total;
}

McEstimateC born_kernel_L(const BornTermParams& p, std::size_t ell, const Vec3& x, const Vec3& y,
                          const SpatialPotential& V0, std::size_t samples, std::uint64_t seed) {
  p.validate();
  if (p.m > 2) throw std::invalid_argument("Born kernels are evaluated for m <= 2 only");
  if (p.m == 0) {
    const std::vector<double> r{dist3(x, y)};
    return {born_inner_L(p, ell, r) / four_pi, 0.0, 1};
  }
  const ChainSampler cs(V0, static_cast<std::size_t>(p.m));
  return mc_mean_complex(samples, seed, [&](std::mt19937_64& g) {
    const ChainSample c = cs.draw(x, y, g);
    const std::vector<double> r = link_lengths(c);
    const double dens = chain_density(c, r, V0);
    if (dens == 0.0) return cplx{};
    return dens * c.weight * r[ell] * born_inner_L(p, ell, r);
  });
}

McEstimateC born_kernel_M(const BornTermParams& p, std::size_t d, std::size_t ell, bool tilde, const Vec3& x,
                          const Vec3& y, const SpatialPotential& V0, std::size_t samples, std::uint64_t seed) {
  p.validate();
  if (p.m > 2) throw std::invalid_argument("Born kernels are evaluated for m <= 2 only");
  if (p.m == 0) return {};
  const ChainSampler cs(V0, static_cast<std::size_t>(p.m));
  const std::vector<double> w = p.omegas();
  if (d >= 2 && d <= w.size() && !(w[d - 2] - w[d - 1] > 0)) return {{}, 0.0, 0};
  return mc_mean_complex(samples, seed, [&](std::mt19937_64& g) {
    const ChainSample c = cs.draw(x, y, g);
    const std::vector<double> r = link_lengths(c);
    const double dens = chain_density(c, r, V0);
    if (dens == 0.0) return cplx{};
    return dens * c.weight * r[p.link_of_rank(ell)] * born_inner_M(p, d, ell, tilde, r);
  });
}

namespace {

struct Combo {
  BornTermParams params;
  cplx coeff;  // (-i)^m prod c e^{i s sum theta} * prefactor
};

std::vector<Combo> atom_combos(const SeparablePotential& V, int m, double t, double s) {
  const auto& atoms = V.time().atoms();
  std::vector<Combo> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  for (;;) {
    Combo c;
    c.params.m = m;
    c.params.t = t;
    c.params.s = s;
    cplx coef = ipow_minus_i(m);
    double th_sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const TimeAtom& a = atoms[pick[i]];
      const double th = 2.0 * pi * a.freq;
      c.params.taus.push_back(th);
      coef *= a.coeff;
      th_sum += th;
    }
    c.params.validate();
    c.coeff = coef * std::polar(1.0, s * th_sum) * c.params.prefactor();
    out.push_back(std::move(c));
    int i = m - 1;
    while (i >= 0 && ++pick[i] == atoms.size()) pick[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

cplx chain_value(const std::vector<Combo>& combos, const ChainSample& c, const SpatialPotential& V0) {
  const std::vector<double> r = link_lengths(c);
  const double dens = chain_density(c, r, V0);
  if (dens == 0.0) return {};
  cplx sum{};
  for (const Combo& cb : combos) sum += cb.coeff * born_bracket(cb.params, r);
  return dens * c.weight * sum;
}

}  // namespace

McEstimateC born_kernel(const SeparablePotential& V, int m, double t, double s, const Vec3& x, const Vec3& y,
                        std::size_t samples, std::uint64_t seed) {
  if (m < 0 || m > 2) throw std::invalid_argument("Born kernels are evaluated for m <= 2 only");
  if (!(t > s)) throw std::invalid_argument("Born kernel: need t > s");
  if (m == 0) return {free_propagator_kernel(t - s, dist3(x, y)), 0.0, 1};
  const auto combos = atom_combos(V, m, t, s);
  const ChainSampler cs(V.space(), static_cast<std::size_t>(m));
  return mc_mean_complex(samples, seed,
                         [&](std::mt19937_64& g) { return chain_value(combos, cs.draw(x, y, g), V.space()); });
}

McEstimateC born_apply_gaussian(const SeparablePotential& V, int m, double t, double s, const Vec3& x, double a,
                                std::size_t samples, std::uint64_t seed) {
  if (m < 1 || m > 2) throw std::invalid_argument("born_apply_gaussian: m must be 1 or 2");
  if (!(a > 0)) throw std::invalid_argument("born_apply_gaussian: width must be positive");
  if (!(t > s)) throw std::invalid_argument("Born kernel: need t > s");
  const auto combos = atom_combos(V, m, t, s);
  const ChainSampler cs(V.space(), static_cast<std::size_t>(m));
  const double mass = std::pow(4.0 * pi * a, 1.5);  // psi0 / density of y
  return mc_mean_complex(samples, seed, [&](std::mt19937_64& g) {
    std::normal_distribution<double> nd(0.0, std::sqrt(2.0 * a));
    const Vec3 y{nd(g), nd(g), nd(g)};
    return mass * chain_value(combos, cs.draw(x, y, g), V.space());
  });
}

}  // namespace displab
