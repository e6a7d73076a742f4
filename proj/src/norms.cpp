#include "displab/norms.hpp"

#include <algorithm>
#include <limits>

#include "displab/mc.hpp"
#include "displab/radial.hpp"

namespace displab {

double kato_global(const SpatialPotential& V0, const QuadConfig& quad) {
  if (V0.sup_abs() == 0.0) return 0.0;
  const double at0 = newton_potential(V0, 0.0);
  if (V0.radially_nonincreasing()) return at0;
  // non-monotone radial profile: coarse scan, then golden section around the best cell
  const double rmax = 2.0 * V0.effective_radius();
  const int n = 400;
  double best_r = 0.0, best = at0;
  for (int i = 1; i <= n; ++i) {
    const double r = rmax * i / n;
    const double v = newton_potential(V0, r);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  double a = std::max(0.0, best_r - rmax / n), b = best_r + rmax / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = newton_potential(V0, c), fd = newton_potential(V0, d);
  for (std::size_t it = 0; it < quad.golden_iters && (b - a) > quad.rel_tol * (1.0 + b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = newton_potential(V0, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = newton_potential(V0, d);
    }
  }
  return std::max({best, fc, fd});
}

McEstimate rollnik(const SpatialPotential& V0, std::size_t samples, std::uint64_t seed) {
  if (V0.sup_abs() == 0.0) return {0.0, 0.0, samples};
  // both factors must be finite: |V| in L^{3/2} is enough, checked through the radial moment
  radial_moment(V0, 2.0, 1.5, 0.0, std::numeric_limits<double>::infinity());
  const RadialSampler xs(V0, 2.0, 1.0);
  const double R1 = length_scale(V0);
  auto draw = [&](std::mt19937_64& g) {
    const Vec3 x = xs.sample_point(g);
    const double u = uniform01(g);
    const double rho = R1 * u / (1.0 - u);
    const Vec3 dir = random_direction(g);
    const Vec3 y{x[0] + rho * dir[0], x[1] + rho * dir[1], x[2] + rho * dir[2]};
    const double q = xs.pdf3(norm3(x));
    if (q <= 0.0) return 0.0;
    const double prho = (1.0 / R1) / ((1.0 + rho / R1) * (1.0 + rho / R1));
    return std::abs(V0(x)) * std::abs(V0(y)) * 4.0 * pi / (q * prho);
  };
  const McEstimate sq = mc_mean(samples, seed, draw);
  McEstimate out;
  out.samples = sq.samples;
  out.value = std::sqrt(std::max(0.0, sq.value));
  out.std_error = out.value > 0 ? sq.std_error / (2.0 * out.value) : sq.std_error;
  return out;
}

double l32_norm(const SpatialPotential& V0) {
  if (V0.sup_abs() == 0.0) return 0.0;
  return std::pow(radial_moment(V0, 2.0, 1.5, 0.0, std::numeric_limits<double>::infinity()), 2.0 / 3.0);
}

NormFlags norm_flags(double rollnik_value, double kato, double y, const NormThresholds& th) {
  return {rollnik_value * rollnik_value < th.rollnik_sq, kato < th.kato, y < th.c0};
}

NormReport y_norm(const SeparablePotential& V, const NormThresholds& th, std::size_t samples, std::uint64_t seed) {
  NormReport r;
  const double mass = fourier_mass(V);
  r.kato_global = kato_global(V.space());
  r.l32 = l32_norm(V.space());
  const McEstimate R = rollnik(V.space(), samples, seed);
  r.rollnik = R.value;
  r.rollnik_se = R.std_error;
  // sup_t |phi(t)| is bounded by the atom mass; that bound is the value used
  r.y_norm = mass * r.l32 + mass * r.kato_global;
  r.flags = norm_flags(r.rollnik, r.kato_global, r.y_norm, th);
  return r;
}

}  // namespace displab
