#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "displab/oscillatory.hpp"
#include "displab/potentials.hpp"
#include "displab/radial.hpp"

namespace displab {

// x_0, ..., x_{k+1}; weight = 1 / proposal density of the interior points.
struct ChainSample {
  std::vector<Vec3> points;
  double weight = 1.0;
};

// Draws interior chain points one at a time from a mixture of
//   shells around the previous point (density ~ 1/rho^2 near it),
//   shells around the fixed endpoint (last interior point only),
//   the radial density of |V0|.
class ChainSampler {
 public:
  ChainSampler(const SpatialPotential& V0, std::size_t k);
  ChainSample draw(const Vec3& x0, const Vec3& xend, std::mt19937_64& g) const;
  std::size_t k() const { return k_; }

 private:
  double shell_pdf(const Vec3& x, const Vec3& c) const;
  Vec3 shell_draw(const Vec3& c, std::mt19937_64& g) const;

  std::size_t k_;
  double scale_;
  RadialSampler pot_;
};

// (A f)(x) = int |V0(y)| f(y) / |x - y| dy by Monte-Carlo.
McEstimate kato_apply(const SpatialPotential& V0, const std::function<double(const Vec3&)>& f, const Vec3& x,
                      std::size_t samples, std::uint64_t seed);
// A applied to the constant c, radial Newton reduction (exact up to quadrature).
double kato_apply_const(const SpatialPotential& V0, double c, const Vec3& x);

struct IteratedKato {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // (k+1) ||V||_K^k
  bool low_precision = false;  // std_error / estimate > 0.05
};

// int prod|V(x_j)| / prod|x_j - x_{j+1}| * sum_l |x_l - x_{l+1}| dx_1..dx_k
IteratedKato iterated_kato_estimate(const SpatialPotential& V0, int k, const Vec3& x0, const Vec3& xk1,
                                    std::size_t samples, std::uint64_t seed);

// sum_k e^{i(a_1+..+a_{k-1} - a_{k+1} - .. - a_{m+1})} sin a_k  and  sin(sum a_k)
std::pair<cplx, double> sine_telescope(const std::vector<double>& a);
// sum_k (1/z_k) prod_{r!=k} 1/(z_r - z_k)  and  prod 1/z_r
std::pair<cplx, cplx> partial_fractions(const std::vector<cplx>& z);

// One atom combination of the order-m term. taus[i] = 2 pi freq of the atom
// attached to the i-th interior point (counted from the output end).
struct BornTermParams {
  int m = 0;
  double t = 1.0, s = 0.0;
  std::vector<double> taus;

  void validate() const;
  double T() const { return t - s; }
  // per link r = 1..m+1 (index r-1): Theta_r - min Theta, Theta_r = tau_1 + .. + tau_{r-1}
  std::vector<double> sigmas() const;
  double theta_min() const;
  // sigmas sorted descending: omega_1 >= .. >= omega_{m+1} = 0
  std::vector<double> omegas() const;
  // link index (0-based) of the link with rank c (1-based) in the omega order
  std::size_t link_of_rank(std::size_t c) const;
  // rho_a = omega_{d-1} - omega_a for a = d..m+1 (1-based)
  std::vector<double> rhos(std::size_t d) const;
  // (-i)^{m+1} / (pi T) e^{i theta_min T}
  cplx prefactor() const;
};

// lambda-integrals for a chain with link lengths r (size m+1):
//   L: int_0^inf e^{-iT l^2} cos(sum r_k sqrt(l^2+sigma_k)) l/sqrt(l^2+sigma_ell) dl
//   M: region d, on-cut links c < d, damping from links a >= d, kato weight of rank c
//   Mt: same region, sin instead of cos, singular weight of rank a >= d
cplx born_inner_L(const BornTermParams& p, std::size_t ell, const std::vector<double>& r, const OscOptions& opt = {});
cplx born_inner_M(const BornTermParams& p, std::size_t d, std::size_t c, bool tilde, const std::vector<double>& r,
                  const OscOptions& opt = {});
// sum_l r_l J_l + sum_d e^{i omega_{d-1} T} (sum_{c<d} r_c M + sum_{a>=d} r_a Mt)
cplx born_bracket(const BornTermParams& p, const std::vector<double>& r, const OscOptions& opt = {});

// Chain integrals int prod V0(x_i) prod 1/(4 pi r) r_ell J dx_1..dx_m (no prefactor).
McEstimateC born_kernel_L(const BornTermParams& p, std::size_t ell, const Vec3& x, const Vec3& y,
                          const SpatialPotential& V0, std::size_t samples, std::uint64_t seed);
McEstimateC born_kernel_M(const BornTermParams& p, std::size_t d, std::size_t ell, bool tilde, const Vec3& x,
                          const Vec3& y, const SpatialPotential& V0, std::size_t samples, std::uint64_t seed);

// Full order-m kernel I_m(t,s)(x,y) summed over atom combinations, m <= 2.
McEstimateC born_kernel(const SeparablePotential& V, int m, double t, double s, const Vec3& x, const Vec3& y,
                        std::size_t samples, std::uint64_t seed);

// (I_m psi0)(x) for psi0(y) = exp(-|y|^2/(4a)), m in {1, 2}.
McEstimateC born_apply_gaussian(const SeparablePotential& V, int m, double t, double s, const Vec3& x, double a,
                                std::size_t samples, std::uint64_t seed);

}  // namespace displab
