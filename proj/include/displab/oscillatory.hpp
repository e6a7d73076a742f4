#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "displab/common.hpp"

namespace displab {

enum class Sign { minus = -1, plus = 1 };

// phi(lambda) = lambda^2/2 +/- sum_j b_j sqrt(lambda^2 + sigma_j)
struct PhaseLambda {
  Sign sign = Sign::minus;
  std::vector<double> b;
  std::vector<double> sigma;  // descending, >= 0

  void validate() const;
  std::size_t m() const { return b.size(); }
};

struct PhaseDerivs {
  double phi = 0, d1 = 0, d2 = 0, d3 = 0;
};

// psi(u) = u^2/2 +/- sum_j b_j sqrt(tau_j - u^2) on (0, sqrt(tau_m))
struct PhaseU {
  std::vector<double> b;
  std::vector<double> tau;  // descending, > 0
  Sign sign = Sign::plus;

  void validate() const;
  double umax() const { return std::sqrt(tau.back()); }
};

struct DampedWeight {
  enum class Kind { kato, singular, unit };
  Kind kind = Kind::kato;
  std::size_t k = 0;          // zero-based: sigma index (kato) or rho index (singular)
  std::vector<double> rho;    // descending, > 0
  std::vector<double> c;      // damping prod exp(-c_i sqrt(rho_i - lambda^2))

  bool damped() const { return !c.empty(); }
};

struct OscResult {
  cplx value{};
  double quad_error = 0.0;
  double ref_bound = 0.0;
  double ratio = 0.0;
  std::size_t evals = 0;
};

// Smooth non-decreasing cutoff: 0 below 1/4, 1 above 1/2.
enum class Cutoff { smoothstep5, smooth_exp };
double cutoff_chi(Cutoff kind, double x);
// Even bump, 1 on [-1, 1], 0 outside [-2, 2].
double bump_psi(Cutoff kind, double x);

struct OscOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  Cutoff chi = Cutoff::smoothstep5;
  // > 0: multiply by the bump psi(lambda / bump_scale); integration stops at 2 bump_scale
  double bump_scale = 0.0;
  std::size_t max_evals = 400'000'000;
  double C0 = 1.0;  // constant in ref_bound
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::optional<double> critical_point_lambda(const PhaseLambda& p);
PhaseDerivs phase_lambda_derivatives(const PhaseLambda& p, double lambda);

std::optional<double> critical_point_u(const PhaseU& p);
PhaseDerivs phase_u_derivatives(const PhaseU& p, double u);

// I_L(a, t) = int_0^inf e^{i t lambda} sin(a sqrt(lambda)) psi(sqrt(lambda)/L) d lambda
// evaluated as 2 int_0^{2L} mu e^{i t mu^2} sin(a mu) psi(mu/L) d mu.
// ref_bound = C t^{-3/2} |a| with C = opt.C0.
OscResult osc_integral_statphase(double a, double t, double L, const OscOptions& opt = {});

// int_0^upper e^{i lambda^2/2} e^{+/- i sum b_j sqrt(lambda^2+sigma_j)} damping weight d lambda
OscResult osc_integral_lambda(const PhaseLambda& p, const DampedWeight& w, double upper = kInfinity,
                              const OscOptions& opt = {});

// Same integral on [lo, hi] by plain tanh-sinh in lambda. Independent route
// used to cross-check the substitution near singular endpoints.
OscResult osc_integral_lambda_direct(const PhaseLambda& p, const DampedWeight& w, double lo, double hi);

double osc_bound(const PhaseLambda& p, const DampedWeight& w, double C0);

}  // namespace displab
