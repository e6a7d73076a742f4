#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "displab/common.hpp"

namespace displab {

// Piecewise-constant radial profile: value[i] on (r[i-1], r[i]], zero past
// the last breakpoint. Left-continuous at breakpoints.
struct RadialPiecewise {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

struct Gaussian {
  double amplitude = 1.0;
  double width = 1.0;  // amp * exp(-|x|^2 / width^2)
};

// amp * (1 + |x|^2/width^2)^(-1-eps)
struct InversePower {
  double amplitude = 1.0;
  double epsilon = 1.0;
  double width = 1.0;
};

struct BallIndicator {
  double amplitude = 1.0;
  double radius = 1.0;
};

class SpatialPotential {
 public:
  using Profile = std::variant<RadialPiecewise, Gaussian, InversePower, BallIndicator>;

  SpatialPotential() : SpatialPotential(Gaussian{0.0, 1.0}) {}
  SpatialPotential(Profile p);  // validates
  template <class P>
    requires(!std::is_same_v<std::decay_t<P>, Profile> && std::is_constructible_v<Profile, P>)
  SpatialPotential(P p) : SpatialPotential(Profile(std::move(p))) {}

  const Profile& profile() const { return profile_; }
  std::string kind() const;

  double radial(double r) const;
  double operator()(const Vec3& x) const { return radial(norm3(x)); }

  // Points where the profile is not smooth (for quadrature splitting).
  std::vector<double> breakpoints() const;
  // Radius past which |V| is below 1e-30 of its peak, or +inf for algebraic tails.
  double effective_radius() const;
  bool compact() const;
  bool radially_nonincreasing() const;
  double sup_abs() const;
  // |V(r)| ~ C r^(-decay) as r -> inf; 0 if compactly supported / faster.
  double tail_decay() const;

  SpatialPotential scaled_amplitude(double a) const;
  // R^2 V(R x)
  SpatialPotential dilated(double R) const;

 private:
  Profile profile_;
};

// One atom c * exp(2 pi i t freq) of the time profile.
struct TimeAtom {
  double freq = 0.0;
  cplx coeff{1.0, 0.0};
};

class TimeProfile {
 public:
  TimeProfile() : atoms_{TimeAtom{}} {}
  explicit TimeProfile(std::vector<TimeAtom> atoms, double real_tol = 1e-12);

  static TimeProfile constant(double c = 1.0);
  static TimeProfile cosine(double omega = 1.0);  // cos(omega t)

  const std::vector<TimeAtom>& atoms() const { return atoms_; }
  cplx value_complex(double t) const;
  double operator()(double t) const { return value_complex(t).real(); }
  double fourier_mass() const;
  bool time_independent() const;

 private:
  std::vector<TimeAtom> atoms_;
};

class SeparablePotential {
 public:
  SeparablePotential() = default;
  SeparablePotential(TimeProfile time, SpatialPotential space)
      : time_(std::move(time)), space_(std::move(space)) {}

  const TimeProfile& time() const { return time_; }
  const SpatialPotential& space() const { return space_; }

 private:
  TimeProfile time_;
  SpatialPotential space_;
};

double eval_potential(const SeparablePotential& V, double t, const Vec3& x);
double fourier_mass(const SeparablePotential& V);
// Total-variation mass of an arbitrary atom list (no realness check).
double fourier_mass(const std::vector<TimeAtom>& atoms);

}  // namespace displab
