#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace displab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

inline double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

inline double dist3(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline Vec3 add3(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// Raised for r = 0 / t = 0 style inputs where a formula is singular.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// An integral that does not converge for the given profile.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct McEstimateC {
  cplx value{};
  double std_error = 0.0;
  std::size_t samples = 0;
};

}  // namespace displab
