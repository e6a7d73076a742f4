#include "displab/kernels.hpp"

namespace displab {

cplx free_resolvent_kernel(const KernelPoint& p) {
  if (!(p.r > 0)) throw DomainError("resolvent kernel is singular on the diagonal (r = 0)");
  const double base = 1.0 / (four_pi * p.r);
  if (p.lambda < 0) return {std::exp(-std::sqrt(-p.lambda) * p.r) * base, 0.0};
  const double phase = std::sqrt(p.lambda) * p.r;
  const cplx k = std::polar(base, phase);
  return p.branch == Branch::plus ? k : std::conj(k);
}

double spectral_density_kernel(double lambda, double r) {
  if (!(r > 0)) throw DomainError("spectral density kernel is singular at r = 0");
  if (lambda <= 0) return 0.0;
  return std::sin(std::sqrt(lambda) * r) / (four_pi * r);
}

cplx free_propagator_kernel(double t, double r) {
  if (t == 0.0) throw DomainError("free propagator kernel undefined at t = 0");
  // principal branch: (4 pi i t)^{-3/2} = (4 pi |t|)^{-3/2} e^{-i 3 pi/4 sgn t}
  const double mod = std::pow(four_pi * std::abs(t), -1.5);
  const double arg = (t > 0 ? -0.75 : 0.75) * pi + r * r / (4.0 * t);
  return std::polar(mod, arg);
}

double green_function(double r, int n) {
  if (!(r > 0)) throw DomainError("green function singular at r = 0");
  if (n < 3) throw DomainError("green function needs dimension n >= 3");
  return std::pow(r, -(n - 2));
}

}  // namespace displab
