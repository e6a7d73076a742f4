#include <algorithm>

#include "displab/simd.hpp"

namespace displab::simd::scalar {

SqrtSums sqrt_sums(double lam2, const double* b, const double* sigma, std::size_t m) {
  SqrtSums s;
  for (std::size_t j = 0; j < m; ++j) {
    const double q = lam2 + sigma[j];
    const double rq = std::sqrt(q);
    const double inv = 1.0 / rq;
    const double inv3 = inv / q;
    s.s0 += b[j] * rq;
    s.s1 += b[j] * inv;
    s.s3 += b[j] * sigma[j] * inv3;
    s.s5 += b[j] * sigma[j] * inv3 / q;
  }
  return s;
}

void cmul_inplace(cplx* z, const cplx* mult, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z[i].real(), b = z[i].imag();
    const double c = mult[i].real(), d = mult[i].imag();
    z[i] = cplx(a * c - b * d, a * d + b * c);
  }
}

FieldSums field_sums(const cplx* z, std::size_t n) {
  FieldSums s;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    const double a = std::sqrt(a2);
    s.abs1 += a;
    s.abs2 += a2;
    s.abs6 += a2 * a2 * a2;
    s.max_abs = std::max(s.max_abs, a);
  }
  return s;
}

}  // namespace displab::simd::scalar
