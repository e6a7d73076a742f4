// Compiled with -mavx2 -mfma; only reached after a cpuid check.
#include <immintrin.h>

#include <algorithm>

#include "displab/simd.hpp"

namespace displab::simd::avx2 {

namespace {
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}
}  // namespace

SqrtSums sqrt_sums(double lam2, const double* b, const double* sigma, std::size_t m) {
  const __m256d l2 = _mm256_set1_pd(lam2);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d a0 = _mm256_setzero_pd(), a1 = a0, a3 = a0, a5 = a0;
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d bj = _mm256_loadu_pd(b + j);
    const __m256d sj = _mm256_loadu_pd(sigma + j);
    const __m256d q = _mm256_add_pd(l2, sj);
    const __m256d rq = _mm256_sqrt_pd(q);
    const __m256d inv = _mm256_div_pd(one, rq);
    const __m256d inv3 = _mm256_div_pd(inv, q);
    const __m256d bs = _mm256_mul_pd(bj, sj);
    a0 = _mm256_fmadd_pd(bj, rq, a0);
    a1 = _mm256_fmadd_pd(bj, inv, a1);
    a3 = _mm256_fmadd_pd(bs, inv3, a3);
    a5 = _mm256_fmadd_pd(bs, _mm256_div_pd(inv3, q), a5);
  }
  SqrtSums s{hsum(a0), hsum(a1), hsum(a3), hsum(a5)};
  if (j < m) {
    const SqrtSums t = scalar::sqrt_sums(lam2, b + j, sigma + j, m - j);
    s.s0 += t.s0;
    s.s1 += t.s1;
    s.s3 += t.s3;
    s.s5 += t.s5;
  }
  return s;
}

void cmul_inplace(cplx* z, const cplx* mult, std::size_t n) {
  double* zp = reinterpret_cast<double*>(z);
  const double* mp = reinterpret_cast<const double*>(mult);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d zv = _mm256_loadu_pd(zp + 2 * i);   // a0 b0 a1 b1
    const __m256d mv = _mm256_loadu_pd(mp + 2 * i);   // c0 d0 c1 d1
    const __m256d cc = _mm256_movedup_pd(mv);         // c0 c0 c1 c1
    const __m256d dd = _mm256_permute_pd(mv, 0xF);    // d0 d0 d1 d1
    const __m256d zs = _mm256_permute_pd(zv, 0x5);    // b0 a0 b1 a1
    // (a c - b d, b c + a d)
    const __m256d r = _mm256_fmaddsub_pd(zv, cc, _mm256_mul_pd(zs, dd));
    _mm256_storeu_pd(zp + 2 * i, r);
  }
  if (i < n) scalar::cmul_inplace(z + i, mult + i, n - i);
}

FieldSums field_sums(const cplx* z, std::size_t n) {
  const double* zp = reinterpret_cast<const double*>(z);
  __m256d s1 = _mm256_setzero_pd(), s2 = s1, s6 = s1, mx = s1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_loadu_pd(zp + 2 * i);      // a0 b0 a1 b1
    const __m256d v = _mm256_loadu_pd(zp + 2 * i + 4);  // a2 b2 a3 b3
    const __m256d uu = _mm256_mul_pd(u, u);
    const __m256d vv = _mm256_mul_pd(v, v);
    // hadd gives (|z0|^2, |z2|^2, |z1|^2, |z3|^2); order is irrelevant for sums
    const __m256d a2 = _mm256_hadd_pd(uu, vv);
    const __m256d a = _mm256_sqrt_pd(a2);
    s1 = _mm256_add_pd(s1, a);
    s2 = _mm256_add_pd(s2, a2);
    s6 = _mm256_fmadd_pd(_mm256_mul_pd(a2, a2), a2, s6);
    mx = _mm256_max_pd(mx, a);
  }
  FieldSums s{hsum(s1), hsum(s2), hsum(s6), hmax(mx)};
  if (i < n) {
    const FieldSums t = scalar::field_sums(z + i, n - i);
    s.abs1 += t.abs1;
    s.abs2 += t.abs2;
    s.abs6 += t.abs6;
    s.max_abs = std::max(s.max_abs, t.max_abs);
  }
  return s;
}

}  // namespace displab::simd::avx2
