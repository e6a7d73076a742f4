#pragma once

#include <span>

#include "displab/common.hpp"

// Hot loops with a scalar reference and an AVX2 variant. The variant is
// picked once at startup from cpuid; DISPLAB_SIMD=scalar forces the
// reference path.
namespace displab::simd {

enum class Isa { scalar, avx2 };

// With q_j = lam2 + sigma_j:
//   s0 = sum b_j sqrt(q_j)          s1 = sum b_j / sqrt(q_j)
//   s3 = sum b_j sigma_j / q_j^1.5  s5 = sum b_j sigma_j / q_j^2.5
struct SqrtSums {
  double s0 = 0, s1 = 0, s3 = 0, s5 = 0;
};

struct FieldSums {
  double abs1 = 0;  // sum |z|
  double abs2 = 0;  // sum |z|^2
  double abs6 = 0;  // sum |z|^6
  double max_abs = 0;
};

using SqrtSumsFn = SqrtSums (*)(double, const double*, const double*, std::size_t);
using CmulFn = void (*)(cplx*, const cplx*, std::size_t);
using FieldSumsFn = FieldSums (*)(const cplx*, std::size_t);

namespace scalar {
SqrtSums sqrt_sums(double lam2, const double* b, const double* sigma, std::size_t m);
void cmul_inplace(cplx* z, const cplx* mult, std::size_t n);
FieldSums field_sums(const cplx* z, std::size_t n);
}  // namespace scalar

namespace avx2 {
SqrtSums sqrt_sums(double lam2, const double* b, const double* sigma, std::size_t m);
void cmul_inplace(cplx* z, const cplx* mult, std::size_t n);
FieldSums field_sums(const cplx* z, std::size_t n);
}  // namespace avx2

bool cpu_has_avx2();
Isa active_isa();
void force_isa(Isa isa);  // tests only; falls back to scalar if unsupported

SqrtSums sqrt_sums(double lam2, std::span<const double> b, std::span<const double> sigma);
void cmul_inplace(std::span<cplx> z, std::span<const cplx> mult);
FieldSums field_sums(std::span<const cplx> z);

}  // namespace displab::simd
