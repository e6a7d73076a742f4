#include <cstdlib>
#include <cstring>

#include "displab/simd.hpp"

namespace displab::simd {

namespace {

struct Table {
  Isa isa;
  SqrtSumsFn sqrt_sums;
  CmulFn cmul;
  FieldSumsFn field_sums;
};

Table make_table(Isa isa) {
  if (isa == Isa::avx2 && cpu_has_avx2())
    return {Isa::avx2, &avx2::sqrt_sums, &avx2::cmul_inplace, &avx2::field_sums};
  return {Isa::scalar, &scalar::sqrt_sums, &scalar::cmul_inplace, &scalar::field_sums};
}

Table initial_table() {
  const char* env = std::getenv("DISPLAB_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return make_table(Isa::scalar);
  return make_table(Isa::avx2);
}

Table& table() {
  static Table t = initial_table();
  return t;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

void force_isa(Isa isa) { table() = make_table(isa); }

SqrtSums sqrt_sums(double lam2, std::span<const double> b, std::span<const double> sigma) {
  return table().sqrt_sums(lam2, b.data(), sigma.data(), b.size());
}

void cmul_inplace(std::span<cplx> z, std::span<const cplx> mult) {
  table().cmul(z.data(), mult.data(), z.size());
}

FieldSums field_sums(std::span<const cplx> z) { return table().field_sums(z.data(), z.size()); }

}  // namespace displab::simd
