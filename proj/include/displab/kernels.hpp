#pragma once

#include "displab/common.hpp"

namespace displab {

enum class Branch { plus, minus };

struct KernelPoint {
  double lambda = 0.0;
  double r = 1.0;
  Branch branch = Branch::plus;
};

// R_+/- boundary values e^{+/- i sqrt(lambda) r}/(4 pi r); lambda < 0 gives the
// real decaying kernel e^{-sqrt(-lambda) r}/(4 pi r).
cplx free_resolvent_kernel(const KernelPoint& p);

// sin(sqrt(lambda) r)/(4 pi r) for lambda > 0, else 0.
double spectral_density_kernel(double lambda, double r);

// (4 pi i t)^{-3/2} e^{i r^2/(4t)}, kernel of e^{-it(-Laplacian)}.
cplx free_propagator_kernel(double t, double r);

// r^{-(n-2)}
double green_function(double r, int n);

}  // namespace displab
