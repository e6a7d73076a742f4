#pragma once

#include <functional>
#include <vector>

#include "displab/common.hpp"

namespace displab {

// Radial f with |f(s)| negligible beyond s_max.
struct RadialData {
  std::function<double(double)> f;
  double s_max = 8.0;
};

// (R0(lambda + i0) f)(r) = (1/(2 i k r)) int_0^inf s f(s) (e^{ik(r+s)} - e^{ik|r-s|}) ds, k = sqrt(lambda)
cplx resolvent_radial(double lambda, const RadialData& f, double r);

struct SteinTomasResult {
  double lambda = 0;
  double r4 = 0;   // ||R0 f||_4
  double f43 = 0;  // ||f||_{4/3}
  double ratio = 0;
};

SteinTomasResult stein_tomas_check(double lambda, const RadialData& f);

// amp * exp(-lambda^dil |x|^2), dil = 1 for the scale-matched family f(sqrt(lambda) x)
RadialData gaussian_radial(double amp, double lambda_scale);

// least-squares slope of log ratio against log lambda
double loglog_slope(const std::vector<SteinTomasResult>& rs);

}  // namespace displab
