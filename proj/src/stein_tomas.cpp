#include "displab/stein_tomas.hpp"

#include <stdexcept>

#include "displab/quadrature.hpp"

namespace displab {

cplx resolvent_radial(double lambda, const RadialData& f, double r) {
  if (!(lambda > 0)) throw std::invalid_argument("resolvent_radial: lambda must be positive");
  if (!(r > 0)) throw DomainError("resolvent_radial: r must be positive");
  const double k = std::sqrt(lambda);
  auto g = [&](double s) {
    return s * f.f(s) * (std::polar(1.0, k * (r + s)) - std::polar(1.0, k * std::abs(r - s)));
  };
  const double tol = 1e-14;
  cplx v{};
  if (r < f.s_max) {
    v = integrate_adaptive(g, 0.0, r, 0.0, tol, 2000).value + integrate_adaptive(g, r, f.s_max, 0.0, tol, 2000).value;
  } else {
    v = integrate_adaptive(g, 0.0, f.s_max, 0.0, tol, 2000).value;
  }
  return v / (cplx(0.0, 2.0 * k * r));
}

SteinTomasResult stein_tomas_check(double lambda, const RadialData& f) {
  SteinTomasResult res;
  res.lambda = lambda;
  const double k = std::sqrt(lambda);
  const auto f43 = integrate_adaptive(
      [&](double s) { return 4.0 * pi * s * s * std::pow(std::abs(f.f(s)), 4.0 / 3.0); }, 0.0, f.s_max, 0.0, 1e-13,
      2000);
  res.f43 = std::pow(f43.value, 0.75);
  // beyond s_max the field is C e^{ikr}/r exactly, C = (1/k) int s f(s) sin(ks) ds
  const double C =
      integrate_adaptive([&](double s) { return s * f.f(s) * std::sin(k * s); }, 0.0, f.s_max, 0.0, 1e-14, 2000)
          .value /
      k;
  auto integrand = [&](double r) {
    if (r == 0.0) r = 1e-300;
    const double a = std::abs(resolvent_radial(lambda, f, r));
    return 4.0 * pi * r * r * a * a * a * a;
  };
  const double R = f.s_max;
  double body = integrate_adaptive(integrand, 0.0, 0.5 * R, 0.0, 1e-10, 400).value;
  body += integrate_adaptive(integrand, 0.5 * R, R, 0.0, 1e-10, 400).value;
  const double tail = 4.0 * pi * std::pow(std::abs(C), 4) / R;
  res.r4 = std::pow(body + tail, 0.25);
  res.ratio = res.f43 > 0 ? res.r4 / res.f43 : 0.0;
  return res;
}

RadialData gaussian_radial(double amp, double lambda_scale) {
  const double w = 1.0 / std::sqrt(lambda_scale);
  return {[amp, lambda_scale](double s) { return amp * std::exp(-lambda_scale * s * s); }, 7.0 * w};
}

double loglog_slope(const std::vector<SteinTomasResult>& rs) {
  if (rs.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rs.size());
  for (const auto& r : rs) {
    const double x = std::log(r.lambda), y = std::log(r.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace displab
