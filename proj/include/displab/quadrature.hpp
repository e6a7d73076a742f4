#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include "displab/common.hpp"

namespace displab {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae and weights (QUADPACK qk15).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double mag(double v) { return std::abs(v); }
inline double mag(const cplx& v) { return std::abs(v); }

// qk15 error heuristic, applied per component.
inline double qk_err(double resk, double resg, double resasc, double resabs) {
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return err;
}

}  // namespace detail

// One G7K15 panel on [a, b].
template <class F>
auto gk15(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fv[15];
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * detail::xgk[j]);
    fv[14 - j] = f(c + h * detail::xgk[j]);
  }
  T resk = fv[7] * detail::wgk[7];
  T resg = fv[7] * detail::wg[3];
  for (int j = 0; j < 7; ++j) {
    resk += (fv[j] + fv[14 - j]) * detail::wgk[j];
    if (j % 2 == 1) resg += (fv[j] + fv[14 - j]) * detail::wg[j / 2];
  }
  QuadResult<T> r;
  r.evals = 15;
  if constexpr (std::is_same_v<T, double>) {
    double resabs = std::abs(fv[7]) * detail::wgk[7], resasc;
    for (int j = 0; j < 7; ++j) resabs += (std::abs(fv[j]) + std::abs(fv[14 - j])) * detail::wgk[j];
    const double mean = resk * 0.5;
    resasc = detail::wgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
      resasc += detail::wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    r.error = detail::qk_err(resk * h, resg * h, resasc * std::abs(h), resabs * std::abs(h));
  } else {
    double err2 = 0.0;
    for (int part = 0; part < 2; ++part) {
      auto comp = [part](const T& z) { return part == 0 ? z.real() : z.imag(); };
      double resabs = std::abs(comp(fv[7])) * detail::wgk[7];
      for (int j = 0; j < 7; ++j)
        resabs += (std::abs(comp(fv[j])) + std::abs(comp(fv[14 - j]))) * detail::wgk[j];
      const double mean = comp(resk) * 0.5;
      double resasc = detail::wgk[7] * std::abs(comp(fv[7]) - mean);
      for (int j = 0; j < 7; ++j)
        resasc += detail::wgk[j] * (std::abs(comp(fv[j]) - mean) + std::abs(comp(fv[14 - j]) - mean));
      const double e = detail::qk_err(comp(resk) * h, comp(resg) * h, resasc * std::abs(h),
                                      resabs * std::abs(h));
      err2 += e * e;
    }
    r.error = std::sqrt(err2);
  }
  r.value = resk * h;
  return r;
}

// Globally adaptive bisection (QAG style). Stops when the summed error
// estimate is below max(abs_tol, rel_tol*|I|) or max_intervals is hit.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                        std::size_t max_intervals = 2000) {
  using R = decltype(gk15(f, a, b));
  using T = std::decay_t<decltype(R::value)>;
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  std::priority_queue<Piece> heap;
  auto first = gk15(f, a, b);
  heap.push({a, b, first.value, first.error});
  T total = first.value;
  double err = first.error;
  std::size_t evals = first.evals;
  while (err > std::max(abs_tol, rel_tol * detail::mag(total)) && heap.size() < max_intervals) {
    Piece p = heap.top();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) break;
    heap.pop();
    auto l = gk15(f, p.a, m);
    auto r = gk15(f, m, p.b);
    evals += 30;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push({p.a, m, l.value, l.error});
    heap.push({m, p.b, r.value, r.error});
  }
  // recompute sums to shed accumulated cancellation
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  QuadResult<T> out;
  out.value = sum;
  out.error = esum;
  out.evals = evals;
  out.converged = esum <= std::max(abs_tol, rel_tol * detail::mag(sum));
  return out;
}

// Tanh-sinh on [a, b]. The integrand receives (x, b - x) so that endpoint
// singularities at b can use the accurately computed complement.
template <class F>
auto integrate_tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, int max_level = 12) {
  using T = std::decay_t<decltype(f(a, b - a))>;
  const double c = 0.5 * (a + b), h0 = 0.5 * (b - a);
  const double tmax = 4.0;
  auto node = [&](double t, T& acc) {
    const double s = 0.5 * pi * std::sinh(t);
    const double ch = std::cosh(s);
    const double u = std::tanh(s);
    const double w = 0.5 * pi * std::cosh(t) / (ch * ch);
    // 1 - u and 1 + u without cancellation
    const double em = std::exp(-2.0 * std::abs(s));
    const double one_minus_abs = 2.0 * em / (1.0 + em);
    // x may round to b while the complement is still resolved; keep those nodes
    const double x = std::min(c + h0 * u, b);
    const double dxb = u >= 0 ? h0 * one_minus_abs : h0 * (2.0 - one_minus_abs);
    if (dxb <= 0.0 || x <= a) return;
    acc += f(x, dxb) * w;
  };
  T prev{};
  double h = 1.0;
  T sum{};
  node(0.0, sum);
  for (double t = h; t <= tmax; t += h) {
    node(t, sum);
    node(-t, sum);
  }
  QuadResult<T> out;
  prev = sum * h * h0;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) {
      node(t, sum);
      node(-t, sum);
    }
    T cur = sum * h * h0;
    const double diff = detail::mag(cur - prev);
    out.value = cur;
    out.error = diff;
    if (level >= 3 && diff <= rel_tol * detail::mag(cur)) break;
    prev = cur;
  }
  out.converged = out.error <= 1e3 * rel_tol * std::max(1.0, detail::mag(out.value));
  return out;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);
};

}  // namespace displab
