#include "displab/oscillatory.hpp"

#include <algorithm>
#include <stdexcept>

#include "displab/quadrature.hpp"
#include "displab/simd.hpp"

namespace displab {

namespace {

constexpr cplx I{0.0, 1.0};

double sgn(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

double exp_transition(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

struct Accum {
  cplx value{};
  double error = 0.0;
  std::size_t evals = 0;
};

// Marches [a, b] in panels of about kappa/rate(x) and integrates each one
// adaptively. rate(x) is a local bound on the oscillation frequency.
template <class F, class Rate>
void march(F&& f, Rate&& rate, double a, double b, double abs_tol, double hcap, Accum& acc,
           std::size_t max_evals) {
  constexpr double kappa = 2.0;
  const double len = b - a;
  if (!(len > 0)) return;
  double x = a;
  while (x < b) {
    double h = std::min(hcap, kappa / std::max(rate(x), 1e-300));
    const double r2 = rate(std::min(x + h, b));
    h = std::min(h, kappa / std::max(r2, 1e-300));
    double x1 = x + h;
    if (x1 >= b || b - x1 < 1e-3 * h) x1 = b;
    const double local = std::max(abs_tol * (x1 - x) / len, 1e-300);
    const auto r = integrate_adaptive(f, x, x1, local, 1e-12, 200);
    acc.value += r.value;
    acc.error += r.error;
    acc.evals += r.evals;
    if (acc.evals > max_evals) throw QuadratureError("oscillatory quadrature: evaluation budget exhausted");
    x = x1;
  }
}

double weight_value(const DampedWeight& w, const PhaseLambda& p, double lam) {
  switch (w.kind) {
    case DampedWeight::Kind::unit:
      return 1.0;
    case DampedWeight::Kind::kato: {
      const double s = p.sigma[w.k];
      return s == 0.0 ? 1.0 : lam / std::sqrt(lam * lam + s);
    }
    case DampedWeight::Kind::singular: {
      const double r = w.rho[w.k];
      return lam / std::sqrt(r - lam * lam);
    }
  }
  return 0.0;
}

double damping(const DampedWeight& w, double lam) {
  double e = 0.0;
  for (std::size_t i = 0; i < w.c.size(); ++i) e += w.c[i] * std::sqrt(std::max(0.0, w.rho[i] - lam * lam));
  return std::exp(-e);
}

void validate_weight(const PhaseLambda& p, const DampedWeight& w) {
  switch (w.kind) {
    case DampedWeight::Kind::kato:
      if (w.k >= p.m()) throw std::out_of_range("kato weight index out of range");
      break;
    case DampedWeight::Kind::singular:
      if (w.k >= w.rho.size()) throw std::out_of_range("singular weight index out of range");
      break;
    case DampedWeight::Kind::unit:
      break;
  }
  if (w.c.size() != w.rho.size() && !(w.c.empty() && w.kind == DampedWeight::Kind::singular))
    throw std::invalid_argument("damping: need one c per rho");
  for (std::size_t i = 0; i < w.rho.size(); ++i) {
    if (!(w.rho[i] > 0)) throw std::invalid_argument("damping: rho must be positive");
    if (i > 0 && w.rho[i] > w.rho[i - 1]) throw std::invalid_argument("damping: rho must be descending");
  }
  for (double c : w.c)
    if (!(c >= 0)) throw std::invalid_argument("damping: c must be nonnegative");
}

// Local oscillation rate of the lambda phase plus feature scales of weights.
struct LambdaRate {
  const PhaseLambda& p;
  double extra = 0.0;   // 1/scale contributions independent of lambda
  double small_root = 0.0;  // smallest positive sqrt(sigma)
  double operator()(double lam) const {
    const PhaseDerivs d = phase_lambda_derivatives(p, std::max(lam, 1e-300));
    double r = std::abs(d.d1) + std::sqrt(std::abs(d.d2)) + std::cbrt(std::abs(d.d3)) + extra;
    if (small_root > 0) r += 1.0 / (lam + small_root);
    return r;
  }
};

LambdaRate make_rate(const PhaseLambda& p, const DampedWeight& w, const OscOptions& opt) {
  LambdaRate r{p};
  double sr = 0.0;
  for (double s : p.sigma)
    if (s > 0) sr = sr == 0.0 ? std::sqrt(s) : std::min(sr, std::sqrt(s));
  if (w.kind == DampedWeight::Kind::kato && p.sigma[w.k] > 0)
    sr = sr == 0.0 ? std::sqrt(p.sigma[w.k]) : std::min(sr, std::sqrt(p.sigma[w.k]));
  r.small_root = sr;
  for (double c : w.c) r.extra += c;
  if (opt.bump_scale > 0) r.extra += 1.0 / opt.bump_scale;
  return r;
}

}  // namespace

double cutoff_chi(Cutoff kind, double x) {
  const double s = (x - 0.25) / 0.25;
  return kind == Cutoff::smoothstep5 ? smoothstep5(s) : exp_transition(s);
}

double bump_psi(Cutoff kind, double x) { return 1.0 - cutoff_chi(kind, std::abs(x) / 4.0); }

void PhaseLambda::validate() const {
  if (b.size() != sigma.size()) throw std::invalid_argument("phase: b and sigma lengths differ");
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!(b[j] > 0)) throw std::invalid_argument("phase: b must be positive");
    if (!(sigma[j] >= 0)) throw std::invalid_argument("phase: sigma must be nonnegative");
    if (j > 0 && sigma[j] > sigma[j - 1]) throw std::invalid_argument("phase: sigma must be sorted descending");
  }
}

void PhaseU::validate() const {
  if (b.size() != tau.size() || b.empty()) throw std::invalid_argument("u-phase: need m >= 1 and equal lengths");
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!(b[j] > 0)) throw std::invalid_argument("u-phase: b must be positive");
    if (!(tau[j] > 0)) throw std::invalid_argument("u-phase: tau must be positive");
    if (j > 0 && tau[j] > tau[j - 1]) throw std::invalid_argument("u-phase: tau must be sorted descending");
  }
}

PhaseDerivs phase_lambda_derivatives(const PhaseLambda& p, double lambda) {
  const double s = sgn(p.sign);
  const double l2 = lambda * lambda;
  const simd::SqrtSums q = simd::sqrt_sums(l2, p.b, p.sigma);
  PhaseDerivs d;
  d.phi = 0.5 * l2 + s * q.s0;
  d.d1 = lambda * (1.0 + s * q.s1);
  d.d2 = 1.0 + s * q.s3;
  d.d3 = -3.0 * s * lambda * q.s5;
  return d;
}

std::optional<double> critical_point_lambda(const PhaseLambda& p) {
  p.validate();
  if (p.sign != Sign::minus) throw std::invalid_argument("critical point search needs the minus-sign phase");
  if (p.m() == 0) return std::nullopt;
  auto F = [&](double lam) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.m(); ++j) s += p.b[j] / std::sqrt(lam * lam + p.sigma[j]);
    return s;
  };
  bool forced = false;
  double at0 = 0.0;
  for (std::size_t j = 0; j < p.m(); ++j) {
    if (p.sigma[j] == 0.0) forced = true;
    else at0 += p.b[j] / std::sqrt(p.sigma[j]);
  }
  if (!forced && at0 <= 1.0) return std::nullopt;
  double lo = 0.0, hi = 0.0;
  for (double bj : p.b) hi += bj;  // F(sum b) <= 1
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (F(mid) > 1.0) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

PhaseDerivs phase_u_derivatives(const PhaseU& p, double u) {
  const double s = sgn(p.sign);
  const simd::SqrtSums q = simd::sqrt_sums(-u * u, p.b, p.tau);
  PhaseDerivs d;
  d.phi = 0.5 * u * u + s * q.s0;
  d.d1 = u * (1.0 - s * q.s1);
  d.d2 = 1.0 - s * q.s3;
  d.d3 = -3.0 * s * u * q.s5;
  return d;
}

std::optional<double> critical_point_u(const PhaseU& p) {
  p.validate();
  if (p.sign == Sign::minus) return std::nullopt;  // psi'(u)/u >= 1
  auto G = [&](double u) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.b.size(); ++j) s += p.b[j] / std::sqrt(p.tau[j] - u * u);
    return s;
  };
  if (G(0.0) >= 1.0) return std::nullopt;
  double lo = 0.0, hi = p.umax();
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (G(mid) < 1.0) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double osc_bound(const PhaseLambda& p, const DampedWeight& w, double C0) {
  validate_weight(p, w);
  const double sigma1 = p.sigma.empty() ? 0.0 : p.sigma.front();
  const double rho_l = w.rho.empty() ? 0.0 : w.rho.back();
  const double first = std::pow(1.0 + sigma1 + rho_l, 0.25);
  const double m = static_cast<double>(p.m());
  switch (w.kind) {
    case DampedWeight::Kind::unit:
      return C0 * first;
    case DampedWeight::Kind::kato: {
      const double bmax = *std::max_element(p.b.begin(), p.b.end());
      return C0 * std::min(first, std::pow(m, 1.5) * bmax / p.b[w.k]);
    }
    case DampedWeight::Kind::singular: {
      if (w.c.empty() || w.c[w.k] == 0.0) return C0 * first;
      double mx = 0.0;
      for (double bj : p.b)
        for (double ci : w.c) mx = std::max(mx, bj + ci);
      return C0 * std::min(first, std::pow(m, 1.5) * mx / w.c[w.k]);
    }
  }
  return 0.0;
}

OscResult osc_integral_statphase(double a, double t, double L, const OscOptions& opt) {
  if (!(t >= 1.0) || !(L >= 1.0)) throw std::invalid_argument("statphase integral needs t >= 1 and L >= 1");
  OscResult res;
  res.ref_bound = opt.C0 * std::pow(t, -1.5) * std::abs(a);
  if (a == 0.0) return res;
  auto f = [&](double mu) {
    return 2.0 * mu * std::sin(a * mu) * bump_psi(opt.chi, mu / L) * std::polar(1.0, t * mu * mu);
  };
  auto rate = [&](double mu) { return 2.0 * t * mu + std::abs(a) + std::sqrt(2.0 * t) + 1.0 / L; };
  Accum acc;
  march(f, rate, 0.0, 2.0 * L, opt.abs_tol, 0.5, acc, opt.max_evals);
  res.value = acc.value;
  res.quad_error = acc.error;
  res.evals = acc.evals;
  res.ratio = std::abs(res.value) / res.ref_bound;
  return res;
}

OscResult osc_integral_lambda(const PhaseLambda& p, const DampedWeight& w, double upper, const OscOptions& opt) {
  p.validate();
  validate_weight(p, w);
  if (p.m() == 0 && w.kind == DampedWeight::Kind::kato) throw std::out_of_range("kato weight needs m >= 1");
  const double s = sgn(p.sign);
  const bool singular_end = w.kind == DampedWeight::Kind::singular || w.damped();
  const LambdaRate rate = make_rate(p, w, opt);

  auto phase = [&](double lam) {
    const simd::SqrtSums q = simd::sqrt_sums(lam * lam, p.b, p.sigma);
    return 0.5 * lam * lam + s * q.s0;
  };
  auto bump = [&](double lam) { return opt.bump_scale > 0 ? bump_psi(opt.chi, lam / opt.bump_scale) : 1.0; };

  Accum acc;
  OscResult res;
  res.ref_bound = osc_bound(p, w, opt.C0);

  if (singular_end) {
    if (w.rho.empty()) throw std::invalid_argument("singular/damped weight needs rho");
    const double rho_l = w.rho.back();
    const double U = std::sqrt(rho_l);
    if (std::isfinite(upper) && std::abs(upper - U) > 1e-12 * (1.0 + U))
      throw std::invalid_argument("damped or singular weight: upper limit must be sqrt(rho_l)");
    // far part: lambda in [0, U/2] with (1 - chi(lambda/U))
    auto far = [&](double lam) {
      const double cut = 1.0 - cutoff_chi(opt.chi, lam / U);
      if (cut == 0.0) return cplx{};
      return weight_value(w, p, lam) * damping(w, lam) * cut * bump(lam) * std::polar(1.0, phase(lam));
    };
    march(far, rate, 0.0, 0.5 * U, 0.5 * opt.abs_tol, 0.5, acc, opt.max_evals);
    // near part: u = sqrt(rho_l - lambda^2), lambda in [U/4, U]; weight dlambda -> du terms
    PhaseU pu;
    pu.sign = p.sign == Sign::plus ? Sign::minus : Sign::plus;
    pu.b = p.b;
    for (double sj : p.sigma) pu.tau.push_back(rho_l + sj);
    auto lam_of = [&](double u) { return std::sqrt(std::max(0.0, (U - u) * (U + u))); };
    auto near = [&](double u) {
      const double lam = lam_of(u);
      const double cut = cutoff_chi(opt.chi, lam / U);
      if (cut == 0.0) return cplx{};
      double wt = 0.0;  // weight(lambda) * |dlambda/du|
      switch (w.kind) {
        case DampedWeight::Kind::unit:
          wt = u / lam;
          break;
        case DampedWeight::Kind::kato:
          wt = u / std::sqrt(lam * lam + p.sigma[w.k]);
          break;
        case DampedWeight::Kind::singular: {
          const double gap = w.rho[w.k] - rho_l;
          wt = gap == 0.0 ? 1.0 : u / std::sqrt(gap + u * u);
          break;
        }
      }
      double e = 0.0;
      for (std::size_t i = 0; i < w.c.size(); ++i) e += w.c[i] * std::sqrt(w.rho[i] - rho_l + u * u);
      double ph = 0.5 * rho_l - 0.5 * u * u;
      if (p.m() > 0) ph += s * simd::sqrt_sums(-u * u, pu.b, pu.tau).s0;
      return wt * std::exp(-e) * cut * bump(lam) * std::polar(1.0, ph);
    };
    auto urate = [&](double u) {
      double r = 0.0;
      if (p.m() > 0) {
        const PhaseDerivs d = phase_u_derivatives(pu, u);
        r = std::abs(d.d1) + std::sqrt(std::abs(d.d2)) + std::cbrt(std::abs(d.d3));
      } else {
        r = u + 1.0;
      }
      double csum = 0.0;
      for (double c : w.c) csum += c;
      return r + csum + 1.0 / (U + 1e-300);
    };
    const double umax = U * std::sqrt(15.0 / 16.0);
    march(near, urate, 0.0, umax, 0.5 * opt.abs_tol, 0.5, acc, opt.max_evals);
  } else {
    double top = upper;
    if (opt.bump_scale > 0) top = std::min(top, 2.0 * opt.bump_scale);
    auto f = [&](double lam) { return weight_value(w, p, lam) * bump(lam) * std::polar(1.0, phase(lam)); };
    if (std::isfinite(top)) {
      march(f, rate, 0.0, top, opt.abs_tol, 0.5, acc, opt.max_evals);
    } else {
      // [0, Lambda] on the real axis, then the tail along Lambda + e^{i pi/4} tau.
      // The integrand is analytic for Re lambda > 0 (branch cuts sit on the
      // imaginary axis) and decays along the ray once S1(Lambda) <= 1/2.
      double Lam = 8.0;
      auto S1 = [&](double lam) {
        double v = 0.0;
        for (std::size_t j = 0; j < p.m(); ++j) v += p.b[j] / std::sqrt(lam * lam + p.sigma[j]);
        return v;
      };
      if (p.sign == Sign::minus)
        while (S1(Lam) > 0.5) Lam *= 1.25;
      march(f, rate, 0.0, Lam, 0.9 * opt.abs_tol, 0.5, acc, opt.max_evals);
      const cplx dir = std::polar(1.0, pi / 4.0);
      auto ray = [&](double tau) {
        const cplx lam = Lam + dir * tau;
        const cplx l2 = lam * lam;
        cplx ph = 0.5 * l2;
        for (std::size_t j = 0; j < p.m(); ++j) ph += s * p.b[j] * std::sqrt(l2 + p.sigma[j]);
        cplx wt{1.0, 0.0};
        if (w.kind == DampedWeight::Kind::kato && p.sigma[w.k] > 0) wt = lam / std::sqrt(l2 + p.sigma[w.k]);
        return dir * wt * std::exp(I * ph);
      };
      const double decay = phase_lambda_derivatives(p, Lam).d1 / std::sqrt(2.0);
      double tau = 0.0, h = 1.0 / (decay + 1.0);
      const double tail_tol = 0.1 * opt.abs_tol;
      for (int it = 0; it < 400; ++it) {
        const auto r = integrate_adaptive(ray, tau, tau + h, 0.01 * tail_tol, 1e-13, 200);
        acc.value += r.value;
        acc.error += r.error;
        acc.evals += r.evals;
        tau += h;
        h *= 1.3;
        if (std::abs(ray(tau)) / (decay + tau) < 0.01 * tail_tol) break;
      }
    }
  }
  res.value = acc.value;
  res.quad_error = acc.error;
  res.evals = acc.evals;
  res.ratio = res.ref_bound > 0 ? std::abs(res.value) / res.ref_bound : 0.0;
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
  if (!(res.quad_error <= 1e4 * tol + 1e-6))
    throw QuadratureError("oscillatory quadrature did not converge (error " + std::to_string(res.quad_error) + ")");
  return res;
}

namespace {
// rho - hi^2, with the rounding residue of hi = sqrt(rho) snapped to zero
double endpoint_gap(double rho, double hi) {
  const double g = rho - hi * hi;
  return std::abs(g) <= 4.0 * std::numeric_limits<double>::epsilon() * rho ? 0.0 : g;
}
}  // namespace

OscResult osc_integral_lambda_direct(const PhaseLambda& p, const DampedWeight& w, double lo, double hi) {
  p.validate();
  validate_weight(p, w);
  const double s = sgn(p.sign);
  auto f = [&](double lam, double db) {
    double wt = 1.0;
    switch (w.kind) {
      case DampedWeight::Kind::unit:
        break;
      case DampedWeight::Kind::kato:
        wt = weight_value(w, p, lam);
        break;
      case DampedWeight::Kind::singular: {
        // rho_k - lam^2, exact near the endpoint when rho_k = hi^2
        const double q = endpoint_gap(w.rho[w.k], hi) + db * (2.0 * hi - db);
        wt = lam / std::sqrt(q);
        break;
      }
    }
    double e = 0.0;
    for (std::size_t i = 0; i < w.c.size(); ++i) {
      e += w.c[i] * std::sqrt(std::max(0.0, endpoint_gap(w.rho[i], hi) + db * (2.0 * hi - db)));
    }
    const double ph = 0.5 * lam * lam + s * simd::sqrt_sums(lam * lam, p.b, p.sigma).s0;
    return wt * std::exp(-e) * std::polar(1.0, ph);
  };
  const auto r = integrate_tanh_sinh(f, lo, hi, 1e-13, 14);
  OscResult res;
  res.value = r.value;
  res.quad_error = r.error;
  res.ref_bound = osc_bound(p, w, 1.0);
  res.ratio = res.ref_bound > 0 ? std::abs(res.value) / res.ref_bound : 0.0;
  return res;
}

}  // namespace displab
