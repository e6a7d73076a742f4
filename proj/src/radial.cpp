#include "displab/radial.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include "displab/quadrature.hpp"
#include "displab/rng.hpp"

namespace displab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper end of the numerically integrated range.
double numeric_cutoff(const SpatialPotential& V) {
  if (const auto* ip = std::get_if<InversePower>(&V.profile())) return 1e4 * ip->width;
  return V.effective_radius();
}

// closed-form integral of 4 pi s^k |V|^p over [R, inf) for inverse-power V
double power_tail(const InversePower& ip, double k, double p, double R) {
  const double q = p * (2.0 + 2.0 * ip.epsilon);
  const double alpha = q - k;
  if (!(alpha > 1.0))
    throw DivergenceError("radial integral diverges: |V|^p s^k decays like s^-" + std::to_string(alpha));
  const double w = ip.width, beta = p * (1.0 + ip.epsilon);
  const double x = (w / R) * (w / R);
  const double lead = std::pow(R, k - q + 1.0) / (alpha - 1.0);
  const double corr = 1.0 - beta * x * (alpha - 1.0) / (alpha + 1.0) +
                      0.5 * beta * (beta + 1.0) * x * x * (alpha - 1.0) / (alpha + 3.0);
  return 4.0 * pi * std::pow(std::abs(ip.amplitude), p) * std::pow(w, q) * lead * corr;
}

double segment(const SpatialPotential& V, double k, double p, double a, double b, bool logmap) {
  auto g = [&](double s) { return 4.0 * pi * std::pow(s, k) * std::pow(std::abs(V.radial(s)), p); };
  if (logmap && a > 0) {
    auto h = [&](double u) {
      const double s = std::exp(u);
      return g(s) * s;
    };
    return integrate_adaptive(h, std::log(a), std::log(b), 0.0, 1e-13, 4000).value;
  }
  return integrate_adaptive(g, a, b, 0.0, 1e-13, 4000).value;
}

}  // namespace

double length_scale(const SpatialPotential& V) {
  return std::visit(
      [](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Gaussian>) return p.width;
        if constexpr (std::is_same_v<P, InversePower>) return p.width;
        if constexpr (std::is_same_v<P, BallIndicator>) return p.radius;
        if constexpr (std::is_same_v<P, RadialPiecewise>) return 0.5 * p.breakpoints.back();
      },
      V.profile());
}

double radial_moment(const SpatialPotential& V, double k, double p, double a, double b) {
  if (!(b > a)) return 0.0;
  const double cut = numeric_cutoff(V);
  const auto* ip = std::get_if<InversePower>(&V.profile());
  const double hi = std::min(b, cut);
  double total = 0.0;
  if (hi > a) {
    std::vector<double> nodes{a};
    for (double r : V.breakpoints())
      if (r > a && r < hi) nodes.push_back(r);
    nodes.push_back(hi);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const bool logmap = ip && nodes[i] >= ip->width;
      total += segment(V, k, p, nodes[i], nodes[i + 1], logmap);
    }
  }
  if (ip && b > cut) {
    const double from = std::max(a, cut);
    total += power_tail(*ip, k, p, from);
    if (b < kInf) total -= power_tail(*ip, k, p, b);
  }
  return total;
}

double newton_potential(const SpatialPotential& V, double r) {
  if (r < 0) throw DomainError("newton_potential: negative radius");
  const double outer = radial_moment(V, 1.0, 1.0, r, kInf);
  if (r == 0.0) return outer;
  return radial_moment(V, 2.0, 1.0, 0.0, r) / r + outer;
}

RadialSampler::RadialSampler(const SpatialPotential& V, double k, double p, std::size_t cells) {
  const auto* ip = std::get_if<InversePower>(&V.profile());
  rmax_ = ip ? 50.0 * ip->width : V.effective_radius();
  dr_ = rmax_ / static_cast<double>(cells);
  std::vector<double> mass(cells);
  auto g = [&](double s) { return std::pow(s, k) * std::pow(std::abs(V.radial(s)), p); };
  double body = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = dr_ * static_cast<double>(i);
    mass[i] = gk15(g, a, a + dr_).value;
    body += mass[i];
  }
  if (ip) {
    // proposal tail ~ r^-2: heavy enough for every epsilon > 0
    tail_alpha_ = 2.0;
    tail_mass_ = 0.1;
  }
  if (!(body > 0)) throw std::invalid_argument("radial sampler: profile has zero mass");
  cdf_.resize(cells);
  dens_.resize(cells);
  double acc = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double frac = (1.0 - tail_mass_) * mass[i] / body;
    acc += frac;
    cdf_[i] = acc;
    dens_[i] = frac / dr_;
  }
  cdf_.back() = 1.0 - tail_mass_;
}

double RadialSampler::sample(std::mt19937_64& g) const {
  const double u = uniform01(g);
  if (u >= 1.0 - tail_mass_) {
    const double v = (u - (1.0 - tail_mass_)) / tail_mass_;
    return rmax_ * std::pow(1.0 - v, -1.0 / (tail_alpha_ - 1.0));
  }
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  const double lo = i == 0 ? 0.0 : cdf_[i - 1];
  const double span = cdf_[i] - lo;
  const double f = span > 0 ? (u - lo) / span : uniform01(g);
  return dr_ * (static_cast<double>(i) + std::clamp(f, 0.0, 1.0));
}

double RadialSampler::pdf(double r) const {
  if (r < 0) return 0.0;
  if (r >= rmax_) {
    if (tail_mass_ == 0.0) return 0.0;
    return tail_mass_ * (tail_alpha_ - 1.0) * std::pow(rmax_, tail_alpha_ - 1.0) * std::pow(r, -tail_alpha_);
  }
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(r / dr_), dens_.size() - 1);
  return dens_[i];
}

Vec3 RadialSampler::sample_point(std::mt19937_64& g) const {
  const double r = sample(g);
  const Vec3 d = random_direction(g);
  return {r * d[0], r * d[1], r * d[2]};
}

}  // namespace displab
