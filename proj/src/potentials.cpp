#include "displab/potentials.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace displab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const SpatialPotential::Profile& p) {
  std::visit(overloaded{
                 [](const RadialPiecewise& rp) {
                   if (rp.breakpoints.empty() || rp.breakpoints.size() != rp.values.size())
                     throw std::invalid_argument("radial profile: need one value per breakpoint");
                   double prev = 0.0;
                   for (double r : rp.breakpoints) {
                     if (!(r > prev)) throw std::invalid_argument("radial profile: breakpoints must increase");
                     prev = r;
                   }
                   for (double v : rp.values)
                     if (!std::isfinite(v)) throw std::invalid_argument("radial profile: non-finite value");
                 },
                 [](const Gaussian& g) {
                   if (!(g.width > 0) || !std::isfinite(g.amplitude))
                     throw std::invalid_argument("gaussian: width must be positive");
                 },
                 [](const InversePower& ip) {
                   if (!(ip.epsilon > 0)) throw std::invalid_argument("inverse power: epsilon must be > 0");
                   if (!(ip.width > 0)) throw std::invalid_argument("inverse power: width must be positive");
                 },
                 [](const BallIndicator& b) {
                   if (!(b.radius > 0)) throw std::invalid_argument("ball: radius must be positive");
                 },
             },
             p);
}

}  // namespace

SpatialPotential::SpatialPotential(Profile p) : profile_(std::move(p)) { validate(profile_); }

std::string SpatialPotential::kind() const {
  return std::visit(overloaded{[](const RadialPiecewise&) { return std::string("radial"); },
                               [](const Gaussian&) { return std::string("gaussian"); },
                               [](const InversePower&) { return std::string("inverse_power"); },
                               [](const BallIndicator&) { return std::string("ball"); }},
                    profile_);
}

double SpatialPotential::radial(double r) const {
  return std::visit(
      overloaded{
          [r](const RadialPiecewise& rp) {
            auto it = std::lower_bound(rp.breakpoints.begin(), rp.breakpoints.end(), r);
            if (it == rp.breakpoints.end()) return 0.0;
            return rp.values[static_cast<std::size_t>(it - rp.breakpoints.begin())];
          },
          [r](const Gaussian& g) { return g.amplitude * std::exp(-(r * r) / (g.width * g.width)); },
          [r](const InversePower& ip) {
            const double s = r / ip.width;
            return ip.amplitude * std::pow(1.0 + s * s, -1.0 - ip.epsilon);
          },
          [r](const BallIndicator& b) { return r <= b.radius ? b.amplitude : 0.0; },
      },
      profile_);
}

std::vector<double> SpatialPotential::breakpoints() const {
  return std::visit(overloaded{[](const RadialPiecewise& rp) { return rp.breakpoints; },
                               [](const Gaussian& g) { return std::vector<double>{g.width, 3 * g.width}; },
                               [](const InversePower& ip) { return std::vector<double>{ip.width, 10 * ip.width}; },
                               [](const BallIndicator& b) { return std::vector<double>{b.radius}; }},
                    profile_);
}

double SpatialPotential::effective_radius() const {
  return std::visit(overloaded{[](const RadialPiecewise& rp) { return rp.breakpoints.back(); },
                               [](const Gaussian& g) { return 8.31 * g.width; },  // exp(-69) ~ 1e-30
                               [](const InversePower&) { return std::numeric_limits<double>::infinity(); },
                               [](const BallIndicator& b) { return b.radius; }},
                    profile_);
}

bool SpatialPotential::compact() const {
  return std::holds_alternative<RadialPiecewise>(profile_) || std::holds_alternative<BallIndicator>(profile_);
}

bool SpatialPotential::radially_nonincreasing() const {
  if (const auto* rp = std::get_if<RadialPiecewise>(&profile_)) {
    double prev = std::numeric_limits<double>::infinity();
    for (double v : rp->values) {
      if (std::abs(v) > prev) return false;
      prev = std::abs(v);
    }
    return true;
  }
  return true;
}

double SpatialPotential::sup_abs() const {
  return std::visit(overloaded{[](const RadialPiecewise& rp) {
                                 double m = 0;
                                 for (double v : rp.values) m = std::max(m, std::abs(v));
                                 return m;
                               },
                               [](const Gaussian& g) { return std::abs(g.amplitude); },
                               [](const InversePower& ip) { return std::abs(ip.amplitude); },
                               [](const BallIndicator& b) { return std::abs(b.amplitude); }},
                    profile_);
}

double SpatialPotential::tail_decay() const {
  if (const auto* ip = std::get_if<InversePower>(&profile_)) return 2.0 + 2.0 * ip->epsilon;
  return 0.0;
}

SpatialPotential SpatialPotential::scaled_amplitude(double a) const {
  return std::visit(overloaded{[a](RadialPiecewise rp) -> SpatialPotential {
                                 for (double& v : rp.values) v *= a;
                                 return rp;
                               },
                               [a](Gaussian g) -> SpatialPotential {
                                 g.amplitude *= a;
                                 return g;
                               },
                               [a](InversePower ip) -> SpatialPotential {
                                 ip.amplitude *= a;
                                 return ip;
                               },
                               [a](BallIndicator b) -> SpatialPotential {
                                 b.amplitude *= a;
                                 return b;
                               }},
                    profile_);
}

SpatialPotential SpatialPotential::dilated(double R) const {
  if (!(R > 0)) throw std::invalid_argument("dilation factor must be positive");
  const double R2 = R * R;
  return std::visit(overloaded{[R, R2](RadialPiecewise rp) -> SpatialPotential {
                                 for (double& r : rp.breakpoints) r /= R;
                                 for (double& v : rp.values) v *= R2;
                                 return rp;
                               },
                               [R, R2](Gaussian g) -> SpatialPotential {
                                 g.amplitude *= R2;
                                 g.width /= R;
                                 return g;
                               },
                               [R, R2](InversePower ip) -> SpatialPotential {
                                 ip.amplitude *= R2;
                                 ip.width /= R;
                                 return ip;
                               },
                               [R, R2](BallIndicator b) -> SpatialPotential {
                                 b.amplitude *= R2;
                                 b.radius /= R;
                                 return b;
                               }},
                    profile_);
}

TimeProfile::TimeProfile(std::vector<TimeAtom> atoms, double real_tol) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("time profile needs at least one atom");
  // merge by frequency, then require C(-f) = conj C(f)
  std::map<double, cplx> merged;
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.freq) || !std::isfinite(a.coeff.real()) || !std::isfinite(a.coeff.imag()))
      throw std::invalid_argument("time profile: non-finite atom");
    merged[a.freq] += a.coeff;
  }
  double scale = 0.0;
  for (const auto& [f, c] : merged) scale = std::max(scale, std::abs(c));
  for (const auto& [f, c] : merged) {
    auto it = merged.find(-f);
    const cplx partner = it == merged.end() ? cplx{} : it->second;
    if (std::abs(partner - std::conj(c)) > real_tol * std::max(1.0, scale))
      throw std::invalid_argument("time profile is not real-valued: atoms must come in conjugate-frequency pairs");
  }
}

TimeProfile TimeProfile::constant(double c) { return TimeProfile({TimeAtom{0.0, cplx(c, 0.0)}}); }

TimeProfile TimeProfile::cosine(double omega) {
  const double f = omega / (2.0 * pi);
  return TimeProfile({TimeAtom{f, 0.5}, TimeAtom{-f, 0.5}});
}

cplx TimeProfile::value_complex(double t) const {
  cplx s{};
  for (const auto& a : atoms_) s += a.coeff * std::polar(1.0, 2.0 * pi * t * a.freq);
  return s;
}

double TimeProfile::fourier_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += std::abs(a.coeff);
  return m;
}

bool TimeProfile::time_independent() const {
  for (const auto& a : atoms_)
    if (a.freq != 0.0 && a.coeff != cplx{}) return false;
  return true;
}

double eval_potential(const SeparablePotential& V, double t, const Vec3& x) {
  return V.time()(t) * V.space()(x);
}

double fourier_mass(const SeparablePotential& V) { return V.time().fourier_mass(); }

double fourier_mass(const std::vector<TimeAtom>& atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += std::abs(a.coeff);
  return m;
}

}  // namespace displab
