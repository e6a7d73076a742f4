#include <doctest.h>

#include <random>

#include "displab/born.hpp"
#include "displab/kernels.hpp"
#include "displab/norms.hpp"
#include "displab/quadrature.hpp"

using namespace displab;

namespace {

const cplx I{0, 1};

// Inverse Laplace transform of prod_r (-i) e^{i sqrt(Theta_r + i p) r_r} / (4 pi r_r).
// Vertical line Re p = 1; the lower half is bent onto y = -mu^2 and then a ray.
cplx bromwich(double T, const std::vector<double>& Th, const std::vector<double>& r) {
  const double c = 1.0;
  double R = 0;
  for (double x : r) R += x;
  auto F = [&](cplx p) {
    cplx v = std::exp(p * T);
    for (std::size_t k = 0; k < r.size(); ++k) v *= -I * std::exp(I * std::sqrt(Th[k] + I * p) * r[k]) / (4 * pi * r[k]);
    return v;
  };
  const double Y = 2 * std::pow(45.0 / R, 2) + 50;
  const auto up = integrate_adaptive([&](double y) { return F(cplx(c, y)); }, 0.0, Y, 1e-17, 1e-12, 200000);
  const double mu1 = std::max(3.0, 2 * R / T + 3);
  const auto lo =
      integrate_adaptive([&](double mu) { return F(cplx(c, -mu * mu)) * 2.0 * mu; }, 0.0, mu1, 1e-17, 1e-12, 200000);
  const cplx dir = std::polar(1.0, -pi / 4);
  const double taumax = std::min(60.0 / (std::sqrt(2.0) * T * mu1 - R / std::sqrt(2.0)), std::sqrt(60.0 / T));
  const auto ray = integrate_adaptive(
      [&](double tau) {
        const cplx mu = mu1 + dir * tau;
        return F(c - I * mu * mu) * 2.0 * mu * dir;
      },
      0.0, taumax, 1e-17, 1e-12, 200000);
  return (up.value + lo.value + ray.value) / (2 * pi);
}

// free kernel at complex time
cplx Kz(cplx z, double r) {
  return std::pow(4 * pi, -1.5) * std::polar(1.0, -0.75 * pi) * std::pow(z, -1.5) * std::exp(I * r * r / (4.0 * z));
}

// m = 1 in the time domain: int_0^T K_{T-u}(r0) e^{i th u} K_u(r1) du, with 1/u and 1/(T-u) moved onto vertical lines
cplx time_domain_m1(double T, double r0, double r1, double th) {
  const double v0 = 2.0 / T;
  auto A = [&](double tau) {
    const cplx v(v0, tau);
    return I * std::pow(v, -0.5) * std::exp(I * r1 * r1 * v / 4.0) * std::exp(I * th / v) * Kz(T - 1.0 / v, r0);
  };
  auto B = [&](double tau) {
    const cplx w(v0, tau);
    return I * std::pow(w, -0.5) * std::exp(I * r0 * r0 * w / 4.0) * std::exp(I * th * (T - 1.0 / w)) *
           Kz(T - 1.0 / w, r1);
  };
  const cplx pre = std::pow(4 * pi, -1.5) * std::polar(1.0, -0.75 * pi);
  const auto a = integrate_adaptive(A, 0.0, 200.0 / (r1 * r1), 1e-14, 1e-12, 20000);
  const auto b = integrate_adaptive(B, 0.0, 200.0 / (r0 * r0), 1e-14, 1e-12, 20000);
  return pre * (a.value + b.value);
}

cplx chain_kernel(const BornTermParams& p, const std::vector<double>& r) {
  double den = 1;
  for (double x : r) den *= 4 * pi * x;
  return p.prefactor() * born_bracket(p, r) / den;
}

}  // namespace

TEST_CASE("BornTermParams bookkeeping") {
  BornTermParams p;
  p.m = 2;
  p.t = 3.0;
  p.s = 1.0;
  p.taus = {1.0, -3.0};  // Theta = 0, 1, -2
  CHECK(p.theta_min() == -2.0);
  CHECK(p.sigmas() == std::vector<double>{2.0, 3.0, 0.0});
  CHECK(p.omegas() == std::vector<double>{3.0, 2.0, 0.0});
  CHECK(p.link_of_rank(1) == 1);
  CHECK(p.link_of_rank(2) == 0);
  CHECK(p.link_of_rank(3) == 2);
  CHECK(p.rhos(2) == std::vector<double>{1.0, 3.0});
  CHECK(p.rhos(3) == std::vector<double>{2.0});
  CHECK(std::abs(p.prefactor() - cplx(0, 1) / (2 * pi) * std::polar(1.0, -4.0)) < 1e-15);
  p.taus = {1.0};
  CHECK_THROWS(p.validate());
  p.taus = {1.0, 2.0};
  p.t = 1.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("order zero is the free propagator") {
  for (double T : {0.5, 2.0, 7.0})
    for (double r : {0.2, 1.0, 3.5}) {
      BornTermParams p;
      p.t = T + 1.0;
      p.s = 1.0;
      const cplx k = chain_kernel(p, {r});
      CHECK(std::abs(k - free_propagator_kernel(T, r)) < 1e-11 * std::abs(free_propagator_kernel(T, r)));
      const McEstimateC l = born_kernel_L(p, 0, {0, 0, 0}, {r, 0, 0}, SpatialPotential(Gaussian{}), 10, 1);
      CHECK(std::abs(p.prefactor() * l.value - free_propagator_kernel(T, r)) < 1e-11 * std::abs(k));
    }
  const SeparablePotential V{TimeProfile::cosine(0.5), Gaussian{}};
  CHECK(born_kernel(V, 0, 2.0, 0.0, {0, 0, 0}, {0, 1, 0}, 10, 1).value == free_propagator_kernel(2.0, 1.0));
}

TEST_CASE("bracket matches the Bromwich oracle, m = 1") {
  for (double th : {0.0, 1.5, -2.0}) {
    BornTermParams p;
    p.m = 1;
    p.t = 2.0;
    p.taus = {th};
    const std::vector<double> r{1.3, 0.7};
    const cplx o = bromwich(2.0, {0.0, th}, r);
    CHECK(std::abs(chain_kernel(p, r) - o) <= 1e-10 * std::abs(o));
  }
}

TEST_CASE("bracket matches the Bromwich oracle, m = 2") {
  const std::vector<std::pair<double, double>> pats{{0, 0},   {1, 1},  {1, -1},    {-1, 1},
                                                    {-2, -0.5}, {3, -1}, {0.5, 2.5}, {2, -2}};
  const std::vector<double> r{1.1, 0.6, 0.9};
  for (auto [a, b] : pats)
    for (double T : {1.0, 3.0}) {
      BornTermParams p;
      p.m = 2;
      p.t = T;
      p.taus = {a, b};
      const cplx o = bromwich(T, {0.0, a, a + b}, r);
      INFO("taus ", a, " ", b, " T ", T);
      CHECK(std::abs(chain_kernel(p, r) - o) <= 1e-10 * std::abs(o));
    }
}

TEST_CASE("bracket matches the time-domain convolution, m = 1") {
  for (double T : {0.7, 2.0, 5.0})
    for (double th : {0.0, 1.0, -1.0, 3.0, -7.5}) {
      BornTermParams p;
      p.m = 1;
      p.t = T;
      p.taus = {th};
      const cplx o = time_domain_m1(T, 1.3, 0.7, th);
      CHECK(std::abs(chain_kernel(p, {1.3, 0.7}) - o) <= 1e-10 * std::abs(o));
    }
}

TEST_CASE("M terms vanish without time dependence") {
  BornTermParams p;
  p.m = 2;
  p.t = 2.0;
  p.taus = {0.0, 0.0};
  const std::vector<double> r{0.5, 1.0, 0.8};
  for (std::size_t d = 2; d <= 3; ++d) {
    for (std::size_t c = 1; c < d; ++c) CHECK(born_inner_M(p, d, c, false, r) == cplx{});
    for (std::size_t a = d; a <= 3; ++a) CHECK(born_inner_M(p, d, a, true, r) == cplx{});
  }
  const SpatialPotential V0(Gaussian{});
  CHECK(born_kernel_M(p, 2, 1, false, {0, 0, 0}, {1, 0, 0}, V0, 100, 1).value == cplx{});
  // rho_d = 0 for a repeated omega
  p.taus = {1.0, -1.0};  // omegas 1, 0, 0
  CHECK(born_inner_M(p, 3, 3, true, r) == cplx{});
  CHECK(born_inner_M(p, 2, 2, true, r) != cplx{});
}

TEST_CASE("order-m kernel is m-linear in the amplitude") {
  const Vec3 x{0.3, 0, 0}, y{-0.5, 0.4, 0};
  for (int m : {1, 2}) {
    const SeparablePotential V{TimeProfile::cosine(0.3), Gaussian{0.1, 1.0}};
    const SeparablePotential V2{TimeProfile::cosine(0.3), Gaussian{0.2, 1.0}};
    const auto a = born_kernel(V, m, 2.0, 0.0, x, y, 400, 7);
    const auto b = born_kernel(V2, m, 2.0, 0.0, x, y, 400, 7);
    // the chain proposal ignores the amplitude, so the same seed gives the same chains
    CHECK(std::abs(b.value - std::pow(2.0, m) * a.value) < 1e-12 * std::abs(b.value));
  }
}

TEST_CASE("sine telescope") {
  auto [l1, r1] = sine_telescope({pi / 2, pi / 2});
  CHECK(std::abs(l1) < 1e-15);
  CHECK(std::abs(r1) < 1e-15);
  auto [l2, r2] = sine_telescope({1.0, 0.0});
  CHECK(std::abs(l2 - std::sin(1.0)) < 1e-14);
  CHECK(std::abs(r2 - std::sin(1.0)) < 1e-14);
  CHECK_THROWS(sine_telescope({1.0}));
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int it = 0; it < 500; ++it) {
    std::vector<double> a(2 + it % 10);
    for (double& v : a) v = u(g);
    auto [l, r] = sine_telescope(a);
    CHECK(std::abs(l - r) <= 1e-10);
  }
}

TEST_CASE("partial fractions") {
  auto [l1, r1] = partial_fractions({1.0, 2.0});
  CHECK(std::abs(l1 - 0.5) < 1e-15);
  CHECK(std::abs(r1 - 0.5) < 1e-15);
  auto [l2, r2] = partial_fractions({1.0, I});
  CHECK(std::abs(l2 + I) < 1e-15);
  CHECK(std::abs(r2 + I) < 1e-15);
  CHECK_THROWS_AS(partial_fractions({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(partial_fractions({1.0, 1.0 + 1e-9}), DomainError);
  CHECK_THROWS_AS(partial_fractions({0.0, 1.0}), DomainError);
  std::mt19937_64 g(19);
  std::uniform_real_distribution<double> u(-3, 3);
  int tested = 0;
  for (int it = 0; it < 2000 && tested < 400; ++it) {
    std::vector<cplx> z(1 + it % 8);
    for (auto& v : z) v = {u(g), u(g)};
    bool ok = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      ok = ok && std::abs(z[i]) >= 0.1;
      for (std::size_t j = 0; j < i; ++j) ok = ok && std::abs(z[i] - z[j]) >= 0.1;
    }
    if (!ok) continue;
    ++tested;
    auto [l, r] = partial_fractions(z);
    CHECK(std::abs(l - r) <= 1e-9 * std::abs(r));
  }
  CHECK(tested == 400);
}

TEST_CASE("kato operator") {
  const SpatialPotential ball(BallIndicator{1.0, 1.0});
  auto one = [](const Vec3&) { return 1.0; };
  const McEstimate a = kato_apply(ball, one, {0, 0, 0}, 400000, 3);
  CHECK(std::abs(a.value - 2 * pi) <= 3 * a.std_error);
  CHECK(kato_apply_const(ball, 1.0, {0, 0, 0}) == doctest::Approx(2 * pi).epsilon(1e-12));
  CHECK(kato_apply_const(ball, 2.5, {0.5, 0, 0}) == doctest::Approx(2.5 * (2 * pi - 2 * pi * 0.25 / 3)).epsilon(1e-12));

  // linearity on a non-constant f with a shared seed
  auto f = [](const Vec3& y) { return std::cos(y[0]) + y[1] * y[1]; };
  const SpatialPotential g(Gaussian{1.0, 1.0});
  const McEstimate b1 = kato_apply(g, f, {0.2, 0.1, 0}, 20000, 5);
  const McEstimate b3 = kato_apply(g, [&](const Vec3& y) { return -3.0 * f(y); }, {0.2, 0.1, 0}, 20000, 5);
  CHECK(b3.value == doctest::Approx(-3.0 * b1.value).epsilon(1e-12));

  // ||A 1||_inf <= ||V||_K
  const double K = kato_global(g);
  for (double r : {0.0, 0.5, 1.5, 4.0}) {
    const McEstimate e = kato_apply(g, one, {r, 0, 0}, 100000, 11);
    CHECK(e.value <= K + 3 * e.std_error);
    CHECK(std::abs(e.value - kato_apply_const(g, 1.0, {r, 0, 0})) <= 4 * e.std_error);
  }
}

TEST_CASE("iterated Kato integral") {
  const SpatialPotential g(Gaussian{1.0, 1.0});
  const Vec3 x0{0.3, 0, 0}, x2{-0.5, 0.4, 0};
  // k = 1 telescopes to A1(x0) + A1(x2)
  const IteratedKato k1 = iterated_kato_estimate(g, 1, x0, x2, 200000, 1);
  const double ex = kato_apply_const(g, 1.0, x0) + kato_apply_const(g, 1.0, x2);
  CHECK(std::abs(k1.estimate - ex) <= 3 * k1.std_error);
  CHECK(k1.bound == doctest::Approx(2 * kato_global(g)));
  CHECK_FALSE(k1.low_precision);

  for (int k : {1, 2, 3}) {
    const IteratedKato e = iterated_kato_estimate(SpatialPotential(BallIndicator{1.0, 1.0}), k, x0, x2, 50000, 2);
    CHECK(e.estimate <= e.bound + 3 * e.std_error);
  }

  const IteratedKato z = iterated_kato_estimate(SpatialPotential(Gaussian{0.0, 1.0}), 2, x0, x2, 1000, 3);
  CHECK(z.estimate == 0.0);
  CHECK(z.bound == 0.0);

  const IteratedKato a1 = iterated_kato_estimate(g, 2, x0, x2, 100000, 4);
  const IteratedKato a2 = iterated_kato_estimate(g.scaled_amplitude(2.0), 2, x0, x2, 100000, 5);
  CHECK(std::abs(a2.estimate - 4 * a1.estimate) <= 3 * std::hypot(a2.std_error, 4 * a1.std_error));

  CHECK_THROWS(iterated_kato_estimate(g, 4, x0, x2, 10, 1));
  CHECK_THROWS(iterated_kato_estimate(g, 1, x0, x0, 10, 1));
}
