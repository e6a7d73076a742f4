#include <doctest.h>

#include <random>

#include "displab/norms.hpp"
#include "displab/radial.hpp"
#include "displab/rng.hpp"

using namespace displab;

namespace {

Vec3 uniform_ball(std::mt19937_64& g, double R) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    const Vec3 p{u(g), u(g), u(g)};
    if (norm3(p) <= 1) return {R * p[0], R * p[1], R * p[2]};
  }
}

}  // namespace

TEST_CASE("kato norm closed forms") {
  const SpatialPotential ball(BallIndicator{1.0, 1.0});
  CHECK(kato_global(ball) == doctest::Approx(2 * pi).epsilon(1e-12));
  CHECK(kato_global(ball.scaled_amplitude(3.0)) == doctest::Approx(6 * pi).epsilon(1e-12));
  // int e^{-|y|^2}/|y| dy = 2 pi
  const SpatialPotential g(Gaussian{1.0, 1.0});
  CHECK(kato_global(g) == doctest::Approx(2 * pi).epsilon(1e-12));
  // negative amplitude uses |V|
  CHECK(kato_global(SpatialPotential(Gaussian{-2.0, 1.0})) == doctest::Approx(4 * pi).epsilon(1e-12));
}

TEST_CASE("kato norm of the Gaussian against 3D Monte-Carlo") {
  // y ~ N(0, 1/2 I) has density pi^{-3/2} e^{-|y|^2}
  std::mt19937_64 g(21);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const int n = 1000000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = std::pow(pi, 1.5) / norm3({nd(g), nd(g), nd(g)});
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / (n - 1));
  CHECK(std::abs(kato_global(SpatialPotential(Gaussian{1.0, 1.0})) - mean) <= 3 * se);
}

TEST_CASE("Newton reduction matches 3D Monte-Carlo off centre") {
  const SpatialPotential ball(BallIndicator{1.0, 1.0});
  std::mt19937_64 g(3);
  for (double r : {0.3, 0.9, 1.7}) {
    const Vec3 x{r, 0, 0};
    const int n = 400000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double v = (4.0 * pi / 3.0) / dist3(x, uniform_ball(g, 1.0));
      s += v;
      s2 += v * v;
    }
    const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(newton_potential(ball, r) - mean) <= 3 * se);
  }
}

TEST_CASE("kato norm for non-monotone radial profile searches r") {
  // shell 1 < r <= 2 of height 1: sup over r of the Newton potential is at r = 0 still (2 pi (4-1) = 6 pi)
  const SpatialPotential shell(RadialPiecewise{{1.0, 2.0}, {0.0, 1.0}});
  CHECK(kato_global(shell) == doctest::Approx(6 * pi).epsilon(1e-10));
  // negative inner core of larger modulus
  const SpatialPotential p(RadialPiecewise{{0.5, 3.0}, {-0.1, 1.0}});
  double best = 0;
  for (double r = 0; r < 5; r += 0.001) best = std::max(best, newton_potential(p, r));
  CHECK(kato_global(p) >= best - 1e-9);
  CHECK(kato_global(p) == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("kato and rollnik scaling invariance") {
  for (const SpatialPotential& V : {SpatialPotential(Gaussian{1.0, 1.0}), SpatialPotential(BallIndicator{2.0, 0.7}),
                                    SpatialPotential(InversePower{1.0, 1.0, 1.0})}) {
    const double k = kato_global(V);
    for (double R : {0.5, 2.0, 5.0}) CHECK(kato_global(V.dilated(R)) == doctest::Approx(k).epsilon(1e-8));
  }
  const SpatialPotential ball(BallIndicator{1.0, 1.0});
  const McEstimate a = rollnik(ball, 1000000, 4);
  const McEstimate b = rollnik(ball.dilated(2.0), 1000000, 5);
  CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("rollnik of the unit ball") {
  // distance law of two uniform points in the unit ball gives E|x-y|^{-2} = 9/4,
  // so the double integral is (4 pi/3)^2 9/4 = 4 pi^2 and the norm is 2 pi
  const McEstimate r = rollnik(SpatialPotential(BallIndicator{1.0, 1.0}), 4000000, 9);
  CHECK(r.std_error < 0.01 * r.value);
  CHECK(std::abs(r.value - 2 * pi) <= 3 * r.std_error);
}

TEST_CASE("homogeneity") {
  const SpatialPotential g(Gaussian{1.0, 1.3});
  const McEstimate r1 = rollnik(g, 200000, 1), r3 = rollnik(g.scaled_amplitude(3.0), 200000, 1);
  CHECK(r3.value == doctest::Approx(3.0 * r1.value).epsilon(1e-12));
  CHECK(l32_norm(g.scaled_amplitude(3.0)) == doctest::Approx(3.0 * l32_norm(g)).epsilon(1e-12));
  CHECK(kato_global(g.scaled_amplitude(0.2)) == doctest::Approx(0.2 * kato_global(g)).epsilon(1e-12));
}

TEST_CASE("L^{3/2} norm") {
  CHECK(l32_norm(SpatialPotential(BallIndicator{1.0, 1.0})) == doctest::Approx(std::pow(4 * pi / 3, 2.0 / 3.0)));
  CHECK(l32_norm(SpatialPotential(BallIndicator{2.5, 1.0})) ==
        doctest::Approx(2.5 * std::pow(4 * pi / 3, 2.0 / 3.0)));
  CHECK(l32_norm(SpatialPotential(Gaussian{1.0, 1.0})) == doctest::Approx(2 * pi / 3).epsilon(1e-12));
  // (1+s^2)^{-3/2 (1+eps)} s^2 needs eps > 0: fine for eps = 0.1
  CHECK(std::isfinite(l32_norm(SpatialPotential(InversePower{1.0, 0.1, 1.0}))));
}

TEST_CASE("inverse power Kato norm is finite for every eps > 0") {
  // tail s |V| ~ s^{-1-2 eps} is integrable for all eps > 0
  for (double eps : {0.05, 0.3, 0.5, 2.0}) {
    const double k = kato_global(SpatialPotential(InversePower{1.0, eps, 1.0}));
    CHECK(std::isfinite(k));
    // closed form 4 pi int s (1+s^2)^{-1-eps} ds = 2 pi / eps
    CHECK(k == doctest::Approx(2 * pi / eps).epsilon(1e-8));
  }
}

TEST_CASE("y norm reductions and flags") {
  const SpatialPotential g(Gaussian{0.005, 1.0});
  const NormReport c = y_norm({TimeProfile::constant(), g}, {}, 20000, 1);
  CHECK(c.y_norm == doctest::Approx(l32_norm(g) + kato_global(g)).epsilon(1e-12));
  const NormReport cs = y_norm({TimeProfile::cosine(1.0), g}, {}, 20000, 1);
  CHECK(cs.y_norm == doctest::Approx(c.y_norm).epsilon(1e-12));
  CHECK(c.flags.kato_small);
  CHECK(c.flags.rollnik_small);
  CHECK(c.flags.y_small);

  const NormReport z = y_norm({TimeProfile::constant(), Gaussian{0.0, 1.0}}, {}, 1000, 1);
  CHECK(z.y_norm == 0.0);
  CHECK(z.rollnik == 0.0);
  CHECK((z.flags.kato_small && z.flags.rollnik_small && z.flags.y_small));

  const NormReport big = y_norm({TimeProfile::constant(), BallIndicator{3.0, 1.0}}, {}, 20000, 1);
  CHECK_FALSE(big.flags.kato_small);  // 6 pi > 4 pi
  CHECK_FALSE(big.flags.y_small);

  // flags are a pure function of values and thresholds
  NormThresholds th;
  th.c0 = 1e-6;
  CHECK_FALSE(norm_flags(c.rollnik, c.kato_global, c.y_norm, th).y_small);
  CHECK(norm_flags(0.0, 4 * pi - 1e-9, 0.0, th).kato_small);
  CHECK_FALSE(norm_flags(0.0, 4 * pi, 0.0, th).kato_small);
}
