#include <doctest.h>

#include <limits>
#include <random>

#include "displab/potentials.hpp"
#include "displab/radial.hpp"

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

using namespace displab;

TEST_CASE("eval_potential examples") {
  const SeparablePotential ball{TimeProfile::constant(), BallIndicator{1.0, 1.0}};
  CHECK(eval_potential(ball, 0.0, {0.5, 0, 0}) == 1.0);
  CHECK(eval_potential(ball, 0.0, {2, 0, 0}) == 0.0);
  // boundary is inside (left-continuous)
  CHECK(eval_potential(ball, 0.0, {1, 0, 0}) == 1.0);

  const TimeProfile cosp(std::vector<TimeAtom>{{1.0 / (2 * pi), {0.5, 0}}, {-1.0 / (2 * pi), {0.5, 0}}});
  const SeparablePotential g{cosp, Gaussian{1.0, 1.0}};
  CHECK(eval_potential(g, pi, {0, 0, 0}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(eval_potential({TimeProfile::cosine(1.0), Gaussian{1.0, 1.0}}, pi, {0, 0, 0}) ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("fourier mass") {
  CHECK(fourier_mass(SeparablePotential{TimeProfile::constant(), Gaussian{}}) == 1.0);
  CHECK(fourier_mass(SeparablePotential{TimeProfile::cosine(2.0), Gaussian{}}) == doctest::Approx(1.0));
  CHECK(fourier_mass(std::vector<TimeAtom>{{0.0, {0.3, 0}}, {1.0, {0, 0.7}}, {2.0, {-0.2, 0}}}) ==
        doctest::Approx(1.2));
  // relabeling and phase rotation
  std::vector<TimeAtom> a{{0.5, {0.3, 0.4}}, {-0.5, {0.3, -0.4}}};
  std::vector<TimeAtom> b{{7.0, std::polar(0.5, 1.1)}, {3.0, std::polar(0.5, -2.0)}};
  CHECK(fourier_mass(a) == doctest::Approx(fourier_mass(b)));
}

TEST_CASE("time profile must be real") {
  CHECK_THROWS_AS(TimeProfile(std::vector<TimeAtom>{{1.0, {0.5, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(TimeProfile(std::vector<TimeAtom>{}), std::invalid_argument);
  CHECK_NOTHROW(TimeProfile(std::vector<TimeAtom>{{1.0, {0.5, 0.2}}, {-1.0, {0.5, -0.2}}}));
  const TimeProfile p(std::vector<TimeAtom>{{0.3, {0.5, 0.2}}, {-0.3, {0.5, -0.2}}});
  for (double t : {0.0, 0.7, 3.3}) CHECK(std::abs(p.value_complex(t).imag()) < 1e-14);
}

TEST_CASE("profile validation") {
  CHECK_THROWS(SpatialPotential(InversePower{1.0, 0.0, 1.0}));
  CHECK_THROWS(SpatialPotential(InversePower{1.0, -1.0, 1.0}));
  CHECK_THROWS(SpatialPotential(Gaussian{1.0, 0.0}));
  CHECK_THROWS(SpatialPotential(BallIndicator{1.0, -1.0}));
  CHECK_THROWS(SpatialPotential(RadialPiecewise{{1.0, 0.5}, {1.0, 2.0}}));
  CHECK_THROWS(SpatialPotential(RadialPiecewise{{1.0}, {1.0, 2.0}}));
}

TEST_CASE("separability property") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-3, 3);
  const SeparablePotential V{TimeProfile(std::vector<TimeAtom>{{0.2, {0.3, 0.1}}, {-0.2, {0.3, -0.1}}, {0.0, {0.4, 0}}}),
                             InversePower{2.0, 0.7, 1.5}};
  for (int i = 0; i < 200; ++i) {
    const Vec3 x{u(g), u(g), u(g)};
    const double t = u(g), t2 = u(g);
    const double ph = V.time()(t), ph2 = V.time()(t2);
    if (std::abs(ph2) < 1e-6) continue;
    CHECK(eval_potential(V, t, x) / eval_potential(V, t2, x) == doctest::Approx(ph / ph2).epsilon(1e-12));
  }
}

TEST_CASE("radial piecewise, dilation and amplitude") {
  const SpatialPotential p(RadialPiecewise{{1.0, 2.0}, {3.0, -1.0}});
  CHECK(p.radial(0.5) == 3.0);
  CHECK(p.radial(1.0) == 3.0);
  CHECK(p.radial(1.5) == -1.0);
  CHECK(p.radial(2.5) == 0.0);
  CHECK(p.compact());
  CHECK(p.radially_nonincreasing());  // |V| is 3 then 1
  CHECK_FALSE(SpatialPotential(RadialPiecewise{{1.0, 2.0}, {1.0, -3.0}}).radially_nonincreasing());
  CHECK(p.sup_abs() == 3.0);

  const SpatialPotential g(Gaussian{2.0, 1.0});
  const SpatialPotential d = g.dilated(2.0);
  for (double r : {0.0, 0.3, 1.7}) CHECK(d.radial(r) == doctest::Approx(4.0 * g.radial(2.0 * r)));
  CHECK(g.scaled_amplitude(3.0).radial(0.4) == doctest::Approx(3.0 * g.radial(0.4)));
  CHECK(SpatialPotential(InversePower{1.0, 0.5, 1.0}).tail_decay() == doctest::Approx(3.0));
}

TEST_CASE("radial moments and Newton potential") {
  const SpatialPotential ball(BallIndicator{1.0, 1.0});
  CHECK(radial_moment(ball, 2, 1, 0, kInf) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(newton_potential(ball, 0.0) == doctest::Approx(2 * pi));
  // outside the ball it is a point mass
  CHECK(newton_potential(ball, 3.0) == doctest::Approx(4.0 * pi / 9.0));
  // inside: 2 pi - 2 pi r^2 / 3
  CHECK(newton_potential(ball, 0.5) == doctest::Approx(2 * pi - 2 * pi * 0.25 / 3.0));
  const SpatialPotential g(Gaussian{1.0, 1.0});
  CHECK(radial_moment(g, 2, 1, 0, kInf) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-12));
  // algebraic tail: 4 pi int s^2 (1+s^2)^{-2} ds = pi^2
  CHECK(radial_moment(SpatialPotential(InversePower{1.0, 1.0, 1.0}), 2, 1, 0, kInf) ==
        doctest::Approx(pi * pi).epsilon(1e-10));
  CHECK_THROWS_AS(radial_moment(SpatialPotential(InversePower{1.0, 0.2, 1.0}), 2, 1, 0, kInf), DivergenceError);
}

TEST_CASE("radial sampler density integrates to one") {
  for (const SpatialPotential& V : {SpatialPotential(Gaussian{1, 1}), SpatialPotential(InversePower{1, 1, 1}),
                                    SpatialPotential(BallIndicator{1, 2})}) {
    const RadialSampler s(V, 2, 1);
    std::mt19937_64 g(5);
    double mean = 0;
    const int n = 20000;
    // E[1{r < 1} / pdf(r)] = 1
    for (int i = 0; i < n; ++i) {
      const double r = s.sample(g);
      CHECK(s.pdf(r) > 0);
      if (r < 1.0) mean += 1.0 / s.pdf(r);
    }
    CHECK(mean / n == doctest::Approx(1.0).epsilon(0.05));
  }
}
