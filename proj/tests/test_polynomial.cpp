#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "henon/polynomial.hpp"

using namespace henon;

namespace {
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;
}

TEST_CASE("escape_time basics") {
  auto c0 = BoettcherContext::make(0.0);
  auto r = escape_time(c0, 2.0);
  REQUIRE(r.has_value());
  CHECK(*r == 1);  // |2| < 3 but |4| > 3
  CHECK(!escape_time(c0, 0.5).has_value());
  // 0 -> -1 -> 0 two-cycle stays bounded
  CHECK(!escape_time(BoettcherContext::make(-1.0), 0.0).has_value());
}

TEST_CASE("boettcher_phi identity at c=0") {
  auto ctx = BoettcherContext::make(0.0);
  CHECK(std::abs(boettcher_phi(ctx, 3.0) - 3.0) < 1e-12);
  CHECK(std::abs(boettcher_phi(ctx, Complex(0, 5)) - Complex(0, 5)) < 1e-10);
}

TEST_CASE("boettcher_phi functional equation") {
  auto ctx = BoettcherContext::make(Complex(0, 0.1));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int checked = 0;
  while (checked < 100) {
    Complex z(u(rng), u(rng));
    if (!escape_time(ctx, z)) continue;
    Complex lhs = boettcher_phi(ctx, ctx.poly(z));
    Complex rhs = boettcher_phi(ctx, z);
    CHECK(std::abs(lhs - rhs * rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    ++checked;
  }
}

TEST_CASE("boettcher inverse round trip") {
  auto ctx = BoettcherContext::make(-1.0);
  Complex g = boettcher_inverse(ctx, 2.0);
  CHECK(std::abs(boettcher_phi(ctx, g) - 2.0) < 1e-10);
  // angle-0 ray is real, beyond the beta fixed point x^2 - x - 1 = 0
  Complex g12 = boettcher_inverse(ctx, 1.2);
  CHECK(std::abs(g12.imag()) < 1e-10);
  CHECK(g12.real() > kGolden);
}

TEST_CASE("boettcher inverse equivariance gamma(w^2)=p(gamma(w))") {
  auto ctx = BoettcherContext::make(Complex(0, 0.1));
  for (int i = 0; i < 64; ++i) {
    Complex w = 1.1 * Angle::rational(i, 64).unit();
    Complex lhs = boettcher_inverse(ctx, w * w);
    Complex rhs = ctx.poly(boettcher_inverse(ctx, w));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("caratheodory identity loop at c=0") {
  auto ctx = BoettcherContext::make(0.0);
  Angle t = Angle::rational(1, 3);
  CHECK(std::abs(caratheodory(ctx, t).value - t.unit()) < 1e-10);
}

TEST_CASE("caratheodory lands at beta for c=-1 theta=0") {
  auto ctx = BoettcherContext::make(-1.0);
  LoopValue v = caratheodory(ctx, Angle());
  CHECK(v.converged);
  CHECK(std::abs(v.value - kGolden) < 1e-8);
}

TEST_CASE("caratheodory basilica co-landing 1/3 and 2/3") {
  auto ctx = BoettcherContext::make(-1.0);
  Complex g1 = caratheodory(ctx, Angle::rational(1, 3)).value;
  Complex g2 = caratheodory(ctx, Angle::rational(2, 3)).value;
  CHECK(std::abs(g1 - g2) < 1e-7);
  // both fixed by p o p
  Complex p2 = ctx.poly(ctx.poly(g1));
  CHECK(std::abs(p2 - g1) < 1e-6);
}

TEST_CASE("caratheodory loop equivariance and oddness") {
  auto ctx = BoettcherContext::make(-1.0);
  for (int i : {1, 3, 5, 11}) {
    Angle t = Angle::rational(i, 16);
    Complex g = caratheodory(ctx, t).value;
    CHECK(std::abs(caratheodory(ctx, t.doubled()).value - ctx.poly(g)) < 1e-8);
    CHECK(std::abs(caratheodory(ctx, t.plus_half()).value + g) < 1e-8);
  }
}

TEST_CASE("delta_inf_gamma") {
  CHECK(std::abs(delta_inf_gamma(BoettcherContext::make(0.0), 64) - 1.0) < 1e-10);
  double d = delta_inf_gamma(BoettcherContext::make(-1.0), 512);
  CHECK(d > 0.0);
  CHECK(d < 1.0);
  CHECK(d <= 2.0 + 1e-9);
}

TEST_CASE("landing_identified") {
  auto basilica = BoettcherContext::make(-1.0);
  CHECK(landing_identified(basilica, Angle::rational(1, 3), Angle::rational(2, 3)));
  CHECK(landing_identified(basilica, Angle::rational(1, 3), Angle::rational(1, 3)));
  auto circle = BoettcherContext::make(0.0);
  CHECK(!landing_identified(circle, Angle::rational(1, 3), Angle::rational(2, 3)));
}

TEST_CASE("aitken_limit accelerates a geometric tail") {
  const Complex limit(0.7, -0.3);
  std::vector<Complex> s;
  for (int n = 0; n < 12; ++n)
    s.push_back(limit + std::pow(Complex(0.6, 0.1), n));
  double gap = 0.0;
  Complex v = aitken_limit(s, gap);
  CHECK(std::abs(v - limit) < 1e-10);
  CHECK(gap < 1e-8);
}

TEST_CASE("Angle exact rational arithmetic") {
  Angle t = Angle::rational(1, 3);
  CHECK(t.doubled() == Angle::rational(2, 3));
  CHECK(t.doubled().doubled() == t);
  CHECK(t.period_under_doubling().value() == 2);
  // 1/4 -> 1/2 -> 0 -> 0 never returns, so no period
  CHECK(!Angle::rational(1, 4).period_under_doubling().has_value());
  CHECK(Angle::dyadic(2, 2) == Angle::dyadic(1, 1));
  CHECK(Angle::rational(5, 10) == Angle::dyadic(1, 1));
  CHECK(Angle::rational(1, 8).plus_half() == Angle::rational(5, 8));
  CHECK(Angle::rational(3, 8).negated() == Angle::rational(5, 8));
}
