#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "henon/cocycle.hpp"

using namespace henon;

namespace {

CocycleEngine& engine() {
  static CocycleEngine e(HenonParams::make(Complex(0, 0.1), 0.05));
  return e;
}

}  // namespace

TEST_CASE("alpha_std converges and beta = -alpha") {
  CocycleSample s = engine().alpha_std(Angle::rational(1, 8));
  CHECK(s.converged);
  CHECK(s.beta == -s.alpha);
  CHECK(std::abs(s.alpha) > 1e-14 * 0.05);
  // small-Jacobian scale: |alpha| = O(|a|)
  CHECK(std::abs(s.alpha) < 10.0 * 0.05);
}

TEST_CASE("alpha_std degenerate prediction at small a") {
  auto h = HenonParams::make(-1.0, 1e-6);
  CocycleEngine e(h);
  CocycleSample s = e.alpha_std(Angle());
  const double beta_fp = (1.0 + std::sqrt(5.0)) / 2.0;
  Complex pred = 1e-6 / (2.0 * beta_fp);  // gamma(1)/(2 gamma(1)^2)
  CHECK(std::abs(s.alpha - pred) < 1e-2 * std::abs(pred));
}

TEST_CASE("gauge algebra") {
  const Angle t = Angle::rational(1, 8);
  CocycleSample base = engine().alpha_std(t);
  GaugeFunction one{[](const Angle&) { return Complex(1.0); }};
  CocycleSample same = engine().alpha_gauge(t, one);
  CHECK(std::abs(same.alpha - base.alpha) < 1e-14);
  CocycleSample norm = engine().alpha_normalized(t);
  Complex g1 = engine().gamma_circle(t);
  Complex g2 = engine().gamma_circle(t.doubled());
  Complex expect = base.alpha * g2 * g2 / (g1 * g1);
  CHECK(std::abs(norm.alpha - expect) < 1e-8 * std::abs(expect));
  GaugeFunction zero{[](const Angle&) { return Complex(0.0); }};
  CHECK_THROWS_AS(engine().alpha_gauge(t, zero), ZeroGauge);
}

TEST_CASE("periodic product gauge invariance at theta=1/3") {
  const Angle t = Angle::rational(1, 3);
  REQUIRE(t.period_under_doubling().value() == 2);
  Complex plain = engine().periodic_product(t);
  GaugeFunction u{[](const Angle& a) {
    return Complex(1.3, 0.2) + std::exp(Complex(0, kTwoPi * a.turns()));
  }};
  Complex twisted = engine().alpha_gauge(t, u).alpha *
                    engine().alpha_gauge(t.doubled(), u).alpha;
  CHECK(std::abs(twisted - plain) < 1e-9 * std::abs(plain));
  CHECK_THROWS_AS(engine().periodic_product(Angle::rational(1, 4)), NotPeriodic);
}

TEST_CASE("stable multiplier at the fixed point") {
  MultiplierReport r = engine().check_multiplier(Angle());
  CHECK(r.period == 1);
  CHECK(r.rel_error < 1e-2);
  // oracle: small eigenvalue x - sqrt(x^2 - a) at the matched fixed point
  Complex x = r.matched_point(0);
  Complex lam = x - std::sqrt(x * x - Complex(0.05));
  if (std::abs(lam) > std::abs(x + std::sqrt(x * x - Complex(0.05))))
    lam = x + std::sqrt(x * x - Complex(0.05));
  CHECK(std::abs(r.eigen_small - lam) < 1e-9);
}

TEST_CASE("identification at the basilica pinch point") {
  CocycleEngine e(HenonParams::make(-1.0, 1e-3));
  IdentificationReport r =
      e.identification_check(Angle::rational(1, 3), Angle::rational(2, 3));
  CHECK(r.pass);
  CHECK(r.rel_diff < 1e-5);
  CHECK_THROWS_AS(CocycleEngine(HenonParams::make(0.0, 1e-3))
                      .identification_check(Angle::rational(1, 3),
                                            Angle::rational(2, 3)),
                  NotIdentified);
}

TEST_CASE("lyapunov_integral validates sample counts") {
  CHECK_THROWS_AS(engine().lyapunov_integral(100), std::invalid_argument);
  CHECK_THROWS_AS(engine().lyapunov_integral(300), std::invalid_argument);
}

TEST_CASE("p_lambda parameter curve") {
  CHECK(p_lambda_params(1.0, 0.0).c == Complex(0.25));
  Complex w = std::exp(Complex(0, kTwoPi / 3.0));
  HenonParams h = p_lambda_params(w, 0.0);
  CHECK(std::abs(h.c - (w / 2.0 - w * w / 4.0)) < 1e-15);
  // p has a parabolic fixed point of multiplier lambda
  Complex z = w / 2.0;  // fixed point of z^2 + c with p'(z) = 2z = lambda
  CHECK(std::abs(z * z + h.c - z) < 1e-15);
  CHECK_THROWS_AS(semiparabolic_alpha_check(1.0, 0.0), ZeroJacobian);
}

TEST_CASE("winding_number oracle") {
  for (int k : {-3, -1, 0, 2}) {
    std::vector<Complex> samples;
    for (int i = 0; i < 128; ++i) {
      double t = double(i) / 128.0;
      samples.push_back(std::exp(Complex(0, kTwoPi * k * t)) +
                        Complex(0.1 * std::sin(9 * t), 0.05));
    }
    CHECK(winding_number(samples) == k);
  }
}
