#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "henon/henon_map.hpp"

using namespace henon;

TEST_CASE("apply and inverse") {
  auto h = HenonParams::make(-1.0, 0.05);
  Point2 img = apply_map(h, Point2(0.0, 0.0));
  CHECK(std::abs(img(0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(img(1)) < 1e-15);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    Point2 q(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    CHECK((apply_inverse(h, apply_map(h, q)) - q).norm() < 1e-12);
  }

  auto deg = HenonParams::make(-1.0, 0.0);
  Point2 d = apply_map(deg, Point2(Complex(0.3, 0.1), 7.0));
  CHECK(std::abs(d(0) - (Complex(0.3, 0.1) * Complex(0.3, 0.1) - 1.0)) < 1e-15);
  CHECK(std::abs(d(1) - Complex(0.3, 0.1)) < 1e-15);
  CHECK_THROWS_AS(apply_inverse(deg, d), ZeroJacobian);
}

TEST_CASE("derivative determinant and orbit products") {
  auto h = HenonParams::make(Complex(0, 0.1), Complex(0.05, 0.02));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Point2 q(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    CHECK(std::abs(derivative(h, q).determinant() - h.a) < 1e-12);
  }
  // bounded orbit keeps matrix entries O(1), so the determinant identity
  // survives the product cancellation
  Point2 q(0.3, 0.1);
  CHECK((orbit_derivative(h, q, 0) - Matrix2::Identity()).norm() < 1e-15);
  Matrix2 prod = derivative(h, apply_map(h, q)) * derivative(h, q);
  CHECK((orbit_derivative(h, q, 2) - prod).norm() < 1e-12);
  Complex det3 = orbit_derivative(h, q, 3).determinant();
  CHECK(std::abs(det3 - h.a * h.a * h.a) < 1e-9 * std::abs(det3));
}

TEST_CASE("eigenvalues2 against characteristic polynomial") {
  auto h = HenonParams::make(-1.0, 0.05);
  // fixed point x^2 - (1+a) x + c = 0, on the diagonal
  Complex a = h.a;
  Complex x = ((1.0 + a) + std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * h.c)) / 2.0;
  auto [small, big] = eigenvalues2(derivative(h, Point2(x, x)));
  // roots of lambda^2 - 2x lambda + a
  Complex r1 = x + std::sqrt(x * x - a), r2 = x - std::sqrt(x * x - a);
  if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
  CHECK(std::abs(big - r1) < 1e-12);
  CHECK(std::abs(small - r2) < 1e-12);
  CHECK(std::abs(small) <= std::abs(big));
}

TEST_CASE("classify and first_entry") {
  auto h = HenonParams::make(-1.0, 0.05);
  REQUIRE(h.R == 3.0);
  CHECK(classify(h, Point2(5.0, 1.0)) == FiltrationRegion::Vplus);
  CHECK(classify(h, Point2(1.0, 5.0)) == FiltrationRegion::Vminus);
  CHECK(classify(h, Point2(0.5, 0.5)) == FiltrationRegion::V);
  // near the bounded 2-cycle: never enters V+
  CHECK(!first_entry_forward(h, Point2(0.0, 0.0), 10000).has_value());
  auto fe = first_entry_forward(h, Point2(2.0, 0.0), 100);
  REQUIRE(fe.has_value());
  CHECK(classify(h, fe->second) == FiltrationRegion::Vplus);
}

TEST_CASE("filtration invariance H(V+) in V+") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> mag(h.R, 3.0 * h.R);
  std::uniform_real_distribution<double> ph(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Complex x = mag(rng) * std::exp(Complex(0, kTwoPi * ph(rng)));
    Complex y = std::min(std::abs(x), h.R) * 0.9 * std::exp(Complex(0, kTwoPi * ph(rng)));
    Point2 q(x, y);
    if (classify(h, q) != FiltrationRegion::Vplus) continue;
    CHECK(classify(h, apply_map(h, q)) == FiltrationRegion::Vplus);
  }
}

TEST_CASE("phi_plus functional equation and asymptotics") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> mag(h.R + 0.1, 20.0);
  std::uniform_real_distribution<double> ph(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Complex x = mag(rng) * std::exp(Complex(0, kTwoPi * ph(rng)));
    Complex y = 0.8 * h.R * std::exp(Complex(0, kTwoPi * ph(rng)));
    Point2 q(x, y);
    if (classify(h, q) != FiltrationRegion::Vplus) continue;
    Complex f = phi_plus(h, q);
    CHECK(std::abs(phi_plus(h, apply_map(h, q)) - f * f) <
          1e-9 * std::max(1.0, std::abs(f) * std::abs(f)));
  }
  CHECK(std::abs(phi_plus(h, Point2(1e6, 0.7)) / 1e6 - 1.0) < 1e-6);
}

TEST_CASE("phi_plus degenerate a=0 equals polynomial Boettcher") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.0);
  auto ctx = h.boettcher();
  for (double x : {4.0, 6.5, 11.0}) {
    Complex v = phi_plus(h, Point2(x, 1.0));
    CHECK(std::abs(v - boettcher_phi(ctx, x)) < 1e-10);
  }
}

TEST_CASE("phi_minus functional equation and asymptotics") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> mag(h.R + 0.1, 20.0);
  std::uniform_real_distribution<double> ph(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Complex y = mag(rng) * std::exp(Complex(0, kTwoPi * ph(rng)));
    Complex x = 0.8 * std::min(std::abs(y), h.R) * std::exp(Complex(0, kTwoPi * ph(rng)));
    Point2 q(x, y);
    if (classify(h, q) != FiltrationRegion::Vminus) continue;
    Complex f = phi_minus(h, q);
    Complex lhs = h.a * phi_minus(h, apply_inverse(h, q));
    CHECK(std::abs(lhs - f * f) < 1e-9 * std::max(1.0, std::abs(f) * std::abs(f)));
  }
  CHECK(std::abs(phi_minus(h, Point2(0.7, 1e6)) / 1e6 - 1.0) < 1e-6);
}

TEST_CASE("phi_plus_iterated never roots") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  Point2 q(2.0, 0.3);  // escapes but not yet in V+
  auto it = phi_plus_iterated(h, q);
  CHECK(it.n >= 0);
  // consistency: value equals phi at the pushed-forward point
  Point2 fwd = q;
  for (int i = 0; i < it.n; ++i) fwd = apply_map(h, fwd);
  CHECK(std::abs(it.value - phi_plus(h, fwd)) < 1e-9 * std::abs(it.value));
  CHECK_THROWS_AS(phi_plus_iterated(HenonParams::make(-1.0, 0.05), Point2(0, 0)),
                  NotEscaping);
}

TEST_CASE("eta_index of axis circle and preimage") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  std::vector<Point2> loop;
  const int n = 256;
  for (int i = 0; i <= n; ++i)
    loop.push_back(Point2(4.0 * Angle::rational(i % n, n).unit(), 0.0));
  DyadicIndex eta = eta_index(h, loop);
  CHECK(std::abs(eta.value - 1.0) < 1e-8);
  std::vector<Point2> pre;
  for (const Point2& q : loop) pre.push_back(apply_inverse(h, q));
  DyadicIndex half = eta_index(h, pre);
  CHECK(std::abs(half.value - 0.5) < 1e-8);
  CHECK(half.distance < 1e-6);
}

TEST_CASE("periodic_points fixed points vs quadratic formula") {
  auto h = HenonParams::make(-1.0, 0.05);
  auto recs = periodic_points(h, 1, degenerate_periodic_seeds(h, 1));
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK(r.residual < 1e-11);
    Complex x = r.point(0);
    CHECK(std::abs(r.point(1) - x) < 1e-10);  // fixed points on the diagonal
    CHECK(std::abs(x * x - (1.0 + h.a) * x + h.c) < 1e-10);
    CHECK(std::abs(r.eigen_small * r.eigen_large - h.a) < 1e-9);
  }
}

TEST_CASE("periodic_points genuine 2-cycle") {
  auto h = HenonParams::make(Complex(0, 0.1), 0.05);
  auto recs = periodic_points(h, 2, degenerate_periodic_seeds(h, 2));
  bool found = false;
  for (const auto& r : recs) {
    Point2 img = apply_map(h, apply_map(h, r.point));
    CHECK((img - r.point).norm() < 1e-9);
    if ((apply_map(h, r.point) - r.point).norm() > 1e-3) found = true;
    CHECK(std::abs(r.eigen_small * r.eigen_large - h.a * h.a) <
          1e-9 * std::abs(h.a * h.a));
  }
  CHECK(found);
}
