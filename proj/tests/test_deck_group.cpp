#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "henon/deck_group.hpp"

using namespace henon;

namespace {

CocycleEngine& engine() {
  static CocycleEngine e(HenonParams::make(Complex(0, 0.1), 0.05));
  return e;
}

}  // namespace

TEST_CASE("DeckTransform reduction") {
  DeckTransform g = DeckTransform::make(4, 3);  // 4/8 -> 1/2
  CHECK(g.j == 1);
  CHECK(g.k == 1);
  DeckTransform id = DeckTransform::make(8, 3);  // 8/8 -> identity
  CHECK(id.identity());
  DeckTransform odd = DeckTransform::make(3, 4);
  CHECK(odd.j == 3);
  CHECK(odd.k == 4);
  // omega is a 2^k-th root of unity
  CHECK(std::abs(std::pow(odd.omega(), 16) - 1.0) < 1e-12);
}

TEST_CASE("identity element gives p=1 q=0") {
  const Angle xi = Angle::rational(3, 16);
  DeckTransform id = DeckTransform::make(2, 1);
  auto [p, q] = pq_closed_form(engine(), id, xi);
  CHECK(std::abs(p - 1.0) < 1e-14);
  CHECK(std::abs(q) < 1e-14);
  auto [pr, qr] = pq_recursive(engine(), id, xi);
  CHECK(std::abs(pr - 1.0) < 1e-14);
  CHECK(std::abs(qr) < 1e-14);
}

TEST_CASE("k=1 reduction of the closed form") {
  const Angle xi = Angle::rational(1, 16);
  DeckTransform g = DeckTransform::make(1, 1);
  auto [p, q] = pq_closed_form(engine(), g, xi);
  Complex a1 = engine().alpha_std(xi).alpha;
  Complex a2 = engine().alpha_std(xi.plus_half()).alpha;
  CHECK(std::abs(p - a1 / a2) < 1e-10 * std::abs(p));
  CHECK(std::abs(q - (a2 - a1) / a2) < 1e-10 * std::max(1.0, std::abs(q)));
}

TEST_CASE("closed form matches recursion") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    const Angle xi = Angle::rational(1 + 2 * int(rng() % 30), 64);
    for (int k = 1; k <= 3; ++k) {
      const std::int64_t j = 1 + 2 * std::int64_t(rng() % (1u << (k - 1)));
      DeckTransform g = DeckTransform::make(j, k);
      auto [pc, qc] = pq_closed_form(engine(), g, xi);
      auto [pr, qr] = pq_recursive(engine(), g, xi);
      CHECK(std::abs(pc - pr) < 1e-10 * std::abs(pc));
      CHECK(std::abs(qc - qr) < 1e-10 * std::max(std::abs(qc), 1.0));
    }
  }
}

TEST_CASE("intertwining with the lift") {
  // H-tilde o gamma_{j/2^{k+1}} = gamma_{j/2^k} o H-tilde
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Angle xi = Angle::rational(5, 64);
  for (int k = 1; k <= 3; ++k) {
    DeckTransform fine = DeckTransform::make(1, k + 1);
    DeckTransform coarse = DeckTransform::make(1, k);
    Complex z(u(rng), u(rng));
    auto moved = deck_apply(engine(), fine, xi, z);
    auto lhs = lift_apply(engine(), moved.first, moved.second);
    auto fwd = lift_apply(engine(), xi, z);
    auto rhs = deck_apply(engine(), coarse, fwd.first, fwd.second);
    CHECK(lhs.first == rhs.first);
    const double scale = std::max({std::abs(lhs.second), std::abs(rhs.second), 1.0});
    CHECK(std::abs(lhs.second - rhs.second) / scale < 1e-8);
  }
}

TEST_CASE("composition: quarter rotation twice is the half rotation") {
  const Angle xi = Angle::rational(3, 32);
  const Complex z(0.2, -0.4);
  DeckTransform quarter = DeckTransform::make(1, 2);
  DeckTransform half = DeckTransform::make(1, 1);
  auto once = deck_apply(engine(), quarter, xi, z);
  auto twice = deck_apply(engine(), quarter, once.first, once.second);
  auto direct = deck_apply(engine(), half, xi, z);
  CHECK(twice.first == direct.first);
  CHECK(std::abs(twice.second - direct.second) <
        1e-8 * std::max(1.0, std::abs(direct.second)));
}

TEST_CASE("deck images stay on the same leaf") {
  const Angle xi = Angle::rational(1, 8);
  DeckTransform g = DeckTransform::make(1, 1);
  auto img = deck_apply(engine(), g, xi, Complex(0.0));
  // z=0 marks c0(xi); its image lies on the same leaf as c0(omega xi)
  CHECK(img.first == xi.plus_half());
}

TEST_CASE("group constants formula algebra") {
  GroupConstants c{};
  c.delta = 1.0;
  c.abs_a = 1e-3;
  c.a0 = std::min({0.5, 0.5, (1.0 / 2.0) * 1.0 / (1.0 + 64.0)});
  CHECK(std::abs(c.a0 - 1.0 / 130.0) < 1e-15);
  // k0 definition: smallest k >= 1 with (delta^2/(2|a|))^{k-1} > 32 |z|/delta^3
  const double ratio = c.delta * c.delta / (2.0 * c.abs_a);  // 500
  int k0 = c.k0(0.3);
  CHECK(k0 >= 1);
  CHECK(std::pow(ratio, k0 - 1) > 32.0 * 0.3);
  if (k0 > 1) CHECK(std::pow(ratio, k0 - 2) <= 32.0 * 0.3);
}

TEST_CASE("growth precondition enforcement") {
  CocycleEngine e(HenonParams::make(-1.0, 1e-3));
  GroupConstants c{};
  c.delta = 0.4;
  c.abs_a = 1e-3;
  c.a0 = 1e-2;
  // even j must be reduced by the caller
  CHECK_THROWS_AS(growth_check(e, c, 2, 3, Angle::rational(1, 8), 0.3, true),
                  PreconditionUnmet);
  // k below k0 rejected
  CHECK_THROWS_AS(growth_check(e, c, 1, 0, Angle::rational(1, 8), 0.3, true),
                  PreconditionUnmet);
}
