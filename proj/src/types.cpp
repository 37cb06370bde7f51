#include "henon/types.hpp"

#include <cmath>
#include <numeric>

namespace henon {

namespace {
__int128 gcd128(__int128 a, __int128 b) {
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}
}  // namespace

Angle Angle::rational_wide(__int128 num, __int128 den) {
  if (den <= 0) throw std::invalid_argument("Angle: nonpositive denominator");
  num %= den;
  if (num < 0) num += den;
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (den > INT64_MAX) throw std::overflow_error("Angle: denominator overflow");
  Angle a;
  a.num_ = static_cast<std::int64_t>(num);
  a.den_ = static_cast<std::int64_t>(den);
  return a;
}

Angle Angle::rational(std::int64_t num, std::int64_t den) {
  return rational_wide(num, den);
}

Angle Angle::dyadic(std::int64_t j, int k) {
  if (k < 0 || k > 62) throw std::invalid_argument("Angle: dyadic level out of range");
  return rational_wide(j, static_cast<__int128>(1) << k);
}

Angle Angle::from_turns(double t) {
  t -= std::floor(t);
  // every finite double in [0,1) is a dyadic rational; 2^60 keeps int64 headroom
  const double scaled = std::ldexp(t, 60);
  return dyadic(static_cast<std::int64_t>(std::llround(scaled)), 60);
}

Angle Angle::plus(const Angle& other) const {
  const __int128 den = static_cast<__int128>(den_) / gcd128(den_, other.den_) * other.den_;
  const __int128 num =
      static_cast<__int128>(num_) * (den / den_) + static_cast<__int128>(other.num_) * (den / other.den_);
  return rational_wide(num, den);
}

std::optional<int> Angle::period_under_doubling(int max_k) const {
  Angle a = doubled();
  for (int k = 1; k <= max_k; ++k) {
    if (a == *this) return k;
    a = a.doubled();
  }
  return std::nullopt;
}

}  // namespace henon
