#ifndef HENON_TYPES_HPP
#define HENON_TYPES_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

namespace henon {

using Complex = std::complex<double>;
using Point2 = Eigen::Vector2cd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle on the circle in turns, kept as an exact rational num/den in [0,1)
/// whenever possible so that doubling and dyadic shifts do not drift.
class Angle {
public:
  Angle() : num_(0), den_(1) {}

  static Angle rational(std::int64_t num, std::int64_t den);
  static Angle dyadic(std::int64_t j, int k);  // j / 2^k
  static Angle from_turns(double t);

  double turns() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Complex unit() const {
    const double t = turns();
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
  }

  Angle doubled() const { return rational_wide(2 * static_cast<__int128>(num_), den_); }
  Angle plus(const Angle& other) const;
  Angle plus_half() const { return plus(dyadic(1, 1)); }
  Angle negated() const { return num_ == 0 ? Angle() : rational(den_ - num_, den_); }

  bool operator==(const Angle& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator<(const Angle& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
  }

  /// Smallest k >= 1 with 2^k * theta == theta (mod 1), if one exists below max_k.
  std::optional<int> period_under_doubling(int max_k = 64) const;

private:
  static Angle rational_wide(__int128 num, __int128 den);
  std::int64_t num_, den_;  // reduced, den >= 1, 0 <= num < den
};

struct AngleKey {
  std::int64_t num, den;
  bool operator<(const AngleKey& o) const {
    return num != o.num ? num < o.num : den < o.den;
  }
};

inline AngleKey key_of(const Angle& a) { return {a.num(), a.den()}; }

}  // namespace henon

#endif
