#ifndef HENON_HENON_MAP_HPP
#define HENON_HENON_MAP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "henon/errors.hpp"
#include "henon/polynomial.hpp"
#include "henon/types.hpp"

namespace henon {

/// H(x, y) = (x^2 + c - a y, x); constant Jacobian a.
struct HenonParams {
  Complex c;
  Complex a;
  double R;              // filtration radius
  double big_radius = 1e8;
  int max_iter = 4096;
  double tol = 1e-12;

  static HenonParams make(Complex c, Complex a) {
    HenonParams h;
    h.c = c;
    h.a = a;
    const double s = 1.0 + std::abs(a);
    h.R = std::max(3.0, (s + std::sqrt(s * s + 4.0 * std::abs(c))) / 2.0 + 0.5);
    return h;
  }

  BoettcherContext boettcher() const { return BoettcherContext::make(c); }
};

enum class FiltrationRegion { V, Vplus, Vminus };

struct PeriodicPointRecord {
  Point2 point;
  int period;
  Complex eigen_small;
  Complex eigen_large;
  double residual;
};

struct DyadicIndex {
  double value;
  std::int64_t nearest_num;
  int nearest_k;
  double distance;
};

inline Point2 apply_map(const HenonParams& h, const Point2& q) {
  return Point2(q(0) * q(0) + h.c - h.a * q(1), q(0));
}

inline Point2 apply_inverse(const HenonParams& h, const Point2& q) {
  if (h.a == 0.0) throw ZeroJacobian();
  return Point2(q(1), (q(1) * q(1) + h.c - q(0)) / h.a);
}

inline Matrix2 derivative(const HenonParams& h, const Point2& q) {
  Matrix2 m;
  m << 2.0 * q(0), -h.a, 1.0, 0.0;
  return m;
}

inline Matrix2 inverse_derivative(const HenonParams& h, const Point2& q) {
  if (h.a == 0.0) throw ZeroJacobian();
  Matrix2 m;
  m << 0.0, 1.0, -1.0 / h.a, 2.0 * q(1) / h.a;
  return m;
}

Matrix2 orbit_derivative(const HenonParams& h, Point2 q, int k);
Matrix2 backward_orbit_derivative(const HenonParams& h, Point2 q, int k);

FiltrationRegion classify(const HenonParams& h, const Point2& q);

std::optional<std::pair<int, Point2>> first_entry_forward(const HenonParams& h,
                                                          Point2 q, int max_iter);
std::optional<std::pair<int, Point2>> first_entry_backward(const HenonParams& h,
                                                           Point2 q, int max_iter);

/// phi+ on V+ by the telescoping product along the forward orbit.
Complex log_phi_plus(const HenonParams& h, Point2 q);
Complex phi_plus(const HenonParams& h, const Point2& q);

struct IteratedPhi {
  int n;          // iterations applied before phi was evaluated
  Complex value;  // phi at H^n(q) -- never the 2^n-th root
};
IteratedPhi phi_plus_iterated(const HenonParams& h, Point2 q);

/// phi- on V- by the telescoping product along the backward orbit.
Complex log_phi_minus(const HenonParams& h, Point2 q);
Complex phi_minus(const HenonParams& h, const Point2& q);

/// Holomorphic gradients (d/dx, d/dy) of log phi+- as row covectors,
/// by central finite differences of log ratios.
Eigen::RowVector2cd grad_log_phi_plus(const HenonParams& h, const Point2& q);
Eigen::RowVector2cd grad_log_phi_minus(const HenonParams& h, const Point2& q);

DyadicIndex eta_index(const HenonParams& h, const std::vector<Point2>& loop,
                      int max_iter = 256);

/// Eigenvalues of a 2x2 complex matrix via the characteristic polynomial,
/// ordered by modulus (small first).
std::pair<Complex, Complex> eigenvalues2(const Matrix2& m);

std::vector<PeriodicPointRecord> periodic_points(const HenonParams& h, int k,
                                                 const std::vector<Point2>& seeds);

/// Period-k orbit seeds built from the degenerate a=0 map: pairs (x_i, x_{i-1})
/// along period-k cycles of p.
std::vector<Point2> degenerate_periodic_seeds(const HenonParams& h, int k);

}  // namespace henon

#endif
