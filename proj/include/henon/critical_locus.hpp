#ifndef HENON_CRITICAL_LOCUS_HPP
#define HENON_CRITICAL_LOCUS_HPP

#include <optional>
#include <vector>

#include "henon/henon_map.hpp"

namespace henon {

struct LeafLabel {
  Angle theta;
  double radius;  // >= 1; radius 1 denotes a boundary leaf in J+
};

struct TangencyPoint {
  LeafLabel label;
  Point2 q;
  double residual_leaf;
  double residual_tangency;
  int iterations;
  bool converged = true;
};

struct AffineRatioResult {
  Complex value;
  int iterations;
  double last_correction;
};

/// Tangent direction of the U+ foliation leaf through q (unit vector,
/// first nonzero component rotated positive-real).
Eigen::Vector2cd leaf_tangent_plus(const HenonParams& h, const Point2& q, int N);
Eigen::Vector2cd leaf_tangent_minus(const HenonParams& h, const Point2& q, int M);

/// Scale-free tangency residual |det| / (|L+| |L-|) of the two foliation
/// covectors at q; zero exactly at a tangency.
double tangency_residual(const HenonParams& h, const Point2& q, int N, int M);

/// Holomorphic tangency function m+(q) - m-(q) (difference of covector
/// slopes); shares zeros with the determinant wherever L+_x, L-_x != 0.
Complex tangency_function(const HenonParams& h, const Point2& q, int N, int M);

struct ContinuationSettings {
  double a_ceiling = 0.3;
  int a_steps = 6;
  int newton_max_iter = 40;
  double newton_tol = 1e-13;
  double trap_radius = 0.2;  // primary-component trap around gamma(xi)
};

TangencyPoint solve_c0(const HenonParams& h, const LeafLabel& label,
                       std::optional<Point2> seed = std::nullopt,
                       const ContinuationSettings& cs = {},
                       std::optional<Complex> gamma_hint = std::nullopt);

struct CircleSchedule {
  double eps0 = 1e-1;
  int steps = 40;
  double cauchy_tol = 1e-7;
};

TangencyPoint c0_on_circle(const HenonParams& h, const Angle& theta,
                           const CircleSchedule& sched = {},
                           const ContinuationSettings& cs = {});

AffineRatioResult affine_ratio(const HenonParams& h, const Point2& A,
                               const Point2& B, const Point2& C,
                               int max_steps = 80, double tol = 1e-10);

/// Standard-trivialization leaf coordinate: z(c0) = 0, z(c-1) = 1.
Complex leaf_coordinate(const HenonParams& h, const Point2& q, const Point2& c0,
                        const Point2& cm1);

/// Same-leaf diagnostic: |H^n A - H^n B| decays geometrically (ratio <= 0.9
/// for 10 consecutive steps).
bool converge_together(const HenonParams& h, Point2 A, Point2 B,
                       int max_steps = 40);

}  // namespace henon

#endif
