#ifndef HENON_DECK_GROUP_HPP
#define HENON_DECK_GROUP_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "henon/cocycle.hpp"

namespace henon {

/// Dyadic rotation j/2^k acting on S^1 x C as
/// (xi, z) -> (omega xi, p_{j,k}(xi) z + q_{j,k}(xi)), omega = e^{2 pi i j/2^k}.
struct DeckTransform {
  std::int64_t j;
  int k;

  static DeckTransform make(std::int64_t j, int k);  // reduces to odd j or id

  bool identity() const { return k == 0; }
  Angle rotation() const { return Angle::dyadic(j, k); }
  Complex omega() const { return rotation().unit(); }
};

struct GroupConstants {
  double delta;         // inf |gamma| on the circle
  double abs_a;         // Jacobian modulus the empirical bounds were checked at
  double sup_alpha_over_a;   // measured sup |alpha/a| on the grid
  double inf_gap_over_a;     // measured inf |alpha(xi)/a - alpha(-xi)/a|
  bool sup_bound_ok;       // sup < 2/delta^2
  bool gap_bound_ok;       // inf > delta/8
  double delta_prime;   // |a| if the sup bound holds at this a, else 0
  double delta_dprime;  // |a| if the gap bound holds at this a, else 0
  double a0;            // min(delta', delta'', (delta^2/2) delta^3/(delta^3+64))

  /// Smallest k >= 1 with (delta^2/(2|a|))^{k-1} > 32 |z| / delta^3.
  int k0(double z_abs) const;
};

struct GrowthReport {
  std::int64_t j;
  int k;
  Angle xi;
  Complex z;
  double lhs;     // |p z + q|
  double rhs;     // (delta^3/32)(delta^2/(2|a|))^{k-1} - |z|
  double margin;  // lhs - rhs
  bool preconditions_met;
};

struct SeparatingCertificate {
  Angle xi0;
  Complex z0;
  double u0_radius;       // delta^3/32
  double v0_half_width;   // radians, 1/2^{k0}
  int k0;
  int k_max;
  int samples_checked;
  bool pass;
};

struct OrbitWitness {
  std::int64_t m;
  int k;
  Angle rotated;   // theta2 + m/2^k
  Complex z_image; // second coordinate of the deck image
};

/// Lift of the Henon map: (xi, z) -> (xi^2, alpha(xi) z + beta(xi)).
std::pair<Angle, Complex> lift_apply(CocycleEngine& engine, const Angle& theta,
                                     Complex z);

std::pair<Complex, Complex> pq_closed_form(CocycleEngine& engine,
                                           const DeckTransform& g,
                                           const Angle& xi);

std::pair<Complex, Complex> pq_recursive(CocycleEngine& engine,
                                         const DeckTransform& g,
                                         const Angle& xi);

std::pair<Angle, Complex> deck_apply(CocycleEngine& engine,
                                     const DeckTransform& g, const Angle& theta,
                                     Complex z);

GroupConstants compute_constants(CocycleEngine& engine, int n_samples);

/// Prop-style growth bound check. With enforce=true the stated preconditions
/// (j odd, |a| < a0, k >= k0(|z|)) raise PreconditionUnmet; with enforce=false
/// the report is produced anyway and preconditions_met records the status.
GrowthReport growth_check(CocycleEngine& engine, const GroupConstants& consts,
                          std::int64_t j, int k, const Angle& xi, Complex z,
                          bool enforce = true);

SeparatingCertificate separating_neighborhood(CocycleEngine& engine,
                                              const GroupConstants& consts,
                                              const Angle& xi0, Complex z0,
                                              int sample_budget,
                                              bool enforce = true);

std::optional<OrbitWitness> orbit_equivalent(CocycleEngine& engine,
                                             const Angle& theta1, Complex z1,
                                             const Angle& theta2, Complex z2,
                                             int k_max = 8, double tol = 1e-6);

}  // namespace henon

#endif
