#ifndef HENON_POLYNOMIAL_HPP
#define HENON_POLYNOMIAL_HPP

#include <optional>
#include <vector>

#include "henon/errors.hpp"
#include "henon/types.hpp"

namespace henon {

struct QuadraticPoly {
  Complex c;
  Complex operator()(Complex z) const { return z * z + c; }
  Complex derivative(Complex z) const { return 2.0 * z; }
};

/// Settings for the Boettcher isomorphism of p(z) = z^2 + c and its inverse.
struct BoettcherContext {
  QuadraticPoly poly;
  double escape_radius;
  double big_radius = 1e8;
  int max_iter = 4096;
  double tol = 1e-12;
  double eps0 = 1e-2;          // initial radius offset of the Caratheodory schedule
  int caratheodory_steps = 40;

  static BoettcherContext make(Complex c) {
    BoettcherContext ctx;
    ctx.poly = QuadraticPoly{c};
    ctx.escape_radius = std::max(2.0, std::abs(c)) + 1.0;
    return ctx;
  }
};

/// Chain of approximations gamma(w^{2^k}), k = 0..N, used for branch tracking
/// when pulling external rays back toward the Julia set.
struct RayTower {
  std::vector<Complex> z;  // z[k] ~ gamma(w^{2^k})
};

struct LoopValue {
  Complex value;
  bool converged;
  double last_gap;
  int steps;
};

/// Iterated Aitken delta-squared extrapolation; `gap` reports the last
/// stable correction before the table hits its noise floor.
Complex aitken_limit(std::vector<Complex> s, double& gap);

std::optional<int> escape_time(const BoettcherContext& ctx, Complex z);

Complex boettcher_phi(const BoettcherContext& ctx, Complex z);
Complex log_boettcher_phi(const BoettcherContext& ctx, Complex z);

Complex boettcher_inverse(const BoettcherContext& ctx, Complex w);
Complex boettcher_inverse(const BoettcherContext& ctx, Complex w,
                          const RayTower* ref, RayTower* out);

LoopValue caratheodory(const BoettcherContext& ctx, const Angle& theta);

double delta_inf_gamma(const BoettcherContext& ctx, int n_samples);

bool landing_identified(const BoettcherContext& ctx, const Angle& t1,
                        const Angle& t2, double tol = 1e-6);

}  // namespace henon

#endif
