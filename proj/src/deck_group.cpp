#include "henon/deck_group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "henon/parallel.hpp"

namespace henon {

DeckTransform DeckTransform::make(std::int64_t j, int k) {
  if (k < 0) throw std::invalid_argument("DeckTransform: k < 0");
  while (k > 0 && j % 2 == 0) {
    j /= 2;
    --k;
  }
  j %= (std::int64_t(1) << k);
  if (j < 0) j += (std::int64_t(1) << k);
  if (j == 0) return {1, 0};  // identity, written as 1/2^0
  return {j, k};
}

int GroupConstants::k0(double z_abs) const {
  const double ratio = delta * delta / (2.0 * abs_a);
  if (ratio <= 1.0) throw PreconditionUnmet("k0: delta^2/(2|a|) <= 1");
  const double target = 32.0 * z_abs / (delta * delta * delta);
  int k = 1;
  double pow = 1.0;  // ratio^{k-1}
  while (pow <= target) {
    pow *= ratio;
    ++k;
    if (k > 4096) throw NoConvergence("k0 search exceeded 4096");
  }
  return k;
}

std::pair<Angle, Complex> lift_apply(CocycleEngine& engine, const Angle& theta,
                                     Complex z) {
  const Complex alpha = engine.alpha_std(theta).alpha;
  return {theta.doubled(), alpha * z - alpha};  // beta = -alpha
}

namespace {

// Partial log-sums of alpha along the doubling orbit:
// logs[s] = sum_{t=s}^{k-1} Log alpha(theta * 2^t); magnitudes at small |a|
// span ~|a|^k, so everything stays in log space until ratios are formed.
std::vector<Complex> alpha_log_tails(CocycleEngine& engine, Angle theta, int k) {
  std::vector<Complex> logs(k + 1, Complex(0.0));
  std::vector<Complex> terms(k);
  for (int t = 0; t < k; ++t) {
    terms[t] = std::log(engine.alpha_std(theta).alpha);
    theta = theta.doubled();
  }
  for (int s = k - 1; s >= 0; --s) logs[s] = logs[s + 1] + terms[s];
  return logs;
}

}  // namespace

std::pair<Complex, Complex> pq_closed_form(CocycleEngine& engine,
                                           const DeckTransform& g,
                                           const Angle& xi) {
  if (g.identity()) return {Complex(1.0), Complex(0.0)};
  const int k = g.k;
  const Angle rotated = xi.plus(g.rotation());
  const auto L = alpha_log_tails(engine, xi, k);        // L[s] = Log Pi_s(xi)
  const auto Lw = alpha_log_tails(engine, rotated, k);  // Log Pi_s(omega xi)
  const Complex p = std::exp(L[0] - Lw[0]);
  Complex q = 0.0;
  for (int s = 0; s < k; ++s)
    q += std::exp(Lw[s] - Lw[0]) - std::exp(L[s] - Lw[0]);
  return {p, q};
}

std::pair<Complex, Complex> pq_recursive(CocycleEngine& engine,
                                         const DeckTransform& g,
                                         const Angle& xi) {
  if (g.identity()) return {Complex(1.0), Complex(0.0)};
  const DeckTransform parent =
      DeckTransform::make(g.j % (std::int64_t(1) << (g.k - 1)), g.k - 1);
  const auto [pp, qp] = pq_recursive(engine, parent, xi.doubled());
  const Complex alpha_xi = engine.alpha_std(xi).alpha;
  const Complex alpha_rot = engine.alpha_std(xi.plus(g.rotation())).alpha;
  const Complex p = pp * alpha_xi / alpha_rot;
  // beta = -alpha in the standard trivialization
  const Complex q = (pp * (-alpha_xi) + qp + alpha_rot) / alpha_rot;
  return {p, q};
}

std::pair<Angle, Complex> deck_apply(CocycleEngine& engine,
                                     const DeckTransform& g, const Angle& theta,
                                     Complex z) {
  const auto [p, q] = pq_closed_form(engine, g, theta);
  return {theta.plus(g.rotation()), p * z + q};
}

GroupConstants compute_constants(CocycleEngine& engine, int n_samples) {
  GroupConstants gc{};
  gc.delta = delta_inf_gamma(engine.poly_context(), n_samples);
  gc.abs_a = std::abs(engine.params().a);
  engine.precompute_grid(n_samples);
  std::vector<double> ratio(n_samples), gap(n_samples);
  parallel_for(n_samples, engine.workers(), [&](int i) {
    const Angle t = Angle::rational(i, n_samples);
    const Complex over_a = engine.alpha_std(t).alpha / engine.params().a;
    const Complex over_a_neg =
        engine.alpha_std(t.plus_half()).alpha / engine.params().a;
    ratio[i] = std::abs(over_a);
    gap[i] = std::abs(over_a - over_a_neg);
  });
  gc.sup_alpha_over_a = *std::max_element(ratio.begin(), ratio.end());
  gc.inf_gap_over_a = *std::min_element(gap.begin(), gap.end());
  const double d = gc.delta;
  gc.sup_bound_ok = gc.sup_alpha_over_a < 2.0 / (d * d);
  gc.gap_bound_ok = gc.inf_gap_over_a > d / 8.0;
  gc.delta_prime = gc.sup_bound_ok ? gc.abs_a : 0.0;
  gc.delta_dprime = gc.gap_bound_ok ? gc.abs_a : 0.0;
  const double d3 = d * d * d;
  gc.a0 = std::min({gc.delta_prime, gc.delta_dprime,
                    (d * d / 2.0) * d3 / (d3 + 64.0)});
  return gc;
}

GrowthReport growth_check(CocycleEngine& engine, const GroupConstants& consts,
                          std::int64_t j, int k, const Angle& xi, Complex z,
                          bool enforce) {
  bool ok = (j % 2 != 0) && consts.abs_a < consts.a0;
  if (ok) ok = k >= consts.k0(std::abs(z));
  if (enforce && !ok) throw PreconditionUnmet("growth_check preconditions");
  const auto [p, q] = pq_closed_form(engine, DeckTransform::make(j, k), xi);
  const double d = consts.delta;
  const double lhs = std::abs(p * z + q);
  const double rhs = (d * d * d / 32.0) *
                         std::pow(d * d / (2.0 * consts.abs_a), k - 1) -
                     std::abs(z);
  return {j, k, xi, z, lhs, rhs, lhs - rhs, ok};
}

SeparatingCertificate separating_neighborhood(CocycleEngine& engine,
                                              const GroupConstants& consts,
                                              const Angle& xi0, Complex z0,
                                              int sample_budget, bool enforce) {
  if (enforce && consts.abs_a >= consts.a0)
    throw PreconditionUnmet("separating_neighborhood: |a| >= a0");
  const double d = consts.delta;
  const double u0 = d * d * d / 32.0;
  // Prop-level k0: (delta^2/2|a|)^{k-1} > (64/delta^3)(|z0| + delta^3/32)
  const int k0 = consts.k0(2.0 * (std::abs(z0) + u0));
  const double half_width = std::ldexp(1.0, -k0);  // radians
  const int k_max = k0 + 4;

  SeparatingCertificate cert{xi0, z0, u0, half_width, k0, k_max, 0, true};

  // boundary and interior samples of U0 and V0
  const int n_z = 8, n_xi = 8;
  std::vector<Complex> zs;
  std::vector<Angle> xis;
  for (int i = 0; i < n_z; ++i) {
    const double ang = kTwoPi * i / n_z;
    zs.push_back(z0 + 0.999 * u0 * Complex(std::cos(ang), std::sin(ang)));
  }
  zs.push_back(z0);
  for (int i = 0; i < n_xi; ++i) {
    const double off = 0.999 * half_width * (2.0 * i / (n_xi - 1) - 1.0);
    xis.push_back(xi0.plus(Angle::from_turns(off / kTwoPi)));
  }

  auto circle_dist = [](double t) {  // turns to nearest integer
    t -= std::floor(t);
    return std::min(t, 1.0 - t);
  };

  for (int k = 1; k <= k_max && cert.samples_checked < sample_budget; ++k) {
    const std::int64_t two_k = std::int64_t(1) << k;
    const std::int64_t n_odd = two_k / 2;
    const std::int64_t stride = std::max<std::int64_t>(1, n_odd / 8);
    for (std::int64_t idx = 0; idx < n_odd; idx += stride) {
      const std::int64_t j = 2 * idx + 1;
      const DeckTransform g = DeckTransform::make(j, k);
      if (k < k0) {
        // rotation must clear the angular width of V0
        const double move = kTwoPi * circle_dist(g.rotation().turns());
        ++cert.samples_checked;
        if (move <= 2.0 * half_width)
          throw CertificateFailure("angular overlap at k=" + std::to_string(k) +
                                   " j=" + std::to_string(j));
        continue;
      }
      for (const Angle& xi : xis) {
        for (const Complex z : zs) {
          if (cert.samples_checked >= sample_budget) return cert;
          const auto [p, q] = pq_closed_form(engine, g, xi);
          ++cert.samples_checked;
          if (std::abs(p * z + q - z0) <= u0)
            throw CertificateFailure(
                "z-overlap at k=" + std::to_string(k) + " j=" + std::to_string(j));
        }
      }
    }
  }
  return cert;
}

std::optional<OrbitWitness> orbit_equivalent(CocycleEngine& engine,
                                             const Angle& theta1, Complex z1,
                                             const Angle& theta2, Complex z2,
                                             int k_max, double tol) {
  for (int k = 0; k <= k_max; ++k) {
    const std::int64_t two_k = std::int64_t(1) << k;
    for (std::int64_t m = 1; m <= two_k; m += 2) {
      const DeckTransform g = DeckTransform::make(m, k);
      if (k > 0 && g.identity()) continue;
      Angle rotated;
      Complex image;
      try {
        std::tie(rotated, image) = deck_apply(engine, g, theta2, z2);
      } catch (const Error&) {
        continue;
      }
      if (std::abs(image - z1) >= tol) continue;
      if (!landing_identified(engine.poly_context(), theta1, rotated)) continue;
      return OrbitWitness{m, k, rotated, image};
    }
  }
  return std::nullopt;
}

}  // namespace henon
