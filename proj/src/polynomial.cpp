#include "henon/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace henon {

std::optional<int> escape_time(const BoettcherContext& ctx, Complex z) {
  for (int n = 0; n <= ctx.max_iter; ++n) {
    if (std::abs(z) > ctx.escape_radius) return n;
    z = ctx.poly(z);
  }
  return std::nullopt;
}

Complex log_boettcher_phi(const BoettcherContext& ctx, Complex z) {
  if (!escape_time(ctx, z)) throw NonEscaping();
  const Complex c = ctx.poly.c;
  if (std::abs(z) <= ctx.escape_radius) {
    // Pre-escape factors may wrap around the branch cut; restart one step up
    // and take the square root nearest the asymptotic reference.
    const Complex f = 1.0 + c / (z * z);
    if (f.real() <= 0.0 || std::abs(f) < 0.05) {
      const Complex up = std::exp(0.5 * log_boettcher_phi(ctx, ctx.poly(z)));
      const Complex root = (std::abs(up - z) <= std::abs(-up - z)) ? up : -up;
      return std::log(root);
    }
  }
  Complex acc = std::log(z);
  double scale = 0.5;
  for (int n = 0; n < ctx.max_iter; ++n) {
    if (std::abs(z) > ctx.big_radius) break;
    const Complex f = 1.0 + c / (z * z);
    if (f.real() <= 0.0 || std::abs(f) < 0.05) throw BranchFailure();
    acc += scale * std::log(f);
    scale *= 0.5;
    z = ctx.poly(z);
  }
  return acc;
}

Complex boettcher_phi(const BoettcherContext& ctx, Complex z) {
  return std::exp(log_boettcher_phi(ctx, z));
}

namespace {

// Pull an external ray point back from a huge radius down the tower of
// repeated square roots, steering each branch choice by a reference chain.
Complex pull_back_tower(const BoettcherContext& ctx, Complex w,
                        const RayTower* ref, RayTower* out) {
  const Complex c = ctx.poly.c;
  std::vector<Complex> pow{w};
  while (std::abs(pow.back()) <= ctx.big_radius) {
    if (static_cast<int>(pow.size()) > ctx.max_iter || !std::isfinite(std::abs(pow.back())))
      throw PrecisionLoss();
    const Complex t = pow.back();
    pow.push_back(t * t);
  }
  const int levels = static_cast<int>(pow.size());
  std::vector<Complex> z(levels);
  z[levels - 1] = pow[levels - 1] - c / (2.0 * pow[levels - 1]);
  for (int k = levels - 2; k >= 0; --k) {
    const Complex s = std::sqrt(z[k + 1] - c);
    Complex guide = pow[k];
    if (ref && k < static_cast<int>(ref->z.size())) guide = ref->z[k];
    z[k] = (std::abs(s - guide) <= std::abs(-s - guide)) ? s : -s;
  }
  if (out) out->z = std::move(z);
  return out ? out->z[0] : z[0];
}

}  // namespace

Complex boettcher_inverse(const BoettcherContext& ctx, Complex w,
                          const RayTower* ref, RayTower* out) {
  if (std::abs(w) <= 1.0) throw PrecisionLoss("boettcher_inverse: |w| <= 1");
  RayTower local;
  if (!out) out = &local;
  if (ref || std::abs(w) >= 1.3) return pull_back_tower(ctx, w, ref, out);
  // No reference and close to the circle: walk the ray inward so that each
  // branch choice is guided by the previous radius step.
  const double rho = std::abs(w);
  const Complex dir = w / rho;
  const int steps = 24;
  RayTower chain;
  Complex value{};
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const double r = std::exp((1.0 - t) * std::log(1.5) + t * std::log(rho));
    RayTower next;
    value = pull_back_tower(ctx, r * dir, i == 0 ? nullptr : &chain, &next);
    chain = std::move(next);
  }
  *out = std::move(chain);
  return value;
}

Complex boettcher_inverse(const BoettcherContext& ctx, Complex w) {
  return boettcher_inverse(ctx, w, nullptr, nullptr);
}

// iterated Aitken delta-squared: each pass removes one (near-)geometric error
// mode, which matters when the ray lands at a repelling point with multiplier
// close to 1
Complex aitken_limit(std::vector<Complex> s, double& gap) {
  gap = std::numeric_limits<double>::infinity();
  Complex best = s.empty() ? Complex(0.0) : s.back();
  while (s.size() >= 3) {
    std::vector<Complex> next;
    next.reserve(s.size() - 2);
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
      const Complex d1 = s[i + 2] - s[i + 1];
      const Complex d2 = s[i + 2] - 2.0 * s[i + 1] + s[i];
      next.push_back(std::abs(d2) > 1e-300 ? s[i + 2] - d1 * d1 / d2 : s[i + 2]);
    }
    const double g = std::abs(next.back() - best);
    if (g >= gap) break;  // numerical noise floor reached
    gap = g;
    best = next.back();
    s = std::move(next);
  }
  return best;
}

namespace {

// landing estimate by letting the ray radius shrink to 1
LoopValue radius_limit_loop(const BoettcherContext& ctx, const Angle& theta) {
  const Complex dir = theta.unit();
  RayTower chain;
  bool have_chain = false;
  std::vector<Complex> raw;
  for (int m = 0; m < ctx.caratheodory_steps; ++m) {
    const double r = 1.0 + ctx.eps0 * std::ldexp(1.0, -m);
    if (r == 1.0) break;  // radius offset fell below machine precision
    RayTower next;
    const Complex v =
        pull_back_tower(ctx, r * dir, have_chain ? &chain : nullptr, &next);
    chain = std::move(next);
    have_chain = true;
    raw.push_back(v);
  }
  double gap = std::numeric_limits<double>::infinity();
  const Complex best = aitken_limit(raw, gap);
  return {best, gap < 1e-7, gap, static_cast<int>(raw.size())};
}

}  // namespace

LoopValue caratheodory(const BoettcherContext& ctx, const Angle& theta) {
  // The radius limit alone stalls when the ray lands at a repelling point
  // with multiplier close to the unit circle: each radius halving buys one
  // contraction step and the radius hits machine epsilon near step 47.
  // Refine by inverse iteration along the angle-doubling orbit: coarse
  // estimates steer the square-root branches and hyperbolic contraction
  // shrinks the top error by |(p^N)'|.
  const int depth = std::max(96, ctx.caratheodory_steps);
  std::vector<Angle> orbit;
  orbit.reserve(depth + 1);
  {
    Angle t = theta;
    for (int k = 0; k <= depth; ++k) {
      orbit.push_back(t);
      t = t.doubled();
    }
  }
  std::map<AngleKey, Complex> coarse_cache;
  auto coarse = [&](const Angle& a) {
    const AngleKey key = key_of(a);
    auto it = coarse_cache.find(key);
    if (it != coarse_cache.end()) return it->second;
    const Complex v = radius_limit_loop(ctx, a).value;
    coarse_cache.emplace(key, v);
    return v;
  };
  const Complex c = ctx.poly.c;
  auto sweep = [&](int top) {
    Complex z = coarse(orbit[top]);
    for (int k = top - 1; k >= 0; --k) {
      const Complex s = std::sqrt(z - c);
      const Complex guide = coarse(orbit[k]);
      z = (std::abs(s - guide) <= std::abs(-s - guide)) ? s : -s;
    }
    return z;
  };
  const Complex z_full = sweep(depth);
  const Complex z_short = sweep(depth - 16);
  const double gap = std::abs(z_full - z_short);
  return {z_full, gap < 1e-7, gap, depth};
}

double delta_inf_gamma(const BoettcherContext& ctx, int n_samples) {
  auto modulus = [&](double turns) {
    return std::abs(caratheodory(ctx, Angle::from_turns(turns)).value);
  };
  std::vector<double> vals(n_samples);
  int imin = 0;
  for (int i = 0; i < n_samples; ++i) {
    vals[i] = modulus(static_cast<double>(i) / n_samples);
    if (vals[i] < vals[imin]) imin = i;
  }
  // collect the three smallest samples and refine around each
  std::vector<int> idx(n_samples);
  for (int i = 0; i < n_samples; ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + std::min(3, n_samples), idx.end(),
                    [&](int a, int b) { return vals[a] < vals[b]; });
  double result = vals[imin];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int t = 0; t < std::min(3, n_samples); ++t) {
    const int i = idx[t];
    double lo = (i - 1.0) / n_samples, hi = (i + 1.0) / n_samples;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = modulus(x1), f2 = modulus(x2);
    for (int it = 0; it < 40 && (hi - lo) > 1e-10; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = modulus(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = modulus(x2);
      }
      result = std::min(result, std::min(f1, f2));
    }
  }
  return result;
}

bool landing_identified(const BoettcherContext& ctx, const Angle& t1,
                        const Angle& t2, double tol) {
  if (t1 == t2) return true;
  return std::abs(caratheodory(ctx, t1).value - caratheodory(ctx, t2).value) < tol;
}

}  // namespace henon
