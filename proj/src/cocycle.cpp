#include "henon/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "henon/parallel.hpp"

namespace henon {

CocycleEngine::CocycleEngine(const HenonParams& h, CocycleSettings s)
    : h_(h), settings_(s), poly_ctx_(h.boettcher()) {
  if (settings_.parabolic) {
    poly_ctx_.caratheodory_steps *= 16;
    poly_ctx_.max_iter *= 16;
  }
}

int CocycleEngine::workers() const {
  return settings_.workers > 0 ? settings_.workers : default_workers();
}

const TangencyPoint& CocycleEngine::c0(const Angle& theta) {
  const AngleKey key = key_of(theta);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = c0_cache_.find(key);
    if (it != c0_cache_.end()) return it->second;
  }
  TangencyPoint tp =
      c0_on_circle(h_, theta, settings_.schedule, settings_.continuation);
  std::lock_guard<std::mutex> lock(mu_);
  return c0_cache_.emplace(key, std::move(tp)).first->second;
}

Complex CocycleEngine::gamma_circle(const Angle& theta) {
  const AngleKey key = key_of(theta);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = gamma_cache_.find(key);
    if (it != gamma_cache_.end()) return it->second.value;
  }
  LoopValue v = caratheodory(poly_ctx_, theta);
  std::lock_guard<std::mutex> lock(mu_);
  return gamma_cache_.emplace(key, v).first->second.value;
}

bool CocycleEngine::gamma_converged(const Angle& theta) {
  gamma_circle(theta);
  std::lock_guard<std::mutex> lock(mu_);
  return gamma_cache_.at(key_of(theta)).converged;
}

CocycleSample CocycleEngine::alpha_std(const Angle& theta) {
  const AngleKey key = key_of(theta);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = alpha_cache_.find(key);
    if (it != alpha_cache_.end()) return it->second;
  }
  // Evaluate alpha on interior leaves (radius r > 1, where the tangency
  // solves converge to machine precision) and extrapolate the scalar
  // sequence to the boundary with the iterated Aitken table.  Extrapolating
  // the tangency points first and forming alpha from them loses several
  // digits: alpha is far more sensitive to the points than to the radius.
  const Angle t2 = theta.doubled();
  const Angle t4 = t2.doubled();
  const CircleSchedule& sched = settings_.schedule;
  struct Chain {
    std::optional<Point2> seed;
  } ch0, ch2, ch4;
  auto solve_leaf = [&](const Angle& t, double r, Chain& ch) {
    // no gamma hint: the component trap compares against the true Boettcher
    // coordinate of each leaf, not the drifting previous level
    const TangencyPoint tp =
        solve_c0(h_, {t, r}, ch.seed, settings_.continuation);
    ch.seed = tp.q;
    return tp.q;
  };
  std::vector<Complex> seq;
  AffineRatioResult diag{};
  for (int m = 0; m < sched.steps; ++m) {
    const double r = 1.0 + sched.eps0 * std::ldexp(1.0, -m);
    if (r == 1.0) break;
    try {
      const Point2 q0 = solve_leaf(theta, r, ch0);
      const Point2 q2 = solve_leaf(t2, r * r, ch2);
      const Point2 q4 = solve_leaf(t4, r * r * r * r, ch4);
      diag = affine_ratio(h_, apply_map(h_, q0), q2, apply_inverse(h_, q4));
    } catch (const Error&) {
      // solver noise floor reached; extrapolate from the levels we have
      if (seq.size() >= 8) break;
      throw;
    }
    // near the boundary the seeded solver can hop to a neighboring sheet of
    // the critical locus; the hop shows up as a huge outlier against the
    // Cauchy tail, so truncate the sequence there
    const std::size_t n = seq.size();
    if (n >= 4) {
      const double d0 = std::abs(seq[n - 1] - seq[n - 2]);
      const double d1 = std::abs(diag.value - seq[n - 1]);
      if (d1 > 100.0 * d0 + 1e-14) break;
    }
    seq.push_back(diag.value);
  }
  if (seq.empty()) throw NoConvergence("alpha_std: empty radius schedule");
  // No early exit: the Aitken table passes through noisy plateaus before the
  // deep tail locks in, so judge convergence only on the full sequence.
  double g = 0.0;
  const Complex value = aitken_limit(seq, g);
  // also require the last per-leaf affine ratio to have converged: a wrong
  // triple yields a self-consistent but meaningless sequence
  const bool ratio_ok =
      diag.last_correction < 1e-2 * std::abs(diag.value) + 1e-12;
  const bool converged = ratio_ok && g < 1e-3 * std::abs(value) + 1e-14;
  diag.value = value;
  diag.last_correction = g;
  CocycleSample s{theta, value, -value, Trivialization::Standard, diag,
                  converged};
  std::lock_guard<std::mutex> lock(mu_);
  return alpha_cache_.emplace(key, s).first->second;
}

CocycleSample CocycleEngine::alpha_gauge(const Angle& theta,
                                         const GaugeFunction& g) {
  const Complex u1 = g.u(theta);
  const Complex u2 = g.u(theta.doubled());
  if (std::abs(u1) < 1e-300 || std::abs(u2) < 1e-300) throw ZeroGauge();
  CocycleSample s = alpha_std(theta);
  const Complex base = s.alpha;
  s.alpha = base * u2 / u1;
  s.beta = -u2 * base;  // v = 0 convention
  s.trivialization = Trivialization::CustomGauge;
  return s;
}

CocycleSample CocycleEngine::alpha_normalized(const Angle& theta) {
  GaugeFunction g{[this](const Angle& t) {
    const Complex gm = gamma_circle(t);
    return gm * gm;
  }};
  CocycleSample s = alpha_gauge(theta, g);
  s.trivialization = Trivialization::BoettcherSquared;
  return s;
}

Complex CocycleEngine::periodic_product(const Angle& theta) {
  const auto k = theta.period_under_doubling();
  if (!k) throw NotPeriodic();
  Complex prod = 1.0;
  Angle t = theta;
  for (int i = 0; i < *k; ++i) {
    prod *= alpha_std(t).alpha;
    t = t.doubled();
  }
  return prod;
}

MultiplierReport CocycleEngine::check_multiplier(const Angle& theta) {
  const auto kopt = theta.period_under_doubling();
  if (!kopt) throw NotPeriodic();
  const int k = *kopt;
  // degenerate seed from the polynomial orbit landing at gamma(theta)
  std::vector<Complex> landing(k);
  Angle t = theta;
  for (int i = 0; i < k; ++i) {
    landing[i] = gamma_circle(t);
    t = t.doubled();
  }
  const Point2 seed(landing[0], landing[k - 1]);
  const auto records = periodic_points(h_, k, {seed});
  if (records.empty()) throw MatchFailure("no periodic point from seed");
  const auto& rec = records.front();
  if ((rec.point - seed).norm() > 0.5)
    throw MatchFailure("periodic point too far from degenerate seed");
  const Complex prod = periodic_product(theta);
  const double rel = std::abs(prod - rec.eigen_small) / std::abs(rec.eigen_small);
  return {theta, k, prod, rec.eigen_small, rec.point, rel};
}

int CocycleEngine::precompute_grid(int n) {
  std::vector<char> failed(n, 0);
  std::vector<std::optional<TangencyPoint>> results(n);
  parallel_for(n, workers(), [&](int i) {
    try {
      results[i] = c0_on_circle(h_, Angle::rational(i, n), settings_.schedule,
                                settings_.continuation);
    } catch (const Error&) {
      failed[i] = 1;
    }
  });
  int bad = 0;
  std::lock_guard<std::mutex> lock(mu_);
  for (int i = 0; i < n; ++i) {
    if (failed[i]) {
      ++bad;
      continue;
    }
    c0_cache_.emplace(key_of(Angle::rational(i, n)), std::move(*results[i]));
  }
  return bad;
}

LyapunovReport CocycleEngine::lyapunov_integral(int n_samples) {
  if (n_samples < 256 || (n_samples & (n_samples - 1)) != 0)
    throw std::invalid_argument("lyapunov_integral: n must be a power of two >= 256");
  std::vector<double> vals(n_samples, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n_samples, workers(), [&](int i) {
    try {
      vals[i] = std::log(std::abs(alpha_std(Angle::rational(i, n_samples)).alpha));
    } catch (const Error&) {
    }
  });
  double sum = 0.0;
  int good = 0, failed = 0;
  for (double v : vals) {
    if (std::isnan(v)) {
      ++failed;
    } else {
      sum += v;
      ++good;
    }
  }
  if (failed > n_samples / 100)
    throw NoConvergence("lyapunov_integral: more than 1% of angles failed");
  const double mean = sum / good;
  const double target = std::log(std::abs(h_.a)) - std::log(2.0);
  return {n_samples, failed, mean, target, std::abs(mean - target)};
}

IdentificationReport CocycleEngine::identification_check(const Angle& t1,
                                                         const Angle& t2,
                                                         double rel_tol) {
  if (!landing_identified(poly_ctx_, t1, t2)) throw NotIdentified();
  const Complex a1 = alpha_std(t1).alpha;
  const Complex a2 = alpha_std(t2).alpha;
  const double rel = std::abs(a1 - a2) / std::max(std::abs(a1), std::abs(a2));
  return {t1, t2, a1, a2, rel, rel < rel_tol};
}

std::vector<DegeneracyRow> degeneracy_error(Complex c,
                                            const std::vector<Complex>& a_list,
                                            int theta_grid,
                                            const CocycleSettings& s) {
  BoettcherContext poly = BoettcherContext::make(c);
  std::vector<Complex> gamma1(theta_grid), gamma2(theta_grid);
  parallel_for(theta_grid, default_workers(), [&](int i) {
    gamma1[i] = caratheodory(poly, Angle::rational(i, theta_grid)).value;
    gamma2[i] =
        caratheodory(poly, Angle::rational(i, theta_grid).doubled()).value;
  });
  std::vector<DegeneracyRow> rows;
  for (const Complex a : a_list) {
    CocycleEngine engine(HenonParams::make(c, a), s);
    std::vector<double> err(theta_grid, 0.0);
    parallel_for(theta_grid, engine.workers(), [&](int i) {
      try {
        const Complex alpha =
            engine.alpha_std(Angle::rational(i, theta_grid)).alpha;
        const Complex limit = gamma1[i] / (2.0 * gamma2[i] * gamma2[i]);
        err[i] = std::abs(alpha / a - limit);
      } catch (const Error&) {
        err[i] = std::numeric_limits<double>::infinity();
      }
    });
    rows.push_back({a, *std::max_element(err.begin(), err.end())});
  }
  return rows;
}

HenonParams p_lambda_params(Complex lambda, Complex a) {
  const Complex t = lambda / 2.0 + a / (2.0 * lambda);
  return HenonParams::make((1.0 + a) * t - t * t, a);
}

SemiparabolicReport semiparabolic_alpha_check(Complex lambda, Complex a) {
  if (a == 0.0) throw ZeroJacobian("semiparabolic check needs a != 0");
  const HenonParams h = p_lambda_params(lambda, a);
  CocycleEngine engine(h, CocycleSettings::parabolic_defaults());
  const CocycleSample s = engine.alpha_std(Angle());
  // fixed points: roots of x^2 - (1+a)x + c
  const Complex disc = std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * h.c);
  Complex mu{};
  double best = std::numeric_limits<double>::infinity();
  for (const Complex x : {(1.0 + a + disc) / 2.0, (1.0 + a - disc) / 2.0}) {
    const Point2 q(x, x);
    const auto [small, big] = eigenvalues2(derivative(h, q));
    const double miss = std::abs(big - lambda);
    if (miss < best) {
      best = miss;
      mu = small;
    }
  }
  return {s.alpha, mu, std::abs(s.alpha - mu) / std::abs(mu), s.converged};
}

int winding_number(const std::vector<Complex>& samples) {
  double total = 0.0;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i)
    total += std::arg(samples[(i + 1) % n] / samples[i]);
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace henon
