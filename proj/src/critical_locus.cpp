#include "henon/critical_locus.hpp"

#include <cmath>
#include <limits>

namespace henon {

namespace {

struct OrbitData {
  Point2 top;       // H^N(q)
  Matrix2 jacobian; // DH^N at q
};

OrbitData forward_orbit(const HenonParams& h, Point2 q, int N) {
  Matrix2 m = Matrix2::Identity();
  for (int i = 0; i < N; ++i) {
    m = (derivative(h, q) * m).eval();
    q = apply_map(h, q);
    if (!q.allFinite()) throw NotEscaping("forward orbit diverged");
  }
  return {q, m};
}

Eigen::RowVector2cd covector_plus(const HenonParams& h, const Point2& q, int N) {
  const OrbitData o = forward_orbit(h, q, N);
  return grad_log_phi_plus(h, o.top) * o.jacobian;
}

Eigen::RowVector2cd covector_minus(const HenonParams& h, Point2 q, int M) {
  Matrix2 m = Matrix2::Identity();
  for (int i = 0; i < M; ++i) {
    q = apply_inverse(h, q);
    m = (m * derivative(h, q)).eval();
  }
  return grad_log_phi_minus(h, q) * m.inverse();
}

Eigen::Vector2cd normalize_direction(Eigen::Vector2cd v) {
  v /= v.norm();
  const Complex lead = (std::abs(v(0)) > 1e-8) ? v(0) : v(1);
  v *= std::abs(lead) / lead;
  return v;
}

std::int64_t mod_pow2(int N, std::int64_t den) {
  __int128 r = 1 % den;
  for (int i = 0; i < N; ++i) r = (r * 2) % den;
  return static_cast<std::int64_t>(r);
}

// xi^{2^N} with the angle part reduced mod 1 exactly
Complex leaf_target(const LeafLabel& label, int N) {
  const std::int64_t den = label.theta.den();
  const std::int64_t num = label.theta.num();
  const __int128 frac = (static_cast<__int128>(mod_pow2(N, den)) * num) % den;
  const double arg = kTwoPi * static_cast<double>(frac) / static_cast<double>(den);
  const double logmag = std::ldexp(1.0, N) * std::log(label.radius);
  return std::exp(Complex(logmag, arg));
}

}  // namespace

Eigen::Vector2cd leaf_tangent_plus(const HenonParams& h, const Point2& q, int N) {
  const Eigen::RowVector2cd L = covector_plus(h, q, N);
  return normalize_direction(Eigen::Vector2cd(-L(1), L(0)));
}

Eigen::Vector2cd leaf_tangent_minus(const HenonParams& h, const Point2& q, int M) {
  const Eigen::RowVector2cd L = covector_minus(h, q, M);
  return normalize_direction(Eigen::Vector2cd(-L(1), L(0)));
}

double tangency_residual(const HenonParams& h, const Point2& q, int N, int M) {
  const Eigen::RowVector2cd lp = covector_plus(h, q, N);
  const Eigen::RowVector2cd lm = covector_minus(h, q, M);
  const Complex det = lp(0) * lm(1) - lp(1) * lm(0);
  return std::abs(det) / (lp.norm() * lm.norm());
}

Complex tangency_function(const HenonParams& h, const Point2& q, int N, int M) {
  const Eigen::RowVector2cd lp = covector_plus(h, q, N);
  const Eigen::RowVector2cd lm = covector_minus(h, q, M);
  return lp(1) / lp(0) - lm(1) / lm(0);
}

namespace {

struct LeafSolveFrame {
  int N, M;
  Complex target;
};

Eigen::Vector2cd residual_vector(const HenonParams& h, const Point2& q,
                                 const LeafSolveFrame& f) {
  const OrbitData o = forward_orbit(h, q, f.N);
  const Complex phi = std::exp(log_phi_plus(h, o.top));
  const Eigen::RowVector2cd lp = grad_log_phi_plus(h, o.top) * o.jacobian;
  const Eigen::RowVector2cd lm = covector_minus(h, q, f.M);
  return {phi / f.target - 1.0, lp(1) / lp(0) - lm(1) / lm(0)};
}

struct NewtonOutcome {
  Point2 q;
  double residual;
  int iterations;
  bool converged;
};

NewtonOutcome newton_leaf_tangency(const HenonParams& h, Point2 q,
                                   const LeafSolveFrame& f,
                                   const ContinuationSettings& cs) {
  double res = std::numeric_limits<double>::infinity();
  double best_res = res;
  Point2 best_q = q;
  int stall = 0;
  int it = 0;
  for (; it < cs.newton_max_iter; ++it) {
    Eigen::Vector2cd F;
    try {
      F = residual_vector(h, q, f);
    } catch (const Error&) {
      return {q, res, it, false};
    }
    res = F.norm();
    if (res < cs.newton_tol) return {q, res, it, true};
    if (res < 0.5 * best_res) {
      stall = 0;
    } else if (++stall >= 4 && best_res < 1e-8) {
      // evaluation noise floor of the finite-difference residual
      return {best_q, best_res, it, true};
    }
    if (res < best_res) {
      best_res = res;
      best_q = q;
    }
    Matrix2 jac;
    const double step = 1e-7 * (1.0 + q.norm());
    bool jac_ok = true;
    for (int j = 0; j < 2 && jac_ok; ++j) {
      Point2 qp = q, qm = q;
      qp(j) += step;
      qm(j) -= step;
      try {
        jac.col(j) = (residual_vector(h, qp, f) - residual_vector(h, qm, f)) /
                     (2.0 * step);
      } catch (const Error&) {
        jac_ok = false;
      }
    }
    if (!jac_ok) return {q, res, it, false};
    Point2 delta = jac.fullPivLu().solve(F);
    if (!delta.allFinite()) return {q, res, it, false};
    double damp = 1.0;
    for (int half = 0; half < 6; ++half) {
      const Point2 cand = q - damp * delta;
      try {
        if (residual_vector(h, cand, f).norm() < res) {
          q = cand;
          break;
        }
      } catch (const Error&) {
      }
      damp *= 0.5;
      if (half == 5) q = cand;
    }
  }
  try {
    res = residual_vector(h, q, f).norm();
  } catch (const Error&) {
    return {q, res, it, false};
  }
  return {q, res, it, res < 100.0 * cs.newton_tol};
}

LeafSolveFrame make_frame(const HenonParams& h, const LeafLabel& label,
                          const Point2& seed) {
  Point2 q = seed;
  int N = 0;
  while (std::abs(q(0)) <= h.big_radius) {
    q = apply_map(h, q);
    if (++N > h.max_iter || !q.allFinite())
      throw NotEscaping("solve_c0: seed does not escape");
  }
  const auto back = first_entry_backward(h, seed, 64);
  if (!back) throw NotEscapingBackward("solve_c0: seed does not escape backward");
  const int M = std::max(1, back->first);
  return {N, M, leaf_target(label, N)};
}

TangencyPoint finish(const HenonParams& h, const LeafLabel& label,
                     const NewtonOutcome& n, const LeafSolveFrame& f) {
  const double tres = tangency_residual(h, n.q, f.N, f.M);
  return {label, n.q, n.residual, tres, n.iterations, n.converged};
}

}  // namespace

TangencyPoint solve_c0(const HenonParams& h, const LeafLabel& label,
                       std::optional<Point2> seed, const ContinuationSettings& cs,
                       std::optional<Complex> gamma_hint) {
  if (std::abs(h.a) > cs.a_ceiling)
    throw PreconditionUnmet("solve_c0: |a| above continuation ceiling");
  if (h.a == 0.0) throw ZeroJacobian();
  const Complex xi = label.radius * label.theta.unit();
  Complex gamma;
  if (gamma_hint) {
    gamma = *gamma_hint;
  } else {
    gamma = boettcher_inverse(h.boettcher(), xi);
  }
  const Point2 degenerate_seed(gamma, 0.0);
  const Point2 start = seed.value_or(degenerate_seed);

  auto attempt = [&](const HenonParams& hh, const Point2& s) -> NewtonOutcome {
    // a seed that fails to escape (forward or backward) counts as a failed
    // attempt, not a hard error: the continuation path may still succeed
    try {
      const LeafSolveFrame f = make_frame(hh, label, s);
      return newton_leaf_tangency(hh, s, f, cs);
    } catch (const Error&) {
      return {s, std::numeric_limits<double>::infinity(), 0, false};
    }
  };

  NewtonOutcome out{start, std::numeric_limits<double>::infinity(), 0, false};
  if (seed) {
    out = attempt(h, start);
    if (out.converged && std::abs(out.q(0) - gamma) > cs.trap_radius)
      out.converged = false;
  } else {
    // without a seed, a direct full-a Newton can settle on a nearby sheet of
    // the critical locus inside the trap radius; the continuation tracks the
    // primary component from the degenerate limit, where sheets separate
    out.converged = false;
  }
  if (!out.converged) {
    // continuation in the Jacobian from near-degenerate parameters
    Point2 s = degenerate_seed;
    bool ok = true;
    for (int m = 1; m <= cs.a_steps; ++m) {
      HenonParams hm = h;
      hm.a = h.a * (static_cast<double>(m) / cs.a_steps);
      NewtonOutcome step = attempt(hm, s);
      if (!step.converged) {
        // halve once between the last good point and this level
        HenonParams hh = h;
        hh.a = h.a * ((m - 0.5) / cs.a_steps);
        const NewtonOutcome mid = attempt(hh, s);
        if (!mid.converged) {
          ok = false;
          break;
        }
        step = attempt(hm, mid.q);
        if (!step.converged) {
          ok = false;
          break;
        }
      }
      s = step.q;
      out = step;
    }
    if (!ok || !out.converged) throw ContinuationStall();
  }
  if (std::abs(out.q(0) - gamma) > cs.trap_radius) throw WrongComponent();
  return finish(h, label, out, make_frame(h, label, out.q));
}

TangencyPoint c0_on_circle(const HenonParams& h, const Angle& theta,
                           const CircleSchedule& sched,
                           const ContinuationSettings& cs) {
  // The boundary point is a Hoelder-slow radius limit (the error mode decays
  // like rho^m with rho set by the multiplier of the landing cycle, close to
  // 0.8 near the basilica), so a short schedule with one Aitken pass is far
  // off.  Run the schedule deep and extrapolate each coordinate with the full
  // iterated Aitken table.
  std::vector<Complex> seq_x, seq_y;
  std::optional<Point2> seed;
  Point2 prev_limit = Point2::Zero();
  bool have_prev = false;
  double gap = std::numeric_limits<double>::infinity();
  TangencyPoint last{};
  Point2 best = Point2::Zero();
  for (int m = 0; m < sched.steps; ++m) {
    const double r = 1.0 + sched.eps0 * std::ldexp(1.0, -m);
    if (r == 1.0) break;  // radius offset fell below machine precision
    try {
      // no gamma hint: trap each level against its own Boettcher coordinate
      last = solve_c0(h, {theta, r}, seed, cs);
    } catch (const Error&) {
      // solver noise floor reached; extrapolate from the levels we have
      if (seq_x.size() >= 8) break;
      throw;
    }
    seed = last.q;
    seq_x.push_back(last.q(0));
    seq_y.push_back(last.q(1));
    const int n = static_cast<int>(seq_x.size());
    if (n < 4) continue;
    double gx, gy;
    const Point2 limit(aitken_limit(seq_x, gx), aitken_limit(seq_y, gy));
    if (have_prev) {
      gap = (limit - prev_limit).norm();
      best = limit;
      if (gap < sched.cauchy_tol && n >= 8)
        return {{theta, 1.0}, best, gap, last.residual_tangency,
                last.iterations, true};
    } else {
      best = limit;
    }
    prev_limit = limit;
    have_prev = true;
  }
  return {{theta, 1.0}, best, gap, last.residual_tangency, last.iterations, false};
}

AffineRatioResult affine_ratio(const HenonParams& h, const Point2& A,
                               const Point2& B, const Point2& C, int max_steps,
                               double tol) {
  const double scale = std::max({A.norm(), B.norm(), C.norm(), 1.0});
  if ((B - C).norm() < 1e-13 * scale) throw DegenerateTriple();
  Point2 a = A, b = B, c = C;
  Point2 dab = A - B, dbc = B - C;  // exact difference orbits
  Complex best = dab(1) / dbc(1);
  double best_gap = std::numeric_limits<double>::infinity();
  Complex prev = best;
  int best_it = 0;
  int grow = 0;
  double prev_mag = dab.norm();
  std::vector<Complex> seq;
  for (int n = 1; n <= max_steps; ++n) {
    auto push = [&](const Point2& u, const Point2& v, const Point2& d) {
      return Point2((u(0) + v(0)) * d(0) - h.a * d(1), d(0));
    };
    dab = push(a, b, dab);
    dbc = push(b, c, dbc);
    a = apply_map(h, a);
    b = apply_map(h, b);
    c = apply_map(h, c);
    if (std::abs(dbc(1)) < 1e-300) break;
    const Complex r = dab(1) / dbc(1);
    seq.push_back(r);
    const double gap = std::abs(r - prev);
    if (gap < best_gap) {
      best_gap = gap;
      best = r;
      best_it = n;
      grow = 0;
    } else if (++grow >= 2) {
      break;
    }
    prev = r;
    if (gap < tol) break;
    const double mag = dab.norm();
    if (n <= 3 && mag > prev_mag && mag > 10.0 * scale) throw NotSameLeaf();
    prev_mag = mag;
  }
  if (best_gap > tol && best_it >= 3) {
    // non-escaping (boundary-leaf) orbits: the difference orbits contract to
    // the rounding floor after a handful of steps and the raw ratio then
    // drifts onto a spurious plateau.  Extrapolate the clean early window
    // (terms up to the best iterate) instead of taking the last raw term.
    seq.resize(std::size_t(best_it));
    double g = 0.0;
    const Complex v = aitken_limit(seq, g);
    if (g < best_gap) {
      best = v;
      best_gap = g;
    }
  }
  return {best, best_it, best_gap};
}

Complex leaf_coordinate(const HenonParams& h, const Point2& q, const Point2& c0,
                        const Point2& cm1) {
  if ((q - c0).norm() == 0.0) return 0.0;
  return -affine_ratio(h, q, c0, cm1).value;
}

bool converge_together(const HenonParams& h, Point2 A, Point2 B, int max_steps) {
  Point2 d = A - B;
  int streak = 0;
  const double initial = d.norm();
  double prev = initial;
  if (prev == 0.0) return true;
  for (int n = 0; n < max_steps; ++n) {
    d = Point2((A(0) + B(0)) * d(0) - h.a * d(1), d(0));
    A = apply_map(h, A);
    B = apply_map(h, B);
    const double mag = d.norm();
    if (mag <= 0.9 * prev) {
      if (++streak >= 10) return true;
    } else {
      streak = 0;
    }
    // the difference orbit of imperfect same-leaf points bottoms out at the
    // point accuracy and then rides the unstable direction back up, so a
    // deep overall contraction counts as convergence too
    if (mag < 1e-13 || mag < 1e-6 * initial) return true;
    prev = mag;
  }
  return false;
}

}  // namespace henon
