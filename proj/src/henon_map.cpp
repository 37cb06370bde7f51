#include "henon/henon_map.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

namespace henon {

Matrix2 orbit_derivative(const HenonParams& h, Point2 q, int k) {
  Matrix2 m = Matrix2::Identity();
  for (int i = 0; i < k; ++i) {
    m = (derivative(h, q) * m).eval();
    q = apply_map(h, q);
  }
  return m;
}

Matrix2 backward_orbit_derivative(const HenonParams& h, Point2 q, int k) {
  Matrix2 m = Matrix2::Identity();
  for (int i = 0; i < k; ++i) {
    q = apply_inverse(h, q);
    m = (m * derivative(h, q)).eval();
  }
  return m.inverse();
}

FiltrationRegion classify(const HenonParams& h, const Point2& q) {
  const double ax = std::abs(q(0)), ay = std::abs(q(1));
  if (ax >= std::max(ay, h.R)) return FiltrationRegion::Vplus;
  if (ay >= std::max(ax, h.R)) return FiltrationRegion::Vminus;
  return FiltrationRegion::V;
}

std::optional<std::pair<int, Point2>> first_entry_forward(const HenonParams& h,
                                                          Point2 q, int max_iter) {
  for (int n = 0; n <= max_iter; ++n) {
    if (classify(h, q) == FiltrationRegion::Vplus) return std::make_pair(n, q);
    q = apply_map(h, q);
  }
  return std::nullopt;
}

std::optional<std::pair<int, Point2>> first_entry_backward(const HenonParams& h,
                                                           Point2 q, int max_iter) {
  for (int n = 0; n <= max_iter; ++n) {
    if (classify(h, q) == FiltrationRegion::Vminus) return std::make_pair(n, q);
    q = apply_inverse(h, q);
  }
  return std::nullopt;
}

Complex log_phi_plus(const HenonParams& h, Point2 q) {
  if (classify(h, q) != FiltrationRegion::Vplus) throw NotEscaping();
  Complex acc = std::log(q(0));
  double scale = 0.5;
  for (int n = 0; n < h.max_iter; ++n) {
    if (std::abs(q(0)) > h.big_radius) break;
    const Point2 next = apply_map(h, q);
    acc += scale * std::log(next(0) / (q(0) * q(0)));
    scale *= 0.5;
    q = next;
  }
  return acc;
}

Complex phi_plus(const HenonParams& h, const Point2& q) {
  return std::exp(log_phi_plus(h, q));
}

IteratedPhi phi_plus_iterated(const HenonParams& h, Point2 q) {
  const auto entry = first_entry_forward(h, q, h.max_iter);
  if (!entry) throw NotEscaping();
  return {entry->first, phi_plus(h, entry->second)};
}

Complex log_phi_minus(const HenonParams& h, Point2 q) {
  if (h.a == 0.0) throw ZeroJacobian();
  if (classify(h, q) != FiltrationRegion::Vminus) throw NotEscapingBackward();
  Complex acc = std::log(q(1));
  double scale = 0.5;
  for (int n = 0; n < h.max_iter; ++n) {
    if (std::abs(q(1)) > h.big_radius) break;
    const Point2 next = apply_inverse(h, q);
    // a * y_{n+1} / y_n^2 = 1 + (c - x_n) / y_n^2, close to 1 on V-
    acc += scale * std::log(1.0 + (h.c - q(0)) / (q(1) * q(1)));
    scale *= 0.5;
    q = next;
  }
  return acc;
}

Complex phi_minus(const HenonParams& h, const Point2& q) {
  return std::exp(log_phi_minus(h, q));
}

namespace {

Complex wrap_imag(Complex d) {
  while (d.imag() > std::numbers::pi) d -= Complex(0.0, kTwoPi);
  while (d.imag() < -std::numbers::pi) d += Complex(0.0, kTwoPi);
  return d;
}

}  // namespace

Eigen::RowVector2cd grad_log_phi_plus(const HenonParams& h, const Point2& q) {
  const double step = 1e-7 * (1.0 + q.norm());
  Eigen::RowVector2cd g;
  for (int j = 0; j < 2; ++j) {
    Point2 qp = q, qm = q;
    qp(j) += step;
    qm(j) -= step;
    g(j) = wrap_imag(log_phi_plus(h, qp) - log_phi_plus(h, qm)) / (2.0 * step);
  }
  return g;
}

Eigen::RowVector2cd grad_log_phi_minus(const HenonParams& h, const Point2& q) {
  const double step = 1e-7 * (1.0 + q.norm());
  Eigen::RowVector2cd g;
  for (int j = 0; j < 2; ++j) {
    Point2 qp = q, qm = q;
    qp(j) += step;
    qm(j) -= step;
    g(j) = wrap_imag(log_phi_minus(h, qp) - log_phi_minus(h, qm)) / (2.0 * step);
  }
  return g;
}

namespace {

Point2 lerp(const Point2& a, const Point2& b, double t) {
  return a + t * (b - a);
}

}  // namespace

DyadicIndex eta_index(const HenonParams& h, const std::vector<Point2>& loop,
                      int max_iter) {
  if (loop.empty()) throw NotInUplus("eta_index: empty loop");
  int entries = 0;
  for (const Point2& v : loop) {
    const auto e = first_entry_forward(h, v, max_iter);
    if (!e) throw NotInUplus();
    entries = std::max(entries, e->first);
  }
  const int N = entries;
  auto phi_at = [&](const Point2& v) {
    Point2 q = v;
    for (int i = 0; i < N; ++i) q = apply_map(h, q);
    if (classify(h, q) != FiltrationRegion::Vplus) throw NotInUplus();
    return std::exp(log_phi_plus(h, q));
  };
  double total = 0.0;
  std::size_t segments = 0;
  const std::size_t segment_limit = std::size_t(1) << 20;
  // accumulate arg increments of phi+ along the pushed-forward loop,
  // bisecting until each increment is below pi/2
  std::function<void(const Point2&, const Point2&, Complex, Complex, double, double, int)>
      walk = [&](const Point2& a, const Point2& b, Complex fa, Complex fb,
                 double ta, double tb, int depth) {
        const double d = std::arg(fb / fa);
        if (std::abs(d) < std::numbers::pi / 2.0) {
          total += d;
          if (++segments > segment_limit) throw SubdivisionLimit();
          return;
        }
        if (depth > 24) throw SubdivisionLimit();
        const double tm = (ta + tb) / 2.0;
        const Point2 m = lerp(a, b, tm);
        const Complex fm = phi_at(m);
        walk(a, b, fa, fm, ta, tm, depth + 1);
        walk(a, b, fm, fb, tm, tb, depth + 1);
      };
  std::vector<Complex> vals(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) vals[i] = phi_at(loop[i]);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const std::size_t j = (i + 1) % loop.size();
    if ((loop[j] - loop[i]).norm() == 0.0) continue;
    walk(loop[i], loop[j], vals[i], vals[j], 0.0, 1.0, 0);
  }
  const double eta = total / (kTwoPi * std::ldexp(1.0, N));
  DyadicIndex out{eta, 0, 0, std::numeric_limits<double>::infinity()};
  for (int k = 0; k <= std::min(N, 52); ++k) {
    const double scaled = std::ldexp(eta, k);
    const double m = std::round(scaled);
    const double dist = std::abs(eta - std::ldexp(m, -k));
    if (dist < out.distance - 1e-18) {
      out.nearest_num = static_cast<std::int64_t>(m);
      out.nearest_k = k;
      out.distance = dist;
    }
    if (out.distance < 1e-12) break;
  }
  return out;
}

std::pair<Complex, Complex> eigenvalues2(const Matrix2& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex s = std::sqrt(tr * tr - 4.0 * det);
  const Complex big = (std::abs(tr + s) >= std::abs(tr - s)) ? (tr + s) / 2.0
                                                             : (tr - s) / 2.0;
  if (std::abs(big) == 0.0) return {Complex(0), Complex(0)};
  const Complex small = det / big;
  return {small, big};
}

std::vector<PeriodicPointRecord> periodic_points(const HenonParams& h, int k,
                                                 const std::vector<Point2>& seeds) {
  if (h.a == 0.0) throw ZeroJacobian();
  std::vector<PeriodicPointRecord> out;
  for (const Point2& seed : seeds) {
    Point2 q = seed;
    double res = std::numeric_limits<double>::infinity();
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      Point2 image = q;
      for (int i = 0; i < k; ++i) image = apply_map(h, image);
      const Point2 g = image - q;
      res = g.norm();
      if (res < 1e-13) {
        ok = true;
        break;
      }
      const Matrix2 jac = orbit_derivative(h, q, k) - Matrix2::Identity();
      Point2 step = jac.fullPivLu().solve(g);
      if (!step.allFinite()) break;
      double damp = 1.0;
      Point2 cand = q - damp * step;
      for (int half = 0; half < 8; ++half) {
        Point2 img2 = cand;
        for (int i = 0; i < k; ++i) img2 = apply_map(h, img2);
        if ((img2 - cand).norm() <= res || damp < 1e-3) break;
        damp *= 0.5;
        cand = q - damp * step;
      }
      q = cand;
    }
    {
      Point2 image = q;
      for (int i = 0; i < k; ++i) image = apply_map(h, image);
      res = (image - q).norm();
      ok = res < 1e-11;
    }
    if (!ok) continue;  // NoConvergence for this seed
    bool dup = false;
    for (const auto& r : out)
      if ((r.point - q).norm() < 1e-6) dup = true;
    if (dup) continue;
    const auto [small, big] = eigenvalues2(orbit_derivative(h, q, k));
    out.push_back({q, k, small, big, res});
  }
  return out;
}

std::vector<Point2> degenerate_periodic_seeds(const HenonParams& h, int k) {
  // coefficients of p^k(x), low degree first
  std::vector<Complex> p{h.c, 0.0, 1.0};
  for (int i = 1; i < k; ++i) {
    std::vector<Complex> sq(2 * p.size() - 1, Complex(0));
    for (std::size_t u = 0; u < p.size(); ++u)
      for (std::size_t v = 0; v < p.size(); ++v) sq[u + v] += p[u] * p[v];
    sq[0] += h.c;
    p = std::move(sq);
  }
  if (p.size() >= 2)
    p[1] -= 1.0;  // roots of p^k(x) - x
  const int deg = static_cast<int>(p.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Point2> seeds;
  for (int i = 0; i < deg; ++i) {
    const Complex x0 = solver.eigenvalues()(i);
    Complex prev = x0;
    QuadraticPoly poly{h.c};
    for (int j = 0; j < k - 1; ++j) prev = poly(prev);  // x_{k-1} maps to x0
    seeds.emplace_back(x0, prev);
  }
  return seeds;
}

}  // namespace henon
