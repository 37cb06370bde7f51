#ifndef HENON_COCYCLE_HPP
#define HENON_COCYCLE_HPP

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "henon/critical_locus.hpp"

namespace henon {

enum class Trivialization { Standard, BoettcherSquared, CustomGauge };

struct CocycleSample {
  Angle theta;
  Complex alpha;
  Complex beta;
  Trivialization trivialization;
  AffineRatioResult diagnostics;
  bool converged = true;
};

struct GaugeFunction {
  std::function<Complex(const Angle&)> u;
};

struct LyapunovReport {
  int n_samples;
  int failed;
  double mean_log_abs_alpha;
  double target;  // log|a| - log 2
  double gap;
};

struct MultiplierReport {
  Angle theta;
  int period;
  Complex product;
  Complex eigen_small;
  Point2 matched_point;
  double rel_error;
};

struct IdentificationReport {
  Angle theta1, theta2;
  Complex alpha1, alpha2;
  double rel_diff;
  bool pass;
};

struct DegeneracyRow {
  Complex a;
  double sup_error;
};

struct SemiparabolicReport {
  Complex alpha_1;
  Complex mu;
  double rel_error;
  bool convergence_flag;  // false if any slow-convergence warning fired
};

struct CocycleSettings {
  CircleSchedule schedule{};
  ContinuationSettings continuation{};
  int workers = 0;  // 0 = hardware concurrency
  bool parabolic = false;

  static CocycleSettings parabolic_defaults() {
    CocycleSettings s;
    s.parabolic = true;
    s.schedule.steps = 20;
    s.schedule.cauchy_tol = 1e-5;
    s.continuation.newton_max_iter = 80;
    return s;
  }
};

/// Per-parameter evaluation context with write-once caches for c0 and the
/// Caratheodory loop, keyed by exact angle representation.
class CocycleEngine {
public:
  explicit CocycleEngine(const HenonParams& h, CocycleSettings s = {});

  const HenonParams& params() const { return h_; }
  const CocycleSettings& settings() const { return settings_; }
  const BoettcherContext& poly_context() const { return poly_ctx_; }

  const TangencyPoint& c0(const Angle& theta);
  Complex gamma_circle(const Angle& theta);
  bool gamma_converged(const Angle& theta);

  CocycleSample alpha_std(const Angle& theta);
  CocycleSample alpha_gauge(const Angle& theta, const GaugeFunction& u);
  CocycleSample alpha_normalized(const Angle& theta);

  Complex periodic_product(const Angle& theta);
  MultiplierReport check_multiplier(const Angle& theta);
  LyapunovReport lyapunov_integral(int n_samples);
  IdentificationReport identification_check(const Angle& t1, const Angle& t2,
                                            double rel_tol = 1e-5);

  /// Fill the c0 cache for the n-point uniform grid in parallel; returns the
  /// number of angles that failed to converge.
  int precompute_grid(int n);

  int workers() const;

private:
  HenonParams h_;
  CocycleSettings settings_;
  BoettcherContext poly_ctx_;
  std::mutex mu_;
  std::map<AngleKey, TangencyPoint> c0_cache_;
  std::map<AngleKey, LoopValue> gamma_cache_;
  std::map<AngleKey, CocycleSample> alpha_cache_;
};

/// Sup over the angle grid of |alpha/a - gamma(xi)/(2 gamma(xi^2)^2)| for each
/// Jacobian in a_list (uniform-degeneracy error table).
std::vector<DegeneracyRow> degeneracy_error(Complex c,
                                            const std::vector<Complex>& a_list,
                                            int theta_grid,
                                            const CocycleSettings& s = {});

HenonParams p_lambda_params(Complex lambda, Complex a);

SemiparabolicReport semiparabolic_alpha_check(Complex lambda, Complex a);

/// Winding number (in turns) of a closed sampled curve, by summed wrapped
/// argument increments.
int winding_number(const std::vector<Complex>& samples);

}  // namespace henon

#endif
