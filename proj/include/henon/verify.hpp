#ifndef HENON_VERIFY_HPP
#define HENON_VERIFY_HPP

#include <string>
#include <vector>

#include "henon/cocycle.hpp"

namespace henon {

struct CheckResult {
  std::string key;       // namespaced, e.g. "boettcher.functional_eq.c=-1"
  double measured;
  double threshold;
  bool pass;
  bool soft = false;     // warning-level: never turns the run into a failure
  std::string note;
};

using Checks = std::vector<CheckResult>;

struct VerifyOptions {
  unsigned seed = 20240101;
  int workers = 0;
  int lyapunov_n = 4096;  // grid size for the heaviest suite
};

Checks suite_boettcher(const VerifyOptions& opt);
Checks suite_caratheodory(const VerifyOptions& opt);
Checks suite_phi(const VerifyOptions& opt);
Checks suite_eta(const VerifyOptions& opt);
Checks suite_multiplier(const VerifyOptions& opt);
Checks suite_lyapunov(const VerifyOptions& opt);
Checks suite_degeneracy(const VerifyOptions& opt);
Checks suite_winding(const VerifyOptions& opt);
Checks suite_group(const VerifyOptions& opt);
Checks suite_growth(const VerifyOptions& opt);
Checks suite_separating(const VerifyOptions& opt);
Checks suite_identification(const VerifyOptions& opt);
Checks suite_semiconjugacy(const VerifyOptions& opt);
Checks suite_p_lambda(const VerifyOptions& opt);

std::vector<std::string> suite_names();

/// selector "all" or a suite name; throws std::invalid_argument on unknown.
Checks run_suites(const std::string& selector, const VerifyOptions& opt);

/// true if every non-soft check passed.
bool all_hard_passed(const Checks& checks);

}  // namespace henon

#endif
