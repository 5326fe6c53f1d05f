#pragma once

// Acceptance checks shared by the `validate` CLI command and the acceptance
// test binary. Each check is self-contained, deterministic (fixed seeds) and
// reports its worst observed discrepancy.

#include <string>
#include <vector>

namespace esl {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

CheckResult check_mean_photon_bound();
CheckResult check_fluctuation_endpoints();
CheckResult check_interference_zero();
CheckResult check_r_orthogonality();
CheckResult check_vacuum_limit();
CheckResult check_numeric_vs_closed_empty_state();
CheckResult check_squeezing_numbers();
CheckResult check_wigner_cross_validation();
CheckResult check_husimi_positivity_and_ring();
CheckResult check_phase_distribution();
CheckResult check_eigen_equation();
CheckResult check_necessary_condition_detector();

// All checks in id order.
std::vector<CheckResult> run_all_checks();

}  // namespace esl
