#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rmimo/scenario.hpp"

namespace rmimo {

// Self-check suites runnable from the CLI against any scenario.
//   identities: algebraic reductions that must hold to near machine
//               precision (Rayleigh reduction, coupling bound, shrinkage
//               range, estimator ordering).
//   oracle:     simulation vs closed-form SINR on the scenario's
//               configuration, plus a pinned small-config spot check.
//   moments:    simulation vs closed form for each expectation term.
//   asymptotes: closed forms evaluated deep into the asymptotic regimes vs
//               the limit expressions.
enum class ValidationSuite { identities, oracle, moments, asymptotes };

ValidationSuite parse_suite_name(std::string_view name);

struct CheckResult {
  std::string name;
  double measured = 0.0;  // the discrepancy that was measured
  double bound = 0.0;     // what it must stay below
  bool pass = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

ValidationReport run_validation(const Scenario& scenario,
                                ValidationSuite suite, int workers);

// One line per check: name, measured value, bound, PASS or FAIL.
void print_report(std::ostream& out, const ValidationReport& report);

}  // namespace rmimo
