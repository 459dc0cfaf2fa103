#pragma once

#include <vector>

namespace rmimo {

// Where a number came from.  Every value leaving the workbench carries one of
// these so downstream consumers never mix measured and derived quantities.
enum class Provenance { closed_form, monte_carlo, asymptotic_m, asymptotic_k };

const char* provenance_name(Provenance p);

// Per-user values of one kind, labeled with their origin.
struct LabeledSeries {
  std::vector<double> values;
  Provenance provenance = Provenance::closed_form;

  bool empty() const { return values.empty(); }
};

// Everything the workbench knows about one large-scale realization: closed
// forms, Monte-Carlo measurements with uncertainty, and asymptotic limits
// where they exist.  Indexed by in-cell user.
struct SinrReport {
  LabeledSeries closed_ls;
  LabeledSeries closed_mmse;

  LabeledSeries empirical_ls;
  LabeledSeries empirical_mmse;
  std::vector<double> empirical_ls_std_error;
  std::vector<double> empirical_mmse_std_error;

  // Empty when the corresponding limit is unbounded for this realization.
  LabeledSeries limit_m_ls;
  LabeledSeries limit_m_mmse;
  LabeledSeries limit_k_ls;
  LabeledSeries limit_k_mmse;

  // Spectral efficiencies derived from the closed-form SINRs.
  std::vector<double> se_ls;
  std::vector<double> se_mmse;
  double sum_se_ls = 0.0;
  double sum_se_mmse = 0.0;
};

}  // namespace rmimo
