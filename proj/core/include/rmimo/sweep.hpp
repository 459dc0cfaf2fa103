#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmimo/estimation.hpp"
#include "rmimo/scenario.hpp"

namespace rmimo {

enum class SweepAxis { antennas, ricean_k_db };

// One curve-family request: sweep one parameter, evaluate both estimators
// unless restricted, optionally with the simulation oracle and the matching
// asymptote alongside.
struct SweepSpec {
  SweepAxis axis = SweepAxis::antennas;
  std::vector<double> points;  // strictly increasing; -inf allowed for K
  std::vector<EstimatorKind> estimators = {EstimatorKind::ls,
                                           EstimatorKind::mmse};
  bool include_monte_carlo = false;
  bool include_asymptotes = false;
};

// Grammar: "M=64,128,256" or "M=50:500:50" (start:stop:step, inclusive) or
// "KdB=-inf,0,10,20".  Axis names: M, KdB (K_dB accepted).
SweepSpec parse_sweep_spec(std::string_view text);

// One CSV row.  Self-describing: axis, value, estimator and seed are spelled
// out so a row can be read without its file's context.
struct ResultRow {
  double axis_value = 0.0;
  EstimatorKind estimator = EstimatorKind::ls;
  double sum_se_closed = 0.0;
  std::optional<double> sum_se_empirical;
  std::optional<double> sum_se_std_error;
  std::optional<double> sum_se_asymptote;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::string axis_label;     // "M" or "K_dB"
  std::vector<ResultRow> rows;
  int drops = 0;
};

// Runs the sweep over the scenario's drop ensemble: each drop's geometry is
// drawn once from the scenario seed and shared by every point of the axis,
// then closed forms (and optionally the simulation and asymptotes) are
// averaged over drops.  Deterministic for any worker count.
SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec,
                      int workers);

// Fixed CSV schema, one header line then one line per row:
//   axis,axis_value,estimator,sum_se_closed,sum_se_empirical,
//   sum_se_std_error,sum_se_asymptote,seed
// Optional fields render empty.  Doubles are shortest round-trip decimal.
std::string csv_header();
std::string to_csv(const SweepResult& result);

struct SweepOutputs {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path meta;
};

// Writes CSV + SVG + a small .meta sidecar (timestamp, settings echo) into
// out_dir.  `tag` distinguishes files when several sweeps land in one dir.
SweepOutputs write_sweep_outputs(const SweepResult& result,
                                 const Scenario& scenario,
                                 const std::filesystem::path& out_dir,
                                 const std::string& tag);

}  // namespace rmimo
