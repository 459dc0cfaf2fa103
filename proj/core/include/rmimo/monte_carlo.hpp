#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rmimo/analytics.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/sinr_report.hpp"

namespace rmimo {

// Knobs of the simulation oracle.  Results depend on seed and sample counts
// only; parallelism never changes a single output bit (work is cut into a
// fixed number of batches merged in index order).
struct McSettings {
  int n_small_scale = 100;   // coherence blocks per large-scale realization
  int n_large_scale = 100;   // large-scale realizations (used by sweeps)
  std::uint64_t seed = 1;
  int parallelism = 1;       // worker threads; any value gives identical output
};

// Measured post-detection SINR per user of the observed cell, with a
// batch-means standard error (the sample set is cut into min(10, n) batches).
struct EmpiricalSinr {
  std::vector<double> sinr;
  std::vector<double> std_error;
  int n_samples = 0;
};

// Simulation estimate of the effective SINR: per coherence block draw the
// channel, train, estimate, and accumulate the moments of the matched-filter
// statistic; assemble the SINR from the sample moments.
EmpiricalSinr estimate_sinr_empirical(const SystemConfig& config,
                                      const LargeScaleRealization& ls,
                                      int observed_cell, EstimatorKind kind,
                                      const McSettings& settings);

// The six expectation building blocks of the effective-SINR derivation, each
// with a closed form to pin tests against:
//   a  |E{h_hat' h}|^2 for the user's own channel,
//   b  E{|h_hat' h|^2} for the user's own channel,
//   c  E{|h_hat' h_t|^2} against another same-cell user t,
//   d  E{|h_hat' h_l|^2} against the same pilot user of another cell l,
//   e  E{|h_hat' h_lt|^2} against a different-pilot user of another cell,
//   f  E{||h_hat||^2}.
enum class MomentTerm { a, b, c, d, e, f };

struct MomentIndices {
  int cell = 0;        // observed cell j
  int user = 0;        // user n whose estimate is correlated
  int other_cell = -1; // l for terms d, e
  int other_user = -1; // t for terms c, e
};

struct MomentEstimate {
  MomentTerm term = MomentTerm::a;
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n); delta-method for term a
  int n_samples = 0;
  double closed_form = 0.0;
  MomentIndices indices;
};

double moment_closed_form(MomentTerm term, const SystemConfig& config,
                          const LargeScaleRealization& ls, EstimatorKind kind,
                          const MomentIndices& indices);

MomentEstimate estimate_moment(MomentTerm term, const SystemConfig& config,
                               const LargeScaleRealization& ls,
                               EstimatorKind kind, const MomentIndices& indices,
                               const McSettings& settings);

// Matched-filter combining: one soft symbol per user of the observed cell.
Eigen::VectorXcd mrc_combine(const EstimateSet& estimates,
                             const Eigen::VectorXcd& received);

// Independent cross-check that bypasses the moment algebra entirely: run
// actual unit-modulus symbols through the data phase, combine, split each
// soft symbol into its mean-channel part and residual, and measure the power
// ratio.  Agrees with estimate_sinr_empirical in expectation.
EmpiricalSinr estimate_sinr_symbol_level(const SystemConfig& config,
                                         const LargeScaleRealization& ls,
                                         int observed_cell, EstimatorKind kind,
                                         const McSettings& settings,
                                         int symbols_per_block = 10);

// Full per-realization evaluation: closed forms, simulation for both
// estimators, asymptotic limits where they exist, spectral efficiencies.
// Bit-identical for any parallelism value.
SinrReport build_report(const SystemConfig& config,
                        const LargeScaleRealization& ls, int observed_cell,
                        const McSettings& settings);

}  // namespace rmimo
