#pragma once

#include <Eigen/Core>

#include "rmimo/channel.hpp"
#include "rmimo/large_scale.hpp"
#include "rmimo/system_config.hpp"

namespace rmimo {

enum class EstimatorKind { ls, mmse };

const char* estimator_name(EstimatorKind kind);

// Channel estimates for all users of the observed cell.
struct EstimateSet {
  EstimatorKind kind = EstimatorKind::ls;
  Eigen::MatrixXcd h_hat;   // antennas x users, composite estimates
  Eigen::VectorXd chi;      // shrinkage applied per user; all ones for LS
};

// Least-squares estimate of the NLOS part of user n's channel: correlate the
// training observation with the user's pilot, undo the training amplitude,
// subtract the known LOS ray.
Eigen::VectorXcd ls_estimate_nlos(const PilotObservation& observation,
                                  const Eigen::MatrixXcd& pilots,
                                  const SystemConfig& config,
                                  const LargeScaleRealization& ls,
                                  int observed_cell, int user);

// MMSE shrinkage factor for user n: the fraction of the LS estimate's power
// that is signal rather than contamination and noise.  In (0, 1].
double mmse_shrinkage(const SystemConfig& config,
                      const LargeScaleRealization& ls, int cell, int user);

// Full estimator: per-user NLOS estimate (shrunk for MMSE), recombined with
// the deterministic LOS ray by the user's Ricean factor.
EstimateSet estimate(const PilotObservation& observation,
                     const Eigen::MatrixXcd& pilots,
                     const SystemConfig& config,
                     const LargeScaleRealization& ls, int observed_cell,
                     EstimatorKind kind);

}  // namespace rmimo
