#include "rmimo/estimation.hpp"

#include <cmath>

namespace rmimo {

const char* estimator_name(EstimatorKind kind) {
  return kind == EstimatorKind::ls ? "ls" : "mmse";
}

Eigen::VectorXcd ls_estimate_nlos(const PilotObservation& observation,
                                  const Eigen::MatrixXcd& pilots,
                                  const SystemConfig& config,
                                  const LargeScaleRealization& ls,
                                  int observed_cell, int user) {
  if (observed_cell < 0 || observed_cell >= config.cells)
    throw IndexError("observed_cell out of range");
  if (user < 0 || user >= config.users_per_cell)
    throw IndexError("user out of range");
  if (observation.y_train.rows() != config.antennas ||
      observation.y_train.cols() != config.pilot_symbols)
    throw DimensionError("observation must be antennas x pilot_symbols");

  // Correlating with the user's pilot isolates everything sharing it; undoing
  // the training amplitude and removing the known LOS ray leaves the NLOS
  // estimate (own NLOS + scaled contamination + noise).
  const Eigen::VectorXcd correlated = observation.y_train * pilots.col(user);
  const double k = ls.ricean_k(observed_cell, user);
  const Eigen::VectorXcd los =
      los_steering(config.antennas, ls.beta[observed_cell](observed_cell, user),
                   ls.aoa(observed_cell, user), config.spacing);
  return correlated / std::sqrt(config.pilot_powers(observed_cell, user)) -
         std::sqrt(k) * los;
}

double mmse_shrinkage(const SystemConfig& config,
                      const LargeScaleRealization& ls, int cell, int user) {
  if (cell < 0 || cell >= config.cells) throw IndexError("cell out of range");
  if (user < 0 || user >= config.users_per_cell)
    throw IndexError("user out of range");

  const double own =
      config.pilot_powers(cell, user) * ls.beta[cell](cell, user);
  double cross = 0.0;
  for (int l = 0; l < config.cells; ++l) {
    if (l == cell) continue;
    cross += config.pilot_powers(l, user) * (ls.ricean_k(l, user) + 1.0) *
             ls.beta[cell](l, user);
  }
  return own / (own + cross + 1.0);
}

EstimateSet estimate(const PilotObservation& observation,
                     const Eigen::MatrixXcd& pilots,
                     const SystemConfig& config,
                     const LargeScaleRealization& ls, int observed_cell,
                     EstimatorKind kind) {
  EstimateSet set;
  set.kind = kind;
  set.h_hat.resize(config.antennas, config.users_per_cell);
  set.chi = Eigen::VectorXd::Ones(config.users_per_cell);

  for (int n = 0; n < config.users_per_cell; ++n) {
    Eigen::VectorXcd nlos_hat =
        ls_estimate_nlos(observation, pilots, config, ls, observed_cell, n);
    if (kind == EstimatorKind::mmse) {
      set.chi(n) = mmse_shrinkage(config, ls, observed_cell, n);
      nlos_hat *= set.chi(n);
    }
    const double k = ls.ricean_k(observed_cell, n);
    const Eigen::VectorXcd los = los_steering(
        config.antennas, ls.beta[observed_cell](observed_cell, n),
        ls.aoa(observed_cell, n), config.spacing);
    set.h_hat.col(n) =
        std::sqrt(k / (k + 1.0)) * los + std::sqrt(1.0 / (k + 1.0)) * nlos_hat;
  }
  return set;
}

}  // namespace rmimo
