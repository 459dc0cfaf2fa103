#pragma once

#include <Eigen/Core>

#include "rmimo/errors.hpp"

namespace rmimo {

// Static dimensions and powers of the uplink system.  Noise variance is 1 by
// convention, so all powers here are already normalized to it.
struct SystemConfig {
  int cells = 1;             // L
  int users_per_cell = 1;    // N
  int antennas = 1;          // M
  int pilot_symbols = 1;     // tau, training length per coherence block
  int coherence_symbols = 2; // T, total symbols per coherence block
  double uplink_power = 1.0; // data-phase transmit SNR, linear

  // Training-phase transmit SNR of user n of cell l, linear; cells x users.
  Eigen::MatrixXd pilot_powers;

  // Antenna spacing in wavelengths; the closed forms assume 1/2.
  double spacing = 0.5;

  // Convenience constructor for the common equal-pilot-power case.
  static SystemConfig with_uniform_pilots(int cells, int users_per_cell,
                                          int antennas, int pilot_symbols,
                                          int coherence_symbols,
                                          double uplink_power,
                                          double pilot_power,
                                          double spacing = 0.5);
};

class ValidatedConfig;

// Checks every invariant and reports all violations together.  With
// for_closed_form set, additionally requires half-wavelength spacing, which
// only the closed-form analytics need.
ValidatedConfig validate_config(const SystemConfig& config,
                                bool for_closed_form = false);

// Proof token that a SystemConfig passed validation.  Only obtainable from
// validate_config; converts back implicitly where a plain config is expected.
class ValidatedConfig {
 public:
  const SystemConfig& get() const { return config_; }
  operator const SystemConfig&() const { return config_; }

 private:
  friend ValidatedConfig validate_config(const SystemConfig&, bool);
  explicit ValidatedConfig(SystemConfig config) : config_(std::move(config)) {}
  SystemConfig config_;
};

// Re-validating is the identity.
inline ValidatedConfig validate_config(const ValidatedConfig& config, bool = false) {
  return config;
}

}  // namespace rmimo
