#include "rmimo/system_config.hpp"

#include <cmath>
#include <sstream>

namespace rmimo {

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

bool ConfigError::has(ConfigFault fault) const {
  for (const auto& v : violations_) {
    if (v.fault == fault) return true;
  }
  return false;
}

std::string ConfigError::join(const std::vector<ConfigViolation>& violations) {
  std::ostringstream out;
  out << "invalid configuration (" << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s") << "):";
  for (const auto& v : violations) out << "\n  - " << v.message;
  return out.str();
}

SystemConfig SystemConfig::with_uniform_pilots(int cells, int users_per_cell,
                                               int antennas, int pilot_symbols,
                                               int coherence_symbols,
                                               double uplink_power,
                                               double pilot_power,
                                               double spacing) {
  SystemConfig config;
  config.cells = cells;
  config.users_per_cell = users_per_cell;
  config.antennas = antennas;
  config.pilot_symbols = pilot_symbols;
  config.coherence_symbols = coherence_symbols;
  config.uplink_power = uplink_power;
  config.pilot_powers =
      Eigen::MatrixXd::Constant(cells, users_per_cell, pilot_power);
  config.spacing = spacing;
  return config;
}

ValidatedConfig validate_config(const SystemConfig& config,
                                bool for_closed_form) {
  std::vector<ConfigViolation> violations;
  auto flag = [&](ConfigFault fault, std::string message) {
    violations.push_back({fault, std::move(message)});
  };

  if (config.cells < 1)
    flag(ConfigFault::dimension, "cells must be >= 1");
  if (config.users_per_cell < 1)
    flag(ConfigFault::dimension, "users_per_cell must be >= 1");
  if (config.antennas < 1)
    flag(ConfigFault::dimension, "antennas must be >= 1");
  if (config.pilot_symbols < 1)
    flag(ConfigFault::dimension, "pilot_symbols must be >= 1");
  if (config.pilot_symbols < config.users_per_cell)
    flag(ConfigFault::dimension,
         "pilot_symbols must be >= users_per_cell for orthonormal pilots");
  if (config.coherence_symbols < config.pilot_symbols)
    flag(ConfigFault::dimension,
         "coherence_symbols must be >= pilot_symbols");

  if (!(config.uplink_power > 0) || !std::isfinite(config.uplink_power))
    flag(ConfigFault::power, "uplink_power must be positive and finite");

  if (config.pilot_powers.rows() != config.cells ||
      config.pilot_powers.cols() != config.users_per_cell) {
    flag(ConfigFault::dimension,
         "pilot_powers must be cells x users_per_cell");
  } else {
    for (int l = 0; l < config.cells; ++l) {
      for (int n = 0; n < config.users_per_cell; ++n) {
        const double p = config.pilot_powers(l, n);
        if (!(p > 0) || !std::isfinite(p)) {
          flag(ConfigFault::power,
               "pilot_powers(" + std::to_string(l) + ", " + std::to_string(n) +
                   ") must be positive and finite");
        }
      }
    }
  }

  if (!(config.spacing > 0) || !std::isfinite(config.spacing))
    flag(ConfigFault::dimension, "spacing must be positive and finite");
  else if (for_closed_form && config.spacing != 0.5)
    flag(ConfigFault::spacing,
         "closed-form analytics require half-wavelength spacing");

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return ValidatedConfig(config);
}

}  // namespace rmimo
