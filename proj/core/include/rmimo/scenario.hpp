#pragma once

#include <filesystem>
#include <string_view>

#include "rmimo/geometry.hpp"
#include "rmimo/monte_carlo.hpp"
#include "rmimo/system_config.hpp"

namespace rmimo {

// Everything a run needs, bundled: system dimensions, propagation geometry,
// the Ricean-factor policy, and simulation settings.  Loaded from a flat
// key-value file; unknown keys are errors so typos fail fast.
struct Scenario {
  SystemConfig system;        // pilot powers equal across users
  GeometryParams geometry;
  double ricean_k = 0.0;      // linear; every link gets this value
  McSettings mc;

  // The reference operating point: seven cells, ten users, 500 m cells,
  // 8 dB shadowing, exponent 3.8, 200 m reference distance, 196-symbol
  // blocks with 10 pilots, 30 dB training and 20 dB data SNR, 128 antennas,
  // 6 dB Ricean factor, 100 x 100 averaging.
  static Scenario paper_defaults();
};

// Accepted keys (all optional; unset keys keep the defaults above):
//   cells, users_per_cell, antennas, pilot_symbols, coherence_symbols,
//   pilot_power_db, uplink_power_db, ricean_k_db, antenna_spacing,
//   cell_radius_m, shadow_std_db, pathloss_exponent, reference_distance_m,
//   seed, drops, samples
// Syntax: one `key = value` per line, `#` starts a comment.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// Applies one `key=value` override using the same key set and parsing rules
// as the file format.
void apply_override(Scenario& scenario, std::string_view key,
                    std::string_view value);

// Cross-field checks (delegates to validate_config and checks geometry and
// simulation settings).  Throws ConfigError / ParseError.
void validate_scenario(const Scenario& scenario);

}  // namespace rmimo
