#include "rmimo/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "rmimo/units.hpp"

namespace rmimo {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad numeric value for '" + std::string(key) + "': '" +
                     text + "'");
  }
}

long parse_int(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  long v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("bad integer value for '" + std::string(key) + "': '" +
                     text + "'");
  return v;
}

// Pilot powers are uniform in scenarios; resize keeps overrides of
// cells/users consistent no matter the key order.
void set_uniform_pilots(Scenario& sc, double power) {
  sc.system.pilot_powers = Eigen::MatrixXd::Constant(
      sc.system.cells, sc.system.users_per_cell, power);
}

double uniform_pilot_power(const Scenario& sc) {
  return sc.system.pilot_powers.size() > 0 ? sc.system.pilot_powers(0, 0)
                                           : 1.0;
}

}  // namespace

Scenario Scenario::paper_defaults() {
  Scenario sc;
  sc.system = SystemConfig::with_uniform_pilots(
      /*cells=*/7, /*users_per_cell=*/10, /*antennas=*/128,
      /*pilot_symbols=*/10, /*coherence_symbols=*/196,
      /*uplink_power=*/db_to_linear(20.0), /*pilot_power=*/db_to_linear(30.0));
  sc.geometry = GeometryParams{};  // 500 m, 8 dB, 3.8, 200 m
  sc.ricean_k = db_to_linear(6.0);
  sc.mc.n_small_scale = 100;
  sc.mc.n_large_scale = 100;
  sc.mc.seed = 1;
  return sc;
}

void apply_override(Scenario& sc, std::string_view raw_key,
                    std::string_view raw_value) {
  const std::string key{trim(raw_key)};
  const std::string_view value = trim(raw_value);

  auto positive_int = [&](const char* what) {
    const long v = parse_int(key, value);
    if (v < 1 || v > 1'000'000'000L)
      throw ParseError(std::string(what) + " must be a positive integer");
    return static_cast<int>(v);
  };

  if (key == "cells") {
    sc.system.cells = positive_int("cells");
    set_uniform_pilots(sc, uniform_pilot_power(sc));
  } else if (key == "users_per_cell") {
    sc.system.users_per_cell = positive_int("users_per_cell");
    set_uniform_pilots(sc, uniform_pilot_power(sc));
  } else if (key == "antennas") {
    sc.system.antennas = positive_int("antennas");
  } else if (key == "pilot_symbols") {
    sc.system.pilot_symbols = positive_int("pilot_symbols");
  } else if (key == "coherence_symbols") {
    sc.system.coherence_symbols = positive_int("coherence_symbols");
  } else if (key == "pilot_power_db") {
    set_uniform_pilots(sc, db_to_linear(parse_double(key, value)));
  } else if (key == "uplink_power_db") {
    sc.system.uplink_power = db_to_linear(parse_double(key, value));
  } else if (key == "ricean_k_db") {
    // -inf means no LOS anywhere.
    sc.ricean_k = db_to_linear(parse_double(key, value));
  } else if (key == "antenna_spacing") {
    sc.system.spacing = parse_double(key, value);
  } else if (key == "cell_radius_m") {
    sc.geometry.cell_radius_m = parse_double(key, value);
  } else if (key == "shadow_std_db") {
    sc.geometry.shadow_std_db = parse_double(key, value);
  } else if (key == "pathloss_exponent") {
    sc.geometry.pathloss_exponent = parse_double(key, value);
  } else if (key == "reference_distance_m") {
    sc.geometry.reference_distance_m = parse_double(key, value);
  } else if (key == "seed") {
    const long v = parse_int(key, value);
    if (v < 0) throw ParseError("seed must be >= 0");
    sc.mc.seed = static_cast<std::uint64_t>(v);
  } else if (key == "drops") {
    sc.mc.n_large_scale = positive_int("drops");
  } else if (key == "samples") {
    sc.mc.n_small_scale = positive_int("samples");
  } else {
    throw ParseError("unknown scenario key '" + key + "'");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc = Scenario::paper_defaults();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    try {
      apply_override(sc, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void validate_scenario(const Scenario& sc) {
  validate_config(sc.system);
  std::vector<ConfigViolation> violations;
  if (!(sc.geometry.cell_radius_m > 0))
    violations.push_back({ConfigFault::dimension, "cell_radius_m must be > 0"});
  if (!(sc.geometry.reference_distance_m > 0))
    violations.push_back(
        {ConfigFault::dimension, "reference_distance_m must be > 0"});
  if (sc.geometry.shadow_std_db < 0)
    violations.push_back({ConfigFault::power, "shadow_std_db must be >= 0"});
  if (sc.geometry.pathloss_exponent <= 0)
    violations.push_back(
        {ConfigFault::power, "pathloss_exponent must be > 0"});
  if (sc.ricean_k < 0)
    violations.push_back({ConfigFault::power, "ricean_k must be >= 0"});
  if (sc.mc.n_small_scale < 2)
    violations.push_back({ConfigFault::dimension, "samples must be >= 2"});
  if (sc.mc.n_large_scale < 1)
    violations.push_back({ConfigFault::dimension, "drops must be >= 1"});
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

}  // namespace rmimo
