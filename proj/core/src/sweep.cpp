#include "rmimo/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rmimo/analytics.hpp"
#include "rmimo/monte_carlo.hpp"
#include "rmimo/svg_plot.hpp"
#include "rmimo/units.hpp"

namespace rmimo {
namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    std::string s(item);
    if (s == "-inf") {
      values.push_back(-std::numeric_limits<double>::infinity());
    } else {
      try {
        size_t used = 0;
        values.push_back(std::stod(s, &used));
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ParseError("bad sweep value '" + s + "'");
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return values;
}

std::vector<double> parse_range(std::string_view text) {
  // start:stop:step, inclusive of stop when it lands on the grid.
  std::vector<double> parts;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = text.find(':', pos);
    if ((i < 2) == (colon == std::string_view::npos))
      throw ParseError("range sweep must be start:stop:step");
    const std::string_view item = text.substr(
        pos, colon == std::string_view::npos ? std::string_view::npos
                                             : colon - pos);
    std::string s(item);
    try {
      size_t used = 0;
      parts.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ParseError("bad range bound '" + s + "'");
    }
    pos = colon == std::string_view::npos ? text.size() : colon + 1;
  }
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0)) throw ParseError("range step must be > 0");
  if (stop < start) throw ParseError("range stop must be >= start");
  std::vector<double> values;
  for (double v = start; v <= stop + 1e-9 * step; v += step)
    values.push_back(v);
  return values;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ParseError("sweep must be AXIS=values, e.g. M=64,128,256");
  std::string axis(text.substr(0, eq));
  const std::string_view values = text.substr(eq + 1);

  SweepSpec spec;
  if (axis == "M") {
    spec.axis = SweepAxis::antennas;
  } else if (axis == "KdB" || axis == "K_dB") {
    spec.axis = SweepAxis::ricean_k_db;
  } else {
    throw ParseError("unknown sweep axis '" + axis + "' (use M or KdB)");
  }

  spec.points = values.find(':') != std::string_view::npos
                    ? parse_range(values)
                    : parse_value_list(values);
  if (spec.points.empty()) throw ParseError("sweep needs at least one point");
  for (std::size_t i = 1; i < spec.points.size(); ++i)
    if (!(spec.points[i] > spec.points[i - 1]))
      throw ParseError("sweep points must be strictly increasing");

  if (spec.axis == SweepAxis::antennas) {
    for (double p : spec.points) {
      if (!(p >= 1) || p != std::floor(p) || p > 1e9)
        throw ParseError("antenna counts must be positive integers");
    }
  }
  return spec;
}

SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec,
                      int workers) {
  validate_scenario(scenario);
  if (spec.points.empty()) throw ParseError("sweep needs at least one point");
  if (spec.estimators.empty())
    throw ParseError("sweep needs at least one estimator");
  if (workers < 1) workers = 1;

  const int drops = scenario.mc.n_large_scale;
  const std::uint64_t root = scenario.mc.seed;
  const CellLayout layout = build_hex_layout(scenario.system.cells,
                                             scenario.geometry.cell_radius_m);

  // One geometry per drop, drawn once and shared by every axis point; the
  // axis only changes the antenna count or the Ricean factor.
  std::vector<LargeScaleRealization> drops_ls;
  std::vector<std::uint64_t> drop_seeds;
  drops_ls.reserve(drops);
  drop_seeds.reserve(drops);
  for (int d = 0; d < drops; ++d) {
    const std::uint64_t drop_seed = derive_seed(root, d);
    RandomStream geometry_rng = split_stream(drop_seed, 0);
    const UserDrop users = drop_users(
        layout, scenario.system.users_per_cell, geometry_rng);
    drops_ls.push_back(realize_large_scale(
        scenario.system, layout, users, scenario.geometry,
        ConstantKPolicy{scenario.ricean_k}, geometry_rng));
    drop_seeds.push_back(drop_seed);
  }

  const int users = scenario.system.users_per_cell;
  const int coherence = scenario.system.coherence_symbols;
  const int pilots = scenario.system.pilot_symbols;
  auto se_of = [&](double sinr) {
    return spectral_efficiency(sinr, coherence, pilots);
  };

  SweepResult result;
  result.spec = spec;
  result.axis_label =
      spec.axis == SweepAxis::antennas ? "M" : "K_dB";
  result.drops = drops;

  // Asymptotes do not move along the axis (the large-M limit has no M in
  // it; the strong-LOS limit has no K): one drop-averaged value per
  // estimator, repeated on every row of its curve.
  std::vector<std::optional<double>> asymptote(spec.estimators.size());
  if (spec.include_asymptotes) {
    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
      const EstimatorKind kind = spec.estimators[e];
      double total = 0.0;
      bool exists = true;
      for (int d = 0; d < drops && exists; ++d) {
        double sum = 0.0;
        for (int u = 0; u < users && exists; ++u) {
          try {
            const double limit =
                spec.axis == SweepAxis::antennas
                    ? sinr_limit_large_m(scenario.system, drops_ls[d], 0, u,
                                         kind)
                    : sinr_limit_large_k(scenario.system, drops_ls[d], 0, u,
                                         kind);
            sum += se_of(limit);
          } catch (const UnboundedLimit&) {
            exists = false;
          }
        }
        total += sum;
      }
      if (exists) asymptote[e] = total / drops;
    }
  }

  for (double point : spec.points) {
    SystemConfig config = scenario.system;
    if (spec.axis == SweepAxis::antennas)
      config.antennas = static_cast<int>(point);

    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
      const EstimatorKind kind = spec.estimators[e];
      double closed_total = 0.0;
      double emp_total = 0.0;
      double emp_var_total = 0.0;

      for (int d = 0; d < drops; ++d) {
        LargeScaleRealization ls = drops_ls[d];
        if (spec.axis == SweepAxis::ricean_k_db)
          ls.ricean_k.setConstant(db_to_linear(point));

        double closed_sum = 0.0;
        for (int u = 0; u < users; ++u)
          closed_sum += se_of(sinr_closed(config, ls, 0, u, kind));
        closed_total += closed_sum;

        if (spec.include_monte_carlo) {
          McSettings settings = scenario.mc;
          settings.seed = derive_seed(drop_seeds[d], 1);
          settings.parallelism = workers;
          const EmpiricalSinr emp =
              estimate_sinr_empirical(config, ls, 0, kind, settings);
          double sum = 0.0;
          double var = 0.0;
          for (int u = 0; u < users; ++u) {
            sum += se_of(emp.sinr[u]);
            // First-order error propagation through log2(1 + x).
            const double slope =
                (1.0 - static_cast<double>(pilots) / coherence) /
                ((1.0 + emp.sinr[u]) * std::numbers::ln2);
            var += slope * slope * emp.std_error[u] * emp.std_error[u];
          }
          emp_total += sum;
          emp_var_total += var;
        }
      }

      ResultRow row;
      row.axis_value = point;
      row.estimator = kind;
      row.sum_se_closed = closed_total / drops;
      if (spec.include_monte_carlo) {
        row.sum_se_empirical = emp_total / drops;
        row.sum_se_std_error = std::sqrt(emp_var_total) / drops;
      }
      row.sum_se_asymptote = asymptote[e];
      row.seed = root;
      result.rows.push_back(row);
    }
  }
  return result;
}

std::string csv_header() {
  return "axis,axis_value,estimator,sum_se_closed,sum_se_empirical,"
         "sum_se_std_error,sum_se_asymptote,seed";
}

std::string to_csv(const SweepResult& result) {
  std::string out = csv_header();
  out.push_back('\n');
  for (const ResultRow& row : result.rows) {
    out += result.axis_label;
    out.push_back(',');
    out += format_double(row.axis_value);
    out.push_back(',');
    out += estimator_name(row.estimator);
    out.push_back(',');
    out += format_double(row.sum_se_closed);
    out.push_back(',');
    if (row.sum_se_empirical) out += format_double(*row.sum_se_empirical);
    out.push_back(',');
    if (row.sum_se_std_error) out += format_double(*row.sum_se_std_error);
    out.push_back(',');
    if (row.sum_se_asymptote) out += format_double(*row.sum_se_asymptote);
    out.push_back(',');
    out += std::to_string(row.seed);
    out.push_back('\n');
  }
  return out;
}

SweepOutputs write_sweep_outputs(const SweepResult& result,
                                 const Scenario& scenario,
                                 const std::filesystem::path& out_dir,
                                 const std::string& tag) {
  std::filesystem::create_directories(out_dir);
  SweepOutputs paths;
  paths.csv = out_dir / ("sweep_" + tag + ".csv");
  paths.svg = out_dir / ("sweep_" + tag + ".svg");
  paths.meta = out_dir / ("sweep_" + tag + ".meta");

  {
    std::ofstream csv(paths.csv, std::ios::binary);
    if (!csv) throw Error("cannot write " + paths.csv.string());
    csv << to_csv(result);
  }

  {
    PlotSpec plot;
    plot.title = "Uplink sum spectral efficiency";
    plot.x_label = result.axis_label == "M" ? "antennas M"
                                            : "Ricean factor K [dB]";
    plot.y_label = "sum SE [bit/s/Hz]";

    for (EstimatorKind kind : result.spec.estimators) {
      PlotSeries closed;
      closed.label = std::string(estimator_name(kind)) + " closed form";
      closed.color = kind == EstimatorKind::ls ? "#1f77b4" : "#d62728";
      closed.dashed = kind == EstimatorKind::ls;
      PlotSeries emp;
      emp.label = std::string(estimator_name(kind)) + " simulation";
      emp.color = closed.color;
      emp.markers = true;

      std::optional<double> hline;
      for (const ResultRow& row : result.rows) {
        if (row.estimator != kind) continue;
        if (!std::isfinite(row.axis_value)) continue;  // -inf has no x pixel
        closed.x.push_back(row.axis_value);
        closed.y.push_back(row.sum_se_closed);
        if (row.sum_se_empirical) {
          emp.x.push_back(row.axis_value);
          emp.y.push_back(*row.sum_se_empirical);
          emp.yerr.push_back(row.sum_se_std_error.value_or(0.0));
        }
        if (row.sum_se_asymptote) hline = *row.sum_se_asymptote;
      }
      plot.series.push_back(std::move(closed));
      if (!emp.x.empty()) plot.series.push_back(std::move(emp));
      if (hline) {
        plot.hlines.push_back(
            {*hline, std::string(estimator_name(kind)) + " limit",
             kind == EstimatorKind::ls ? "#7293b8" : "#c98a8a"});
      }
    }
    write_svg(paths.svg, plot);
  }

  {
    std::ofstream meta(paths.meta);
    if (!meta) throw Error("cannot write " + paths.meta.string());
    const auto now = std::chrono::system_clock::now();
    const std::time_t now_t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&now_t));
    meta << "generated_at = " << stamp << "\n";
    meta << "axis = " << result.axis_label << "\n";
    meta << "points = " << result.spec.points.size() << "\n";
    meta << "drops = " << result.drops << "\n";
    meta << "samples_per_drop = " << scenario.mc.n_small_scale << "\n";
    meta << "monte_carlo = "
         << (result.spec.include_monte_carlo ? "yes" : "no") << "\n";
    meta << "asymptotes = "
         << (result.spec.include_asymptotes ? "yes" : "no") << "\n";
    meta << "seed = " << scenario.mc.seed << "\n";
    meta << "cells = " << scenario.system.cells << "\n";
    meta << "users_per_cell = " << scenario.system.users_per_cell << "\n";
    meta << "antennas = " << scenario.system.antennas << "\n";
    meta << "pilot_symbols = " << scenario.system.pilot_symbols << "\n";
    meta << "coherence_symbols = " << scenario.system.coherence_symbols << "\n";
    meta << "uplink_power_db = "
         << format_double(linear_to_db(scenario.system.uplink_power)) << "\n";
    meta << "pilot_power_db = "
         << format_double(linear_to_db(scenario.system.pilot_powers(0, 0)))
         << "\n";
    meta << "ricean_k_db = " << format_double(linear_to_db(scenario.ricean_k))
         << "\n";
    meta << "cell_radius_m = " << format_double(scenario.geometry.cell_radius_m)
         << "\n";
    meta << "shadow_std_db = "
         << format_double(scenario.geometry.shadow_std_db) << "\n";
    meta << "pathloss_exponent = "
         << format_double(scenario.geometry.pathloss_exponent) << "\n";
    meta << "reference_distance_m = "
         << format_double(scenario.geometry.reference_distance_m) << "\n";
  }
  return paths;
}

}  // namespace rmimo
