// Command-line front end: `run` evaluates sweeps into CSV/SVG artifacts,
// `validate` executes the self-check suites against a scenario.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmimo/channel.hpp"
#include "rmimo/scenario.hpp"
#include "rmimo/svg_plot.hpp"
#include "rmimo/sweep.hpp"
#include "rmimo/units.hpp"
#include "rmimo/validate.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("RMIMO_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid RMIMO_WORKERS='" << env << "'\n";
  }
  return 1;
}

struct ScenarioArgs {
  std::string path;
  bool paper_defaults = false;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

rmimo::Scenario resolve_scenario(const ScenarioArgs& args) {
  if (args.path.empty() && !args.paper_defaults)
    throw rmimo::ParseError(
        "provide a scenario file or pass --paper-defaults");
  if (!args.path.empty() && args.paper_defaults)
    throw rmimo::ParseError(
        "a scenario file and --paper-defaults are mutually exclusive");

  rmimo::Scenario scenario = args.paper_defaults
                                 ? rmimo::Scenario::paper_defaults()
                                 : rmimo::load_scenario(args.path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw rmimo::ParseError("--set expects key=value, got '" + kv + "'");
    rmimo::apply_override(scenario, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed) scenario.mc.seed = *args.seed;
  rmimo::validate_scenario(scenario);
  return scenario;
}

std::vector<rmimo::EstimatorKind> parse_estimators(const std::string& text) {
  std::vector<rmimo::EstimatorKind> kinds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item == "ls") {
      kinds.push_back(rmimo::EstimatorKind::ls);
    } else if (item == "mmse") {
      kinds.push_back(rmimo::EstimatorKind::mmse);
    } else {
      throw rmimo::ParseError("unknown estimator '" + item +
                              "' (use ls, mmse)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (kinds.empty()) throw rmimo::ParseError("--estimators needs a value");
  return kinds;
}

std::string family_tag(rmimo::SweepAxis axis, double value) {
  std::string v;
  if (std::isinf(value) && value < 0) {
    v = "-inf";
  } else if (value == static_cast<long long>(value)) {
    v = std::to_string(static_cast<long long>(value));
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    v = buf;
  }
  return axis == rmimo::SweepAxis::antennas ? "M" + v : "K" + v + "dB";
}

void apply_family_value(rmimo::Scenario& scenario, rmimo::SweepAxis axis,
                        double value) {
  if (axis == rmimo::SweepAxis::antennas)
    scenario.system.antennas = static_cast<int>(value);
  else
    scenario.ricean_k = rmimo::db_to_linear(value);
}

void dump_first_realization(const rmimo::Scenario& scenario,
                            const std::string& path) {
  const rmimo::CellLayout layout = rmimo::build_hex_layout(
      scenario.system.cells, scenario.geometry.cell_radius_m);
  const std::uint64_t drop_seed = rmimo::derive_seed(scenario.mc.seed, 0);
  rmimo::RandomStream geometry_rng = rmimo::split_stream(drop_seed, 0);
  const rmimo::UserDrop users = rmimo::drop_users(
      layout, scenario.system.users_per_cell, geometry_rng);
  const rmimo::LargeScaleRealization ls = rmimo::realize_large_scale(
      scenario.system, layout, users, scenario.geometry,
      rmimo::ConstantKPolicy{scenario.ricean_k}, geometry_rng);
  rmimo::RandomStream sample_rng =
      rmimo::split_stream(rmimo::derive_seed(drop_seed, 1), 1);
  const rmimo::ChannelRealization ch =
      rmimo::draw_channel(scenario.system, ls, 0, sample_rng);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rmimo::Error("cannot write " + path);
  rmimo::write_channel_dump(out, ch);
  std::cout << "wrote " << path << "\n";
}

int run_command(const ScenarioArgs& scenario_args,
                const std::string& sweep_text, const std::string& family_text,
                const std::string& out_dir, bool with_mc, bool with_asymptotes,
                const std::string& estimators_text, int workers,
                const std::string& dump_path) {
  rmimo::Scenario base = resolve_scenario(scenario_args);
  rmimo::SweepSpec spec = rmimo::parse_sweep_spec(sweep_text);
  spec.include_monte_carlo = with_mc;
  spec.include_asymptotes = with_asymptotes;
  if (!estimators_text.empty())
    spec.estimators = parse_estimators(estimators_text);

  if (!dump_path.empty()) dump_first_realization(base, dump_path);

  std::vector<std::pair<std::string, rmimo::SweepResult>> results;
  if (family_text.empty()) {
    const std::string tag =
        spec.axis == rmimo::SweepAxis::antennas ? "M" : "KdB";
    results.emplace_back(tag, rmimo::run_sweep(base, spec, workers));
  } else {
    const rmimo::SweepSpec family = rmimo::parse_sweep_spec(family_text);
    if (family.axis == spec.axis)
      throw rmimo::ParseError(
          "--family must vary a different axis than --sweep");
    for (double value : family.points) {
      rmimo::Scenario member = base;
      apply_family_value(member, family.axis, value);
      const std::string tag =
          (spec.axis == rmimo::SweepAxis::antennas ? "M_" : "KdB_") +
          family_tag(family.axis, value);
      results.emplace_back(tag, rmimo::run_sweep(member, spec, workers));
    }
  }

  for (const auto& [tag, result] : results) {
    const rmimo::SweepOutputs paths =
        rmimo::write_sweep_outputs(result, base, out_dir, tag);
    std::cout << "wrote " << paths.csv.string() << "\n";
    std::cout << "wrote " << paths.svg.string() << "\n";
    std::cout << "wrote " << paths.meta.string() << "\n";
  }

  if (results.size() > 1) {
    // All families on one canvas, one color per family member.
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    rmimo::PlotSpec figure;
    figure.title = "Uplink sum spectral efficiency";
    figure.x_label = results.front().second.axis_label == "M"
                         ? "antennas M"
                         : "Ricean factor K [dB]";
    figure.y_label = "sum SE [bit/s/Hz]";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& [tag, result] = results[i];
      const std::string family_label = tag.substr(tag.find('_') + 1);
      for (rmimo::EstimatorKind kind : result.spec.estimators) {
        rmimo::PlotSeries s;
        s.label = std::string(rmimo::estimator_name(kind)) + " " +
                  family_label;
        s.color = palette[i % 6];
        s.dashed = kind == rmimo::EstimatorKind::ls;
        for (const rmimo::ResultRow& row : result.rows) {
          if (row.estimator != kind || !std::isfinite(row.axis_value))
            continue;
          s.x.push_back(row.axis_value);
          s.y.push_back(row.sum_se_closed);
        }
        figure.series.push_back(std::move(s));
      }
    }
    const std::filesystem::path figure_path =
        std::filesystem::path(out_dir) /
        ("figure_" + results.front().second.axis_label + ".svg");
    rmimo::write_svg(figure_path, figure);
    std::cout << "wrote " << figure_path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Uplink spectral-efficiency workbench: closed-form analytics with a "
      "seeded simulation oracle"};
  app.require_subcommand(1);

  ScenarioArgs scenario_args;
  std::uint64_t seed_value = 0;

  auto add_scenario_options = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_args.path, "Scenario file");
    cmd->add_flag("--paper-defaults", scenario_args.paper_defaults,
                  "Use the built-in reference operating point");
    cmd->add_option("--set", scenario_args.overrides,
                    "Override a scenario key (key=value, repeatable)");
    cmd->add_option("--seed", seed_value, "Override the scenario seed")
        ->each([&](const std::string&) { scenario_args.seed = seed_value; });
  };

  int workers = default_workers();

  auto* run = app.add_subcommand("run", "Run a sweep and write CSV/SVG");
  add_scenario_options(run);
  std::string sweep_text, family_text, out_dir, estimators_text, dump_path;
  bool with_mc = false, with_asymptotes = false;
  run->add_option("--sweep", sweep_text,
                  "Axis spec: M=64,128,256 | M=50:500:50 | KdB=-inf,0,10")
      ->required();
  run->add_option("--family", family_text,
                  "Secondary axis: one full sweep per value");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--mc", with_mc, "Also run the simulation oracle");
  run->add_flag("--asymptotes", with_asymptotes,
                "Also evaluate the matching asymptotic limits");
  run->add_option("--estimators", estimators_text,
                  "Comma list of estimators (default ls,mmse)");
  run->add_option("--workers", workers,
                  "Worker threads (default $RMIMO_WORKERS or 1)");
  run->add_option("--dump-channels", dump_path,
                  "Write one binary channel realization to this file");

  auto* validate = app.add_subcommand("validate", "Run a self-check suite");
  add_scenario_options(validate);
  std::string suite_name;
  validate->add_option("--suite", suite_name,
                       "identities | oracle | moments | asymptotes")
      ->required();
  validate->add_option("--workers", workers,
                       "Worker threads (default $RMIMO_WORKERS or 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(scenario_args, sweep_text, family_text, out_dir,
                         with_mc, with_asymptotes, estimators_text, workers,
                         dump_path);
    }
    const rmimo::Scenario scenario = resolve_scenario(scenario_args);
    const rmimo::ValidationReport report = rmimo::run_validation(
        scenario, rmimo::parse_suite_name(suite_name), workers);
    rmimo::print_report(std::cout, report);
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
