#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hbt/hbt.hpp"

namespace hbt::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3 };

/// Options shared by all subcommands; unset values fall back to defaults.
struct RunConfig {
  double sigma = 0.0;
  double xi = 0.0;
  double chi = 0.0;
  double efficiency = 1.0;
  std::size_t pulses = SimParams::kDefaultPulses;
  std::size_t sidebands = LagWindow::kDefaultSidebands;
  std::uint64_t seed = 1;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t replicates = 8;
  std::vector<std::string> axes;
  bool analytic = false;
  double level = 0.5;
  std::optional<std::int64_t> fock;
  std::string output;
  std::string contour_output;
  std::string streams_output;
  std::string grid_input;

  SimParams params() const { return {sigma, xi, chi, efficiency, pulses}; }
};

namespace detail {

inline std::string slurp_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Expands `--config FILE` into flags. File lines are `key=value`; `#` starts
/// a comment. Keys given explicitly on the command line win, so file entries
/// with the same key are dropped.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> config;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      continue;
    }
    if (args[i].rfind("--", 0) == 0) given.insert(args[i].substr(2, args[i].find('=') - 2));
    out.push_back(args[i]);
  }
  if (!config) return out;

  std::vector<std::string> from_file;
  std::istringstream lines(slurp_config(*config));
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidParameter("config line '" + line + "' is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (given.count(key)) continue;
    if (key == "analytic") {
      if (value == "true" || value == "1") from_file.push_back("--analytic");
      continue;
    }
    from_file.push_back("--" + key);
    from_file.push_back(value);
  }
  // Insert after the subcommand name so the flags bind to it.
  const std::size_t at = out.empty() ? 0 : 1;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), from_file.begin(), from_file.end());
  return out;
}

inline void add_model_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--sigma", cfg.sigma, "noise factor (>= 0)");
  sub.add_option("--xi", cfg.xi, "signal split asymmetry in (-1/2, 1/2)");
  sub.add_option("--chi", cfg.chi, "background split asymmetry in [-1/2, 1/2]");
}

inline void add_run_options(CLI::App& sub, RunConfig& cfg) {
  add_model_options(sub, cfg);
  sub.add_option("--efficiency", cfg.efficiency, "detection quantum efficiency in (0, 1]");
  sub.add_option("--pulses", cfg.pulses, "number of pulse periods N");
  sub.add_option("--sidebands", cfg.sidebands, "pulse periods on each side of zero lag");
  sub.add_option("--seed", cfg.seed, "64-bit seed")->envname("HBT_SEED");
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-")
    out << text;
  else
    csv::write_file(path, text);
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto streams = generate_streams(cfg.params(), cfg.seed);
  const auto result = g2_curve(streams, LagWindow(cfg.sidebands));
  if (!cfg.streams_output.empty()) {
    std::ostringstream s;
    write_streams_csv(s, streams);
    write_text(cfg.streams_output, s.str(), out);
  }
  std::ostringstream text;
  write_correlation_csv(text, result);
  write_text(cfg.output, text.str(), out);
  out << "g2_zero=" << csv::format(result.g2_zero) << " center=" << csv::format(result.center_counts)
      << " sidebands=" << csv::format(result.sideband_mean) << '\n';
  return kOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<AxisSpec> axes;
  for (const auto& a : cfg.axes) axes.push_back(parse_axis(a));
  const SimParams base = cfg.params();
  const SweepGrid grid =
      cfg.analytic ? fill_grid_analytic(axes, base, cfg.level)
                   : run_sweep(axes, base, LagWindow(cfg.sidebands), cfg.replicates, cfg.seed,
                               {.jobs = cfg.jobs, .contour_level = cfg.level});

  for (const auto& f : grid.failures) {
    err << "missing cell (" << f.axis1_index << ", " << f.axis2_index << ") "
        << to_string(grid.axes[0].parameter) << '=' << csv::format(grid.axes[0].value(f.axis1_index));
    if (grid.two_dimensional())
      err << ' ' << to_string(grid.axes[1].parameter) << '='
          << csv::format(grid.axes[1].value(f.axis2_index));
    err << ": " << f.message << '\n';
  }

  std::ostringstream text;
  write_grid_csv(text, grid);
  write_text(cfg.output, text.str(), out);
  if (grid.two_dimensional()) {
    std::ostringstream c;
    write_contour_csv(c, grid.contour);
    write_text(cfg.contour_output, c.str(), out);
    out << "cells=" << grid.cells.size() << " missing=" << grid.failures.size()
        << " polylines=" << grid.contour.size() << '\n';
  } else {
    out << "cells=" << grid.cells.size() << " missing=" << grid.failures.size();
    if (const auto x = first_crossing(grid, cfg.level))
      out << " crossing_" << to_string(grid.axes[0].parameter) << '=' << csv::format(*x);
    out << '\n';
  }
  return kOk;
}

inline int cmd_theory(const RunConfig& cfg, bool model_given, std::ostream& out) {
  if (cfg.fock) out << "fock_g2=" << csv::format(fock_g2(*cfg.fock)) << '\n';
  if (model_given || !cfg.fock)
    out << "analytic_g2_zero=" << csv::format(analytic_g2_zero(cfg.params())) << '\n';
  return kOk;
}

inline int cmd_contour(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.grid_input);
  if (!in) throw IoError("cannot open '" + cfg.grid_input + "' for reading");
  const SweepGrid grid = read_grid_csv(in);
  const auto contour = extract_contour(grid, cfg.level);
  std::ostringstream c;
  write_contour_csv(c, contour);
  write_text(cfg.output, c.str(), out);
  out << "polylines=" << contour.size() << '\n';
  return kOk;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo HBT interferometer: g2(0) of a single photon emitter under detector "
               "noise and asymmetry"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "key=value file; command-line flags override it");

  RunConfig cfg;
  if (const char* jobs = std::getenv("HBT_JOBS")) {
    try {
      cfg.jobs = std::max<std::size_t>(1, std::stoul(jobs));
    } catch (const std::exception&) {
      err << "ignoring malformed HBT_JOBS='" << jobs << "'\n";
    }
  }

  auto* simulate = app.add_subcommand("simulate", "simulate one run and write the g2 curve");
  detail::add_run_options(*simulate, cfg);
  cfg.output = "correlation.csv";
  simulate->add_option("-o,--output", cfg.output, "correlation CSV path ('-' for stdout)");
  simulate->add_option("--streams-output", cfg.streams_output, "optional per-pulse stream dump");

  auto* sweep = app.add_subcommand("sweep", "sweep g2(0) over one or two parameters");
  detail::add_run_options(*sweep, cfg);
  sweep->add_option("--axis", cfg.axes, "name=start:stop:steps (sigma, xi or chi); give 1 or 2")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->expected(1, 2);
  sweep->add_option("--replicates", cfg.replicates, "simulations per cell");
  sweep->add_option("--jobs", cfg.jobs, "worker threads (env HBT_JOBS)");
  sweep->add_flag("--analytic", cfg.analytic, "fill cells with the exact expectation");
  sweep->add_option("--level", cfg.level, "contour level");
  auto* sweep_out = sweep->add_option("-o,--output", "grid CSV path");
  sweep->add_option("--contour-output", cfg.contour_output, "contour CSV path for 2D sweeps");

  auto* theory = app.add_subcommand("theory", "print closed-form g2 values");
  detail::add_model_options(*theory, cfg);
  theory->add_option("--fock", cfg.fock, "photon number n of a Fock state");

  auto* contour = app.add_subcommand("contour", "extract a level contour from a grid CSV");
  contour->add_option("--grid", cfg.grid_input, "grid CSV written by sweep")->required();
  contour->add_option("--level", cfg.level, "contour level");
  auto* contour_out = contour->add_option("-o,--output", "contour CSV path ('-' for stdout)");

  try {
    std::vector<std::string> args = detail::expand_config(raw_args);
    std::vector<const char*> argv{"hbt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (simulate->parsed()) return detail::cmd_simulate(cfg, out);
    if (sweep->parsed()) {
      cfg.output = sweep_out->count() ? sweep_out->as<std::string>() : "grid.csv";
      if (cfg.contour_output.empty()) {
        const auto dot = cfg.output.rfind('.');
        cfg.contour_output = cfg.output == "-" ? "-"
                             : dot == std::string::npos ? cfg.output + "_contour.csv"
                                                        : cfg.output.substr(0, dot) + "_contour.csv";
      }
      return detail::cmd_sweep(cfg, out, err);
    }
    if (theory->parsed()) {
      const bool model_given =
          theory->count("--sigma") + theory->count("--xi") + theory->count("--chi") > 0;
      return detail::cmd_theory(cfg, model_given, out);
    }
    if (contour->parsed()) {
      cfg.output = contour_out->count() ? contour_out->as<std::string>() : "contour.csv";
      return detail::cmd_contour(cfg, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace hbt::cli
