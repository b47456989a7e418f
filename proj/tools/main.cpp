#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pumptrack/config.hpp"
#include "pumptrack/csv.hpp"
#include "pumptrack/mocap.hpp"
#include "pumptrack/ocp.hpp"
#include "pumptrack/simulate.hpp"

namespace {

using namespace pumptrack;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

ScenarioConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return default_config();
  return load_config(config_path);
}

std::vector<double> load_controls(const std::string& path) {
  const CsvTable t = load_csv(path);
  const int col = t.column_index("u");
  if (col < 0) throw parse_error(path + ": no 'u' column");
  std::vector<double> u;
  u.reserve(t.rows.size());
  for (const auto& row : t.rows) u.push_back(row[col]);
  return u;
}

void write_controls(const std::string& path, const std::vector<double>& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "u\n";
  for (double v : u) os << fmt15(v) << "\n";
}

void print_trajectory_stats(const Scenario& sc, const Trajectory& traj, bool verbose) {
  std::cout << "terminal_phi = " << fmt15(traj.states.back().phi) << "\n";
  try {
    std::cout << "delta_v_curve1 = " << fmt15(speed_gain(traj, 0.0, pi)) << "\n";
  } catch (const phi_not_reached_error&) {
    std::cout << "delta_v_curve1 = n/a (phi = pi not reached)\n";
  }
  std::cout << "energy_drift = " << fmt15(energy_drift(traj)) << "\n";
  if (verbose && traj.control_bound_violations > 0)
    std::cout << "warning: " << traj.control_bound_violations
              << " control sample(s) outside the u-bounds\n";
  (void)sc;
}

int cmd_simulate(const std::string& config_path, const std::string& controls_path,
                 const std::string& out_path, bool verbose) {
  const ScenarioConfig cfg = load_or_default(config_path);
  const std::vector<double> u = load_controls(controls_path);
  const Trajectory traj = rollout(cfg.scenario, u);
  if (!out_path.empty()) traj.write_csv_file(out_path);
  print_trajectory_stats(cfg.scenario, traj, verbose);
  return kExitOk;
}

int cmd_optimize(const std::string& config_path, const std::string& out_dir, bool verbose) {
  const ScenarioConfig cfg = load_or_default(config_path);
  OcpProblem problem{cfg.scenario, cfg.solver};

  const auto t0 = std::chrono::steady_clock::now();
  const OcpSolution sol = solve(problem);
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_controls(in_dir("u_star.csv"), sol.controls);
  sol.trajectory.write_csv_file(in_dir("trajectory.csv"));

  std::ostringstream summary;
  summary << "objective = " << fmt15(sol.objective) << "\n";
  summary << "iterations = " << sol.iterations << "\n";
  summary << "outer_iterations = " << sol.outer_iterations << "\n";
  summary << "converged = " << (sol.converged ? "true" : "false") << "\n";
  summary << "constraint_violation = " << fmt15(sol.constraint_violation) << "\n";
  double dv = std::numeric_limits<double>::quiet_NaN();
  try {
    dv = speed_gain(sol.trajectory, 0.0, pi);
  } catch (const phi_not_reached_error&) {
  }
  summary << "delta_v_curve1 = " << fmt15(dv) << "\n";
  summary << "terminal_phi = " << fmt15(sol.trajectory.states.back().phi) << "\n";
  summary << "wall_time_s = " << fmt15(wall_s) << "\n";
  {
    std::ofstream os(in_dir("summary.txt"));
    if (!os) throw std::runtime_error("cannot open for writing: " + in_dir("summary.txt"));
    os << summary.str();
  }
  std::cout << summary.str();
  if (verbose)
    std::cout << "artifacts written to " << out_dir << "\n";
  return sol.converged ? kExitOk : kExitNotConverged;
}

int cmd_coast(const std::string& config_path, std::optional<double> l_value, bool sweep,
              double target, bool verbose) {
  const ScenarioConfig cfg = load_or_default(config_path);
  const Scenario& sc = cfg.scenario;

  std::vector<std::pair<std::string, double>> cases;
  if (sweep) {
    cases.emplace_back("l_min", sc.bounds.l_min);
    cases.emplace_back("l_mid", 0.5 * (sc.bounds.l_min + sc.bounds.l_max));
    cases.emplace_back("l_max", sc.bounds.l_max);
  } else if (l_value) {
    cases.emplace_back("l", *l_value);
  } else {
    std::cerr << "coast: need --l VALUE or --sweep\n";
    return kExitInputError;
  }

  int successes = 0;
  for (const auto& [name, l] : cases) {
    try {
      const double t = coast_time_to(sc, target, l);
      std::cout << name << " = " << fmt15(l) << " -> t = " << fmt15(t) << " s\n";
      ++successes;
    } catch (const horizon_exceeded_error& e) {
      std::cout << name << " = " << fmt15(l) << " -> " << e.what() << "\n";
    }
  }
  if (verbose) std::cout << "target phi = " << fmt15(target) << "\n";
  return successes > 0 ? kExitOk : kExitInputError;
}

int cmd_bounds(const std::string& l_path, const std::string& a_path,
               const std::string& write_config, const std::string& config_path,
               bool verbose) {
  ScalarSeries l;
  // Scalar "t,<name>" series or the two-point com/ref format.
  try {
    l = load_scalar_series(l_path);
  } catch (const parse_error&) {
    const TwoPointSeries two = load_two_point_series(l_path);
    l = distance_series(two.com, two.ref, two.sample_rate);
  }

  ScalarSeries a;
  if (!a_path.empty()) {
    a = load_scalar_series(a_path);
  } else {
    if (verbose) std::cout << "no acceleration series given; differentiating l\n";
    a = accel_series(l);
  }

  const Bounds b = extract_bounds(l, a);
  std::cout << "l_min = " << fmt15(b.l_min) << "\n";
  std::cout << "l_max = " << fmt15(b.l_max) << "\n";
  std::cout << "u_min = " << fmt15(b.u_min) << "\n";
  std::cout << "u_max = " << fmt15(b.u_max) << "\n";

  if (!write_config.empty()) {
    ScenarioConfig cfg = default_config();
    if (std::filesystem::exists(write_config)) {
      cfg = load_config(write_config);
    } else if (!config_path.empty()) {
      cfg = load_config(config_path);
    }
    merge_bounds(cfg, b);
    save_config(cfg, write_config);
    if (verbose) std::cout << "bounds merged into " << write_config << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mass bike-rider model on a banked pump-track surface: "
               "simulation, optimal pumping input, and experiment-derived bounds"};
  app.require_subcommand(1);

  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "scenario config file (defaults if omitted)");
  app.add_flag("--verbose", verbose, "chatty output");

  auto* sim = app.add_subcommand("simulate", "roll out a control sequence");
  std::string controls_path, sim_out;
  sim->add_option("--controls", controls_path, "CSV with a 'u' column of length N")
      ->required();
  sim->add_option("--out", sim_out, "trajectory CSV output path");

  auto* opt = app.add_subcommand("optimize", "solve for the optimal pumping input");
  std::string opt_out = "out";
  opt->add_option("--out", opt_out, "output directory");

  auto* coast = app.add_subcommand("coast", "zero-input time to reach a target phi");
  std::optional<double> coast_l;
  bool coast_sweep = false;
  double coast_target = 0.0;
  coast->add_option("--l", coast_l, "fixed link length [m]");
  coast->add_flag("--sweep", coast_sweep, "evaluate l_min, midpoint, l_max");
  coast->add_option("--target", coast_target, "target phi [rad]")->required();

  auto* bounds = app.add_subcommand("bounds", "extract l/u bounds from measured series");
  std::string l_path, a_path, write_config;
  bounds->add_option("--l-series", l_path, "distance series CSV (t,l) or two-point CSV")
      ->required();
  bounds->add_option("--a-series", a_path, "acceleration series CSV (t,a)");
  bounds->add_option("--write-config", write_config, "merge bounds into this config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, controls_path, sim_out, verbose);
    if (opt->parsed()) return cmd_optimize(config_path, opt_out, verbose);
    if (coast->parsed())
      return cmd_coast(config_path, coast_l, coast_sweep, coast_target, verbose);
    if (bounds->parsed())
      return cmd_bounds(l_path, a_path, write_config, config_path, verbose);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
