#pragma once

#include "qproj/systems.hpp"
#include "qproj/tableau.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qproj {

enum class RunMode { Full, Descended, Both };

std::string_view to_string(RunMode m);
RunMode parse_run_mode(std::string_view s);

struct RunConfig {
  std::string system = "hopf_rigid_body";
  nlohmann::json parameters = nlohmann::json::object();
  // Builtin name or tableau file path; ignored when `weights` is set.
  std::string method = "midpoint";
  std::optional<Eigen::VectorXd> weights;
  double h = 0.01;
  int steps = 100;
  RunMode mode = RunMode::Descended;
  SolverSettings solver;
  std::uint64_t seed = 1;
  // Explicit full-space initial state; replaces the seeded sample when set.
  std::optional<Eigen::VectorXd> initial_y;
  std::string output;
  bool dump_states = false;

  // Convergence study settings.
  double h0 = 0.1;
  int levels = 4;
  double t_end = 1.0;
};

// Throws ParseError on malformed JSON and InvalidArgument / UnknownName on
// out-of-range or unknown values.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

std::vector<std::string> system_names();
ProjectableSystem make_system(const std::string& name, const nlohmann::json& parameters);

ButcherTableau config_tableau(const RunConfig& cfg);

struct RunRow {
  int step = 0;
  double t = 0.0;
  std::vector<double> diagnostics;
  int stage_iters_max = 0;
  std::optional<double> deviation;
  Eigen::VectorXd state;
};

using RowSink = std::function<void(const RunRow&)>;

// Integrates from F(initial_y) or F(sample_y(seed)) and hands each row to `sink` as soon as it
// is complete. Solver failures propagate with the step index filled in, after
// all earlier rows have been delivered.
TrajectoryRecord run_trajectory(const RunConfig& cfg, const ProjectableSystem& sys,
                                const ButcherTableau& tableau, const RowSink& sink = {});

void write_csv_header(std::ostream& os, const std::vector<std::string>& diagnostic_names,
                      RunMode mode, int state_dim);
void write_csv_row(std::ostream& os, const RunRow& row);

struct ConvergenceLevel {
  double h = 0.0;
  int steps = 0;
  double error = 0.0;
  std::optional<double> order;  // log2(e_{k-1} / e_k), absent on the first level
};

struct ConvergenceReport {
  RunMode mode = RunMode::Descended;
  double reference_h = 0.0;
  std::vector<ConvergenceLevel> levels;
};

// Errors in the projected state at t_end against a run at h0 / 2^(levels + 2).
// SyDIRK methods run descended, anything else in the full space.
ConvergenceReport convergence_study(const ProjectableSystem& sys, const ButcherTableau& tableau,
                                    double h0, int levels, double t_end,
                                    const SolverSettings& settings, std::uint64_t seed);

}  // namespace qproj
