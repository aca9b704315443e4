#include "qproj/runner.hpp"

#include "qproj/error.hpp"
#include "qproj/format.hpp"
#include "qproj/stage_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qproj {

using nlohmann::json;

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Full: return "full";
    case RunMode::Descended: return "descended";
    case RunMode::Both: return "both";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view s) {
  if (s == "full") return RunMode::Full;
  if (s == "descended") return RunMode::Descended;
  if (s == "both") return RunMode::Both;
  throw UnknownName("mode " + std::string(s));
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

SolverStrategy parse_strategy(const std::string& s) {
  if (s == "fixed_point") return SolverStrategy::FixedPoint;
  if (s == "newton_fallback") return SolverStrategy::NewtonFallback;
  throw UnknownName("solver strategy " + s);
}

Vec sample_initial(const ProjectableSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sys.sample_y(rng);
}

std::vector<int> sydirk_order(const ButcherTableau& tableau) {
  const TableauClassification c = classify(tableau);
  if (c.kind != TableauClass::SyDIRK) {
    throw InvalidArgument("descended integration needs a SyDIRK tableau, got " +
                          std::string(to_string(c.kind)));
  }
  return *c.dirk_permutation;
}

int max_iters(const std::vector<int>& iters) {
  int m = 0;
  for (int k : iters) m = std::max(m, k);
  return m;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  RunConfig cfg;
  if (j.contains("system")) {
    const json& s = j.at("system");
    if (s.is_string()) {
      cfg.system = s.get<std::string>();
    } else if (s.is_object()) {
      cfg.system = get_or<std::string>(s, "name", cfg.system);
      if (s.contains("parameters")) cfg.parameters = s.at("parameters");
    } else {
      throw ParseError("'system' must be a name or an object");
    }
  }
  if (j.contains("method")) {
    const json& m = j.at("method");
    if (m.is_string()) {
      cfg.method = m.get<std::string>();
    } else if (m.is_object() && m.contains("b")) {
      const auto b = get_or<std::vector<double>>(m, "b", {});
      cfg.weights = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    } else {
      throw ParseError("'method' must be a tableau name/path or {\"b\": [...]}");
    }
  }
  cfg.h = get_or(j, "h", cfg.h);
  cfg.steps = get_or(j, "steps", cfg.steps);
  if (j.contains("mode")) cfg.mode = parse_run_mode(get_or<std::string>(j, "mode", ""));
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    cfg.solver.tol = get_or(s, "tol", cfg.solver.tol);
    cfg.solver.max_iter = get_or(s, "max_iter", cfg.solver.max_iter);
    if (s.contains("strategy")) cfg.solver.strategy = parse_strategy(get_or<std::string>(s, "strategy", ""));
  }
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  if (j.contains("initial_y")) {
    const auto y = get_or<std::vector<double>>(j, "initial_y", {});
    cfg.initial_y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  }
  cfg.output = get_or(j, "output", cfg.output);
  cfg.dump_states = get_or(j, "dump_states", cfg.dump_states);
  if (j.contains("convergence")) {
    const json& c = j.at("convergence");
    cfg.h0 = get_or(c, "h0", cfg.h0);
    cfg.levels = get_or(c, "levels", cfg.levels);
    cfg.t_end = get_or(c, "t_end", cfg.t_end);
  }

  if (!(cfg.h > 0) || !std::isfinite(cfg.h)) throw InvalidArgument("h must be positive");
  if (cfg.steps < 0) throw InvalidArgument("steps must be nonnegative");
  if (!(cfg.solver.tol > 0) || cfg.solver.max_iter < 1) throw InvalidArgument("invalid solver settings");
  if (!(cfg.h0 > 0) || !(cfg.t_end > 0)) throw InvalidArgument("h0 and t_end must be positive");
  if (cfg.levels < 3) throw InvalidArgument("convergence needs at least 3 levels");
  const auto names = system_names();
  if (std::find(names.begin(), names.end(), cfg.system) == names.end()) throw UnknownName(cfg.system);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::vector<std::string> system_names() {
  return {"matrix_lie_poisson", "hopf_rigid_body", "octonion_flow", "semidirect_mhd",
          "general_matrix_flow", "zeitlin_ns"};
}

ProjectableSystem make_system(const std::string& name, const json& p) {
  const json params = p.is_null() ? json::object() : p;
  if (name == "matrix_lie_poisson") {
    const int n = get_or(params, "n", 3);
    if (n < 2) throw InvalidArgument("n must be at least 2");
    return matrix_lie_poisson(n, weighted_gradient(n), weighted_energy(n));
  }
  if (name == "hopf_rigid_body") {
    const auto inertia = get_or<std::vector<double>>(params, "inertia", {1.0, 2.0, 3.0});
    if (inertia.size() != 3) throw InvalidArgument("inertia needs three components");
    return hopf_rigid_body(Eigen::Vector3d(inertia[0], inertia[1], inertia[2]));
  }
  if (name == "octonion_flow") return octonion_flow(default_octonion_coefficient());
  if (name == "semidirect_mhd") {
    const int n = get_or(params, "n", 3);
    if (n < 2) throw InvalidArgument("n must be at least 2");
    return semidirect_mhd(n);
  }
  if (name == "general_matrix_flow") {
    const int n = get_or(params, "n", 4);
    if (n < 2) throw InvalidArgument("n must be at least 2");
    return general_matrix_flow(n, default_matrix_flow(n));
  }
  if (name == "zeitlin_ns") {
    const int n = get_or(params, "n", 8);
    const double nu = get_or(params, "nu", 0.0);
    if (n < 2 || !(nu >= 0)) throw InvalidArgument("zeitlin_ns needs n >= 2 and nu >= 0");
    return zeitlin_ns(n, nu);
  }
  throw UnknownName(name);
}

ButcherTableau config_tableau(const RunConfig& cfg) {
  if (cfg.weights) return make_sydirk(*cfg.weights);
  return resolve_tableau(cfg.method);
}

TrajectoryRecord run_trajectory(const RunConfig& cfg, const ProjectableSystem& sys,
                                const ButcherTableau& tableau, const RowSink& sink) {
  const bool full = cfg.mode != RunMode::Descended;
  const bool descended = cfg.mode != RunMode::Full;
  std::vector<int> order;
  Eigen::VectorXd b;
  if (descended) {
    order = sydirk_order(tableau);
    b = tableau.permuted(order).b();
  }

  TrajectoryRecord rec;
  rec.diagnostic_names = sys.diagnostic_names;
  if (cfg.initial_y && cfg.initial_y->size() != sys.dim_y) {
    throw DimensionMismatch("initial_y has " + std::to_string(cfg.initial_y->size()) +
                            " entries, " + sys.name + " needs " + std::to_string(sys.dim_y));
  }
  Vec y = cfg.initial_y ? *cfg.initial_y : sample_initial(sys, cfg.seed);
  Vec z = sys.F.value(y);
  std::vector<Vec> y_guess;
  std::vector<Vec> z_guess;

  auto emit = [&](RunRow row) {
    rec.times.push_back(row.t);
    rec.diagnostics.push_back(row.diagnostics);
    rec.stage_iters_max.push_back(row.stage_iters_max);
    if (row.deviation) rec.deviations.push_back(*row.deviation);
    if (cfg.dump_states) rec.states.push_back(row.state);
    if (sink) sink(row);
  };

  RunRow first;
  first.diagnostics = sys.diagnostics(z);
  if (cfg.mode == RunMode::Both) first.deviation = 0.0;
  if (cfg.dump_states) first.state = full && !descended ? y : z;
  emit(std::move(first));

  for (int k = 1; k <= cfg.steps; ++k) {
    RunRow row;
    row.step = k;
    row.t = k * cfg.h;
    try {
      std::optional<RkStepResult> fs;
      std::optional<DescentStepRecord> ds;
      if (full) {
        fs = rk_step(tableau, sys.f, y, cfg.h, cfg.solver, y_guess);
        row.stage_iters_max = max_iters(fs->stage_iters);
      }
      if (descended) {
        ds = descend_step(b, sys.reduced, z, cfg.h, cfg.solver, z_guess);
        row.stage_iters_max = std::max(row.stage_iters_max, max_iters(ds->iters));
      }
      if (fs && ds) {
        double dev = max_norm(sys.F.value(fs->y1) - ds->z1);
        for (std::size_t i = 0; i < order.size(); ++i) {
          dev = std::max(dev, max_norm(sys.F.value(fs->stages[order[i]]) - ds->stages[i]));
        }
        row.deviation = dev;
      }
      if (fs) {
        y = fs->y1;
        y_guess = fs->stages;
      }
      if (ds) {
        z = ds->z1;
        z_guess = ds->stages;
      } else {
        z = sys.F.value(y);
      }
    } catch (const NonConvergence& e) {
      throw e.at_step(k);
    } catch (const DegenerateSpectrum& e) {
      throw e.at_step(k);
    }
    row.diagnostics = sys.diagnostics(z);
    if (cfg.dump_states) row.state = full && !descended ? y : z;
    emit(std::move(row));
  }
  return rec;
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& names, RunMode mode,
                      int state_dim) {
  os << "step,t";
  for (const auto& n : names) os << ',' << n;
  os << ",stage_iters_max";
  if (mode == RunMode::Both) os << ",dev";
  for (int i = 0; i < state_dim; ++i) os << ",state_" << i;
  os << '\n';
}

void write_csv_row(std::ostream& os, const RunRow& row) {
  os << row.step << ',' << format_double(row.t);
  for (double d : row.diagnostics) os << ',' << format_double(d);
  os << ',' << row.stage_iters_max;
  if (row.deviation) os << ',' << format_double(*row.deviation);
  for (Eigen::Index i = 0; i < row.state.size(); ++i) os << ',' << format_double(row.state(i));
  os << '\n';
}

ConvergenceReport convergence_study(const ProjectableSystem& sys, const ButcherTableau& tableau,
                                    double h0, int levels, double t_end,
                                    const SolverSettings& settings, std::uint64_t seed) {
  if (levels < 3) throw InvalidArgument("convergence needs at least 3 levels");
  if (!(h0 > 0) || !(t_end > 0)) throw InvalidArgument("h0 and t_end must be positive");
  const double ratio = t_end / h0;
  const long base_steps = std::lround(ratio);
  if (base_steps < 1 || std::abs(ratio - base_steps) > 1e-9 * ratio) {
    throw InvalidArgument("t_end must be an integer multiple of h0");
  }

  ConvergenceReport report;
  report.mode = classify(tableau).kind == TableauClass::SyDIRK ? RunMode::Descended : RunMode::Full;
  RunConfig cfg;
  cfg.mode = report.mode;
  cfg.solver = settings;
  cfg.seed = seed;

  auto final_state = [&](double h, long steps) {
    cfg.h = h;
    cfg.steps = static_cast<int>(steps);
    cfg.dump_states = true;
    const TrajectoryRecord rec = run_trajectory(cfg, sys, tableau);
    const Vec& last = rec.states.back();
    return report.mode == RunMode::Full ? Vec(sys.F.value(last)) : last;
  };

  report.reference_h = h0 / std::ldexp(1.0, levels + 2);
  const Vec reference = final_state(report.reference_h, base_steps << (levels + 2));
  for (int k = 0; k < levels; ++k) {
    ConvergenceLevel lvl;
    lvl.h = h0 / std::ldexp(1.0, k);
    lvl.steps = static_cast<int>(base_steps << k);
    lvl.error = max_norm(final_state(lvl.h, lvl.steps) - reference);
    if (k > 0) lvl.order = std::log2(report.levels.back().error / lvl.error);
    report.levels.push_back(lvl);
  }
  return report;
}

}  // namespace qproj
