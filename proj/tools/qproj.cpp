#include "qproj/error.hpp"
#include "qproj/format.hpp"
#include "qproj/runner.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace qproj;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitConfig = 4;

struct Options {
  std::string config;
  std::string tableau;
  std::string system;
  std::string output;
  std::string mode;
  bool dump_states = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<int> steps;
  std::optional<double> h0;
  std::optional<int> levels;
  std::optional<double> t_end;
};

RunConfig resolve_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.system.empty()) {
    const auto names = system_names();
    if (std::find(names.begin(), names.end(), o.system) == names.end()) throw UnknownName(o.system);
    if (o.system != cfg.system) cfg.parameters = nlohmann::json::object();
    cfg.system = o.system;
  }
  if (!o.tableau.empty()) {
    cfg.method = o.tableau;
    cfg.weights.reset();
  }
  if (!o.output.empty()) cfg.output = o.output;
  if (!o.mode.empty()) cfg.mode = parse_run_mode(o.mode);
  if (o.dump_states) cfg.dump_states = true;
  if (o.seed) cfg.seed = *o.seed;
  if (o.h) cfg.h = *o.h;
  if (o.steps) cfg.steps = *o.steps;
  if (o.h0) cfg.h0 = *o.h0;
  if (o.levels) cfg.levels = *o.levels;
  if (o.t_end) cfg.t_end = *o.t_end;
  if (!(cfg.h > 0) || cfg.steps < 0) throw InvalidArgument("need h > 0 and steps >= 0");
  if (cfg.levels < 3) throw InvalidArgument("convergence needs at least 3 levels");
  return cfg;
}

int cmd_classify(const std::string& name) {
  const ButcherTableau t = resolve_tableau(name);
  const TableauClassification c = classify(t);
  std::cout << to_string(c.kind) << ", symplectic_residual " << format_double(c.symplectic_residual)
            << ", projectable_residual " << format_double(c.projectable_residual) << '\n';
  nlohmann::ordered_json j;
  j["class"] = std::string(to_string(c.kind));
  j["stages"] = t.stages();
  j["symplectic_residual"] = c.symplectic_residual;
  j["projectable_residual"] = c.projectable_residual;
  if (c.dirk_permutation) {
    std::cout << "permutation";
    for (int p : *c.dirk_permutation) std::cout << ' ' << p;
    std::cout << '\n';
    j["permutation"] = *c.dirk_permutation;
  } else {
    j["permutation"] = nullptr;
  }
  std::cout << j.dump() << '\n';
  return kExitOk;
}

// Rows already written stay on disk; the abort marker is the last line.
int cmd_run(const RunConfig& cfg) {
  const ProjectableSystem sys = make_system(cfg.system, cfg.parameters);
  const ButcherTableau tableau = config_tableau(cfg);
  if (cfg.mode != RunMode::Full && classify(tableau).kind != TableauClass::SyDIRK) {
    throw InvalidArgument("descended integration needs a SyDIRK tableau");
  }

  std::unique_ptr<std::ofstream> file;
  if (!cfg.output.empty()) {
    file = std::make_unique<std::ofstream>(cfg.output);
    if (!*file) throw ParseError("cannot open output " + cfg.output);
  }
  std::ostream& os = file ? *file : std::cout;
  const int state_dim =
      cfg.dump_states ? (cfg.mode == RunMode::Full ? sys.dim_y : sys.dim_z) : 0;
  write_csv_header(os, sys.diagnostic_names, cfg.mode, state_dim);

  int next_step = 0;
  auto abort_with = [&](const std::exception& e, int code) {
    os << "# aborted at step " << next_step << '\n';
    os.flush();
    std::cerr << "qproj: " << e.what() << '\n';
    return code;
  };
  try {
    run_trajectory(cfg, sys, tableau, [&](const RunRow& row) {
      write_csv_row(os, row);
      next_step = row.step + 1;
    });
  } catch (const NonConvergence& e) {
    return abort_with(e, kExitNonConvergence);
  } catch (const DegenerateSpectrum& e) {
    return abort_with(e, kExitDegenerate);
  }
  os.flush();
  return kExitOk;
}

int cmd_convergence(const RunConfig& cfg) {
  const ProjectableSystem sys = make_system(cfg.system, cfg.parameters);
  const ButcherTableau tableau = config_tableau(cfg);
  const ConvergenceReport r =
      convergence_study(sys, tableau, cfg.h0, cfg.levels, cfg.t_end, cfg.solver, cfg.seed);

  std::cout << "system " << sys.name << ", mode " << to_string(r.mode) << ", t_end "
            << format_double(cfg.t_end) << ", reference h " << format_double(r.reference_h) << '\n';
  for (const auto& l : r.levels) {
    std::cout << "h " << format_double(l.h) << "  error " << format_double(l.error);
    if (l.order) std::cout << "  order " << format_double(*l.order);
    std::cout << '\n';
  }

  std::ostringstream csv;
  csv << "level,h,steps,error,order\n";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    const auto& l = r.levels[k];
    csv << k << ',' << format_double(l.h) << ',' << l.steps << ',' << format_double(l.error) << ','
        << (l.order ? format_double(*l.order) : std::string()) << '\n';
  }
  std::cout << csv.str();
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw ParseError("cannot open output " + cfg.output);
    out << csv.str();
  }
  return kExitOk;
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--system", o.system, "catalog system name");
  cmd->add_option("--tableau", o.tableau, "builtin tableau name or tableau JSON file");
  cmd->add_option("--output", o.output, "CSV output path (default stdout)");
  cmd->add_option("--seed", o.seed, "seed for the initial data");
  cmd->add_option("--mode", o.mode, "full, descended or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic DIRK integration and descended methods on projected variables"};
  app.require_subcommand(1);
  Options o;
  std::string classify_name;

  auto* classify_cmd = app.add_subcommand("classify", "classify a Butcher tableau");
  classify_cmd->add_option("name,--tableau", classify_name, "builtin name or tableau JSON file");

  auto* run_cmd = app.add_subcommand("run", "integrate a trajectory and write CSV");
  add_run_options(run_cmd, o);
  run_cmd->add_flag("--dump-states", o.dump_states, "append the state vector to every row");
  run_cmd->add_option("--dt", o.h, "step size h");
  run_cmd->add_option("--steps", o.steps, "number of steps");

  auto* conv_cmd = app.add_subcommand("convergence", "observed order on a step-halving ladder");
  add_run_options(conv_cmd, o);
  conv_cmd->add_option("--h0", o.h0, "coarsest step size");
  conv_cmd->add_option("--levels", o.levels, "number of step sizes (at least 3)");
  conv_cmd->add_option("--t-end", o.t_end, "final time (integer multiple of h0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*classify_cmd) {
      if (classify_name.empty()) throw InvalidArgument("classify needs a tableau name or file");
      return cmd_classify(classify_name);
    }
    const RunConfig cfg = resolve_config(o);
    if (*run_cmd) return cmd_run(cfg);
    return cmd_convergence(cfg);
  } catch (const NonConvergence& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const DegenerateSpectrum& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ParseError& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownName& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qproj: " << e.what() << '\n';
    return 1;
  }
}
