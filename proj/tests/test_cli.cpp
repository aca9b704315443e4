#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qproj/error.hpp"
#include "qproj/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace qproj;

namespace {

const std::string kCli = QPROJ_CLI_PATH;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string capture = "cli_capture.txt";
  const int status = std::system((kCli + " " + args + " > " + capture + " 2>/dev/null").c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  o.out = ss.str();
  std::remove(capture.c_str());
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

int column(const std::string& header, const std::string& name) {
  const auto cells = split(header);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_run_config(R"({
    "system": {"name": "zeitlin_ns", "parameters": {"n": 6, "nu": 0.01}},
    "method": "sydirk2", "h": 0.02, "steps": 7, "mode": "both",
    "solver": {"tol": 1e-13, "max_iter": 50, "strategy": "newton_fallback"},
    "seed": 9, "output": "x.csv",
    "convergence": {"h0": 0.2, "levels": 5, "t_end": 2.0}
  })");
  CHECK(cfg.system == "zeitlin_ns");
  CHECK(cfg.parameters["n"] == 6);
  CHECK(cfg.method == "sydirk2");
  CHECK(cfg.h == 0.02);
  CHECK(cfg.steps == 7);
  CHECK(cfg.mode == RunMode::Both);
  CHECK(cfg.solver.tol == 1e-13);
  CHECK(cfg.solver.max_iter == 50);
  CHECK(cfg.solver.strategy == SolverStrategy::NewtonFallback);
  CHECK(cfg.seed == 9);
  CHECK(cfg.output == "x.csv");
  CHECK(cfg.levels == 5);

  const RunConfig weighted = parse_run_config(R"({"method": {"b": [0.5, 0.5]}})");
  REQUIRE(weighted.weights);
  CHECK(config_tableau(weighted) == builtin_tableau("sydirk2"));

  CHECK_THROWS_AS(parse_run_config("{"), ParseError);
  CHECK_THROWS_AS(parse_run_config("[1]"), ParseError);
  CHECK_THROWS_AS(parse_run_config(R"({"h": -1})"), InvalidArgument);
  CHECK_THROWS_AS(parse_run_config(R"({"steps": -1})"), InvalidArgument);
  CHECK_THROWS_AS(parse_run_config(R"({"h": "fast"})"), ParseError);
  CHECK_THROWS_AS(parse_run_config(R"({"system": "vortex"})"), UnknownName);
  CHECK_THROWS_AS(parse_run_config(R"({"mode": "sideways"})"), UnknownName);
  CHECK_THROWS_AS(make_system("hopf_rigid_body", nlohmann::json{{"inertia", {1, 2}}}), InvalidArgument);
}

TEST_CASE("trajectory runs") {
  const ProjectableSystem sys = make_system("hopf_rigid_body", {});
  RunConfig cfg;
  cfg.steps = 0;
  const TrajectoryRecord empty = run_trajectory(cfg, sys, builtin_tableau("midpoint"));
  CHECK(empty.rows() == 1);

  cfg.steps = 100;
  cfg.mode = RunMode::Both;
  const TrajectoryRecord both = run_trajectory(cfg, sys, builtin_tableau("sydirk2"));
  CHECK(both.rows() == 101);
  REQUIRE(both.deviations.size() == 101);
  for (double d : both.deviations) CHECK(d <= 1e-10);

  cfg.mode = RunMode::Descended;
  CHECK_THROWS_AS(run_trajectory(cfg, sys, builtin_tableau("gauss2")), InvalidArgument);
  cfg.mode = RunMode::Full;
  CHECK(run_trajectory(cfg, sys, builtin_tableau("gauss2")).rows() == 101);
}

TEST_CASE("convergence study") {
  const ProjectableSystem sys = make_system("hopf_rigid_body", {});
  const ConvergenceReport mid = convergence_study(sys, builtin_tableau("midpoint"), 0.1, 4, 1.0, {}, 1);
  CHECK(mid.mode == RunMode::Descended);
  REQUIRE(mid.levels.size() == 4);
  for (std::size_t k = 1; k < mid.levels.size(); ++k) {
    CHECK(*mid.levels[k].order == doctest::Approx(2.0).epsilon(0.05));
  }
  const ConvergenceReport euler = convergence_study(sys, builtin_tableau("euler"), 0.1, 3, 1.0, {}, 1);
  CHECK(euler.mode == RunMode::Full);
  CHECK(*euler.levels[1].order == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(convergence_study(sys, builtin_tableau("euler"), 0.3, 3, 1.0, {}, 1), InvalidArgument);
  CHECK_THROWS_AS(convergence_study(sys, builtin_tableau("euler"), 0.1, 2, 1.0, {}, 1), InvalidArgument);
}

TEST_CASE("cli classify") {
  const Outcome mid = run_cli("classify midpoint");
  CHECK(mid.code == 0);
  CHECK(lines(mid.out).at(0) == "SyDIRK, symplectic_residual 0, projectable_residual 0");

  const Outcome gauss = run_cli("classify gauss2");
  CHECK(gauss.code == 0);
  CHECK(gauss.out.rfind("General, symplectic_residual 0, projectable_residual 0.0208333", 0) == 0);

  const Outcome rk4 = run_cli("classify --tableau rk4");
  CHECK(rk4.code == 0);
  CHECK(rk4.out.rfind("Explicit, symplectic_residual 0.1111", 0) == 0);
  const auto j = nlohmann::json::parse(lines(rk4.out).back());
  CHECK(j["class"] == "Explicit");
  CHECK(j["symplectic_residual"].get<double>() >= 1.0 / 36.0);

  write_file("cli_tableau.json", tableau_to_json(builtin_tableau("sydirk2").permuted({1, 0})));
  const Outcome file = run_cli("classify cli_tableau.json");
  CHECK(file.code == 0);
  CHECK(lines(file.out).at(1) == "permutation 1 0");
  std::remove("cli_tableau.json");

  write_file("cli_broken.json", "{\"s\": 2");
  CHECK(run_cli("classify cli_broken.json").code == 4);
  std::remove("cli_broken.json");
  CHECK(run_cli("classify no_such_tableau").code == 4);
  CHECK(run_cli("").code == 4);
}

TEST_CASE("cli run writes reproducible CSV") {
  write_file("cli_run.json", R"({"system": {"name": "zeitlin_ns", "parameters": {"n": 8, "nu": 0.0}},
    "method": "midpoint", "h": 0.05, "steps": 1000, "mode": "descended"})");
  REQUIRE(run_cli("run --config cli_run.json --output cli_a.csv").code == 0);
  REQUIRE(run_cli("run --config cli_run.json --output cli_b.csv").code == 0);
  std::stringstream a, b;
  a << std::ifstream("cli_a.csv").rdbuf();
  b << std::ifstream("cli_b.csv").rdbuf();
  CHECK(a.str() == b.str());

  const auto rows = lines(a.str());
  REQUIRE(rows.size() == 1002);
  CHECK(rows[0] == "step,t,energy,enstrophy,trace,stage_iters_max");
  const int col = column(rows[0], "enstrophy");
  const double e0 = std::stod(split(rows[1])[col]);
  double drift = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) drift = std::max(drift, std::abs(std::stod(split(rows[i])[col]) - e0));
  CHECK(drift <= 1e-11);
  for (const char* f : {"cli_run.json", "cli_a.csv", "cli_b.csv"}) std::remove(f);

  const Outcome zero = run_cli("run --system hopf_rigid_body --steps 0");
  CHECK(zero.code == 0);
  CHECK(lines(zero.out).size() == 2);

  const Outcome both = run_cli("run --system hopf_rigid_body --tableau sydirk2 --mode both --steps 100");
  CHECK(both.code == 0);
  const auto brows = lines(both.out);
  REQUIRE(brows.size() == 102);
  const int dev = column(brows[0], "dev");
  CHECK(dev == static_cast<int>(split(brows[0]).size()) - 1);
  for (std::size_t i = 1; i < brows.size(); ++i) CHECK(std::stod(split(brows[i])[dev]) <= 1e-10);

  const Outcome dump = run_cli("run --system octonion_flow --steps 2 --dump-states --seed 4");
  CHECK(dump.code == 0);
  CHECK(lines(dump.out)[0] == "step,t,z,stage_iters_max,state_0");
  CHECK(lines(dump.out)[1] != lines(run_cli("run --system octonion_flow --steps 2 --dump-states --seed 5").out)[1]);
}

TEST_CASE("cli run error exits") {
  write_file("cli_stall.json", R"({"system": "zeitlin_ns", "h": 0.5, "steps": 5,
    "solver": {"max_iter": 2}})");
  const Outcome stall = run_cli("run --config cli_stall.json");
  CHECK(stall.code == 2);
  const auto rows = lines(stall.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows.back() == "# aborted at step 1");
  std::remove("cli_stall.json");

  // q = p = I gives z = I, whose eigenvalues coincide.
  std::string identity_pair = "[";
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) identity_pair += (i == j ? "1,0," : "0,0,");
    }
  }
  identity_pair.back() = ']';
  write_file("cli_degenerate.json", R"({"system": {"name": "general_matrix_flow", "parameters": {"n": 2}},
    "mode": "both", "steps": 3, "initial_y": )" + identity_pair + "}");
  const Outcome degenerate = run_cli("run --config cli_degenerate.json");
  CHECK(degenerate.code == 3);
  CHECK(lines(degenerate.out).size() == 3);
  CHECK(lines(degenerate.out).back() == "# aborted at step 1");
  write_file("cli_short.json", R"({"system": "hopf_rigid_body", "initial_y": [1, 0, 0]})");
  CHECK(run_cli("run --config cli_short.json").code == 4);
  for (const char* f : {"cli_degenerate.json", "cli_short.json"}) std::remove(f);

  CHECK(run_cli("run --system zeitlin_ns --tableau euler").code == 4);
  CHECK(run_cli("run --system nothing").code == 4);
  write_file("cli_bad.json", R"({"h": 0})");
  CHECK(run_cli("run --config cli_bad.json").code == 4);
  std::remove("cli_bad.json");
}

TEST_CASE("cli convergence") {
  const Outcome mid = run_cli("convergence --system hopf_rigid_body --tableau midpoint");
  CHECK(mid.code == 0);
  const auto rows = lines(mid.out);
  REQUIRE(rows.size() >= 5);
  CHECK(rows[rows.size() - 5] == "level,h,steps,error,order");
  const double order = std::stod(split(rows.back())[4]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));

  const Outcome tj = run_cli("convergence --system hopf_rigid_body --tableau sydirk3_tj --levels 4 --h0 0.1");
  CHECK(tj.code == 0);
  CHECK(std::stod(split(lines(tj.out).back())[4]) >= 3.8);
  CHECK(run_cli("convergence --system hopf_rigid_body --levels 2").code == 4);
}
