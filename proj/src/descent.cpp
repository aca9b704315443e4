#include "qproj/descent.hpp"

#include "qproj/error.hpp"
#include "qproj/stage_solver.hpp"

#include <algorithm>
#include <cmath>

namespace qproj {

namespace {

void check_weights(const Eigen::VectorXd& b) {
  if (b.size() == 0) throw InvalidArgument("descended method needs at least one stage");
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b(i) == 0.0) throw ZeroWeight(static_cast<int>(i));
  }
}

void check_guess(std::span<const Vec> guess, Eigen::Index stages, Eigen::Index dim) {
  if (guess.empty()) return;
  if (static_cast<Eigen::Index>(guess.size()) != stages) {
    throw DimensionMismatch("stage guess count does not match the weights");
  }
  for (const auto& g : guess) {
    if (g.size() != dim) throw DimensionMismatch("stage guess has wrong dimension");
  }
}

}  // namespace

DescentStepRecord descend_step(const Eigen::VectorXd& b, const ReducedSystem& sys, const Vec& z0,
                               double h, const SolverSettings& settings,
                               std::span<const Vec> guess) {
  check_weights(b);
  if (!(h > 0)) throw InvalidArgument("step size must be positive");
  if (z0.size() != sys.dim_z) throw DimensionMismatch("state dimension does not match system");
  const auto s = b.size();
  check_guess(guess, s, z0.size());

  DescentStepRecord out;
  Vec partial = z0;  // z0 + h sum_{j<i} b_j g(Z_j)
  for (Eigen::Index i = 0; i < s; ++i) {
    const double half = 0.5 * h * b(i);
    const double quad = h * h * b(i) * b(i) / 8.0;
    auto map = [&](const Vec& z) -> Vec { return partial + half * sys.g(z) - quad * sys.gamma(z); };
    StageSolution sol =
        solve_fixed_point(map, guess.empty() ? partial : guess[i], settings, static_cast<int>(i));
    partial += h * b(i) * sys.g(sol.x);
    out.stages.push_back(std::move(sol.x));
    out.iters.push_back(sol.iters);
  }
  out.z1 = std::move(partial);
  return out;
}

TrajectoryRecord descend_trajectory(const Eigen::VectorXd& b, const ReducedSystem& sys,
                                    const Vec& z0, double h, int n_steps,
                                    const SolverSettings& settings, const Diagnostics& diagnostics,
                                    std::vector<std::string> diagnostic_names,
                                    const DescentObserver& observer) {
  if (n_steps < 0) throw InvalidArgument("step count must be nonnegative");
  TrajectoryRecord rec;
  rec.diagnostic_names = std::move(diagnostic_names);
  auto record = [&](double t, const Vec& z, int iters) {
    rec.times.push_back(t);
    rec.states.push_back(z);
    rec.diagnostics.push_back(diagnostics ? diagnostics(z) : std::vector<double>{});
    rec.stage_iters_max.push_back(iters);
  };
  record(0.0, z0, 0);

  Vec z = z0;
  std::vector<Vec> warm;
  for (int k = 1; k <= n_steps; ++k) {
    DescentStepRecord step;
    try {
      step = descend_step(b, sys, z, h, settings, warm);
    } catch (const NonConvergence& e) {
      throw e.at_step(k);
    } catch (const DegenerateSpectrum& e) {
      throw e.at_step(k);
    }
    z = step.z1;
    warm = step.stages;
    record(k * h, z, *std::max_element(step.iters.begin(), step.iters.end()));
    if (observer) observer(k, step);
  }
  return rec;
}

double theorem4_check(const Eigen::VectorXd& b, const ReducedSystem& sys,
                      const QuadraticAction& G, const Vec& z0, double h,
                      const SolverSettings& settings) {
  return theorem4_check(b, sys, G, z0, h, descend_step(b, sys, z0, h, settings));
}

double theorem4_check(const Eigen::VectorXd& b, const ReducedSystem& sys,
                      const QuadraticAction& G, const Vec& z0, double h,
                      const DescentStepRecord& step) {
  Vec rhs = G.value(z0);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const Vec& zi = step.stages[i];
    const Vec gi = sys.g(zi);
    rhs += h * b(i) * G.derivative(zi, gi);
    rhs += h * h * h / 8.0 * b(i) * b(i) * b(i) * G.second(gi, sys.gamma(zi));
  }
  return max_norm(G.value(step.z1) - rhs);
}

namespace {

constexpr double kMinReciprocalCondition = 1e-12;

Eigen::PartialPivLU<CMat> factor(const CMat& m) {
  Eigen::PartialPivLU<CMat> lu(m);
  if (!(lu.rcond() > kMinReciprocalCondition)) {
    throw SingularFactor("Cayley factor is numerically singular (rcond " +
                         std::to_string(lu.rcond()) + ")");
  }
  return lu;
}

// (I - cA)^{-1} R (I - cB)^{-1}
CMat unfold(const CMat& r, const CMat& a, const CMat& b, double c) {
  const Eigen::Index n = r.rows();
  const CMat id = CMat::Identity(n, n);
  const auto left = factor(id - c * a);
  const auto right = factor((id - c * b).adjoint());
  // X (I - cB)^{-1} = ((I - cB)^{-dagger} X^dagger)^dagger
  const CMat x = left.solve(r);
  return right.solve(x.adjoint()).adjoint();
}

}  // namespace

DescentStepRecord factored_step(const Eigen::VectorXd& b, const MatrixSplitFlow& flow,
                                const Vec& z0, double h, const SolverSettings& settings,
                                std::span<const Vec> guess) {
  check_weights(b);
  if (!(h > 0)) throw InvalidArgument("step size must be positive");
  const int n = flow.n;
  if (z0.size() != 2 * n * n) throw DimensionMismatch("state dimension does not match flow");
  check_guess(guess, b.size(), z0.size());
  const CMat id = CMat::Identity(n, n);

  DescentStepRecord out;
  out.r_stages.emplace();
  out.r_stages->push_back(z0);
  CMat zr = decode(z0, n);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double c = 0.5 * h * b(i);
    auto map = [&](const Vec& v) -> Vec {
      const auto [a, bb] = flow.split(decode(v, n));
      return encode(unfold(zr, a, bb, c));
    };
    StageSolution sol = solve_fixed_point(map, guess.empty() ? out.r_stages->back() : guess[i],
                                          settings, static_cast<int>(i));
    // Final unfold with the factors frozen at the converged stage.
    const auto [a, bb] = flow.split(decode(sol.x, n));
    const CMat zi = unfold(zr, a, bb, c);
    zr = (id + c * a) * zi * (id + c * bb);
    out.stages.push_back(encode(zi));
    out.r_stages->push_back(encode(zr));
    out.iters.push_back(sol.iters + 1);
  }
  out.z1 = out.r_stages->back();
  return out;
}

DescentStepRecord dcay_step(const Eigen::VectorXd& b,
                            const std::function<CMat(const CMat&)>& grad_eta, int n,
                            const Vec& z0, double h, const SolverSettings& settings,
                            std::span<const Vec> guess) {
  MatrixSplitFlow flow;
  flow.n = n;
  flow.split = [&grad_eta](const CMat& z) {
    CMat a = grad_eta(z).adjoint();
    CMat minus_a = -a;
    return std::make_pair(std::move(a), std::move(minus_a));
  };
  return factored_step(b, flow, z0, h, settings, guess);
}

}  // namespace qproj
