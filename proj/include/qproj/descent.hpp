#pragma once

#include "qproj/matrix.hpp"
#include "qproj/rk_engine.hpp"
#include "qproj/trajectory.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qproj {

// z' = g(z) together with gamma, the image of F''(f, f) on the projected space.
struct ReducedSystem {
  int dim_z = 0;
  std::function<Vec(const Vec&)> g;
  std::function<Vec(const Vec&)> gamma;
};

struct DescentStepRecord {
  Vec z1;
  std::vector<Vec> stages;
  // Z^r_0 = z0, ..., Z^r_s = z1 when the factored form was used.
  std::optional<std::vector<Vec>> r_stages;
  std::vector<int> iters;
};

// Descended SyDIRK step:
//   Z_i = z0 + h sum_{j<i} b_j g(Z_j) + h/2 b_i g(Z_i) - h^2/8 b_i^2 gamma(Z_i)
//   z1  = z0 + h sum_i b_i g(Z_i)
// Throws ZeroWeight for a zero weight, NonConvergence from the stage solver.
DescentStepRecord descend_step(const Eigen::VectorXd& b, const ReducedSystem& sys, const Vec& z0,
                               double h, const SolverSettings& settings = {},
                               std::span<const Vec> guess = {});

// Called after every accepted step with the step index (1-based) and record.
using DescentObserver = std::function<void(int, const DescentStepRecord&)>;

// Repeats descend_step with warm-started stages. Errors carry the failing
// step index.
TrajectoryRecord descend_trajectory(const Eigen::VectorXd& b, const ReducedSystem& sys,
                                    const Vec& z0, double h, int n_steps,
                                    const SolverSettings& settings = {},
                                    const Diagnostics& diagnostics = {},
                                    std::vector<std::string> diagnostic_names = {},
                                    const DescentObserver& observer = {});

// G(z1) - [G(z0) + h sum b_i G'(Z_i) g(Z_i) + h^3/8 sum b_i^3 G''(g(Z_i), gamma(Z_i))],
// max norm.
double theorem4_check(const Eigen::VectorXd& b, const ReducedSystem& sys,
                      const QuadraticAction& G, const Vec& z0, double h,
                      const SolverSettings& settings = {});
double theorem4_check(const Eigen::VectorXd& b, const ReducedSystem& sys,
                      const QuadraticAction& G, const Vec& z0, double h,
                      const DescentStepRecord& step);

// Matrix flow written as g(Z) = A(Z) Z + Z B(Z) with gamma(Z) = 2 A(Z) Z B(Z).
// States are encoded n x n complex matrices.
struct MatrixSplitFlow {
  int n = 0;
  std::function<std::pair<CMat, CMat>(const CMat&)> split;
};

// Stages through the factored form
//   Z^r_{i-1} = (I - c A) Z_i (I - c B),  Z^r_i = (I + c A) Z_i (I + c B),
// c = h b_i / 2, with Z_i iterated as (I - cA)^{-1} Z^r_{i-1} (I - cB)^{-1}.
// Throws SingularFactor when a factor is numerically singular.
DescentStepRecord factored_step(const Eigen::VectorXd& b, const MatrixSplitFlow& flow,
                                const Vec& z0, double h, const SolverSettings& settings = {},
                                std::span<const Vec> guess = {});

// Factored (inverse dcay) form of the matrix Lie-Poisson method: A = grad_eta(Z)^dagger,
// B = -A. Every Z^r_i is a Cayley similarity transform of Z^r_{i-1}.
DescentStepRecord dcay_step(const Eigen::VectorXd& b,
                            const std::function<CMat(const CMat&)>& grad_eta, int n,
                            const Vec& z0, double h, const SolverSettings& settings = {},
                            std::span<const Vec> guess = {});

}  // namespace qproj
