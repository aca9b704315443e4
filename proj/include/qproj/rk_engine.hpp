#pragma once

#include "qproj/tableau.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace qproj {

using Vec = Eigen::VectorXd;

// Autonomous vector field y' = f(y). `eval` must be deterministic.
struct VectorField {
  int dim = 0;
  std::function<Vec(const Vec&)> eval;

  Vec operator()(const Vec& y) const { return eval(y); }
};

// A quadratic map F: Y -> Z with its derivatives F'(y)v and F''(u, v).
// Systems with structured F (matrix products, quaternions) supply these
// analytically; QuadraticMap provides them from dense coefficients.
struct QuadraticAction {
  int dim_y = 0;
  int dim_z = 0;
  std::function<Vec(const Vec&)> value;
  std::function<Vec(const Vec&, const Vec&)> derivative;
  std::function<Vec(const Vec&, const Vec&)> second;
};

// Dense F(y) = c0 + lin y + 1/2 bil(y, y) with bil[z] symmetric.
class QuadraticMap {
 public:
  // Throws InvalidArgument on inconsistent shapes or an unsymmetric slice.
  QuadraticMap(Vec c0, Eigen::MatrixXd lin, std::vector<Eigen::MatrixXd> bil);

  // Averages each slice with its transpose before storing.
  static QuadraticMap symmetrized(Vec c0, Eigen::MatrixXd lin, std::vector<Eigen::MatrixXd> bil);

  int dim_y() const { return static_cast<int>(lin_.cols()); }
  int dim_z() const { return static_cast<int>(c0_.size()); }
  const Vec& c0() const { return c0_; }
  const Eigen::MatrixXd& lin() const { return lin_; }
  const std::vector<Eigen::MatrixXd>& bil() const { return bil_; }

  Vec value(const Vec& y) const;
  Vec derivative(const Vec& y, const Vec& v) const;
  Vec second(const Vec& u, const Vec& v) const;

  QuadraticAction action() const;

 private:
  Vec c0_;
  Eigen::MatrixXd lin_;
  std::vector<Eigen::MatrixXd> bil_;
};

enum class SolverStrategy { FixedPoint, NewtonFallback };

struct SolverSettings {
  double tol = 1e-14;
  int max_iter = 200;
  SolverStrategy strategy = SolverStrategy::FixedPoint;
};

struct RkStepResult {
  Vec y1;
  std::vector<Vec> stages;
  int iters = 0;                 // total stage-solver iterations
  std::vector<int> stage_iters;  // per stage (coupled solves repeat the total)
};

// One step of the Runge-Kutta method. DIRK tableaus (up to a stage
// permutation) are solved stage by stage; anything else as one coupled
// system. `guess`, when non-empty, seeds the stage iteration.
RkStepResult rk_step(const ButcherTableau& t, const VectorField& f, const Vec& y0, double h,
                     const SolverSettings& settings = {}, std::span<const Vec> guess = {});

struct ObservableStep {
  Vec z1;
  std::vector<Vec> stage_values;  // F(Y_i)
};

inline constexpr double kEquivarianceTol = 1e-12;

// F(y0) + h sum_i b_i F'(Y_i) f(Y_i), which equals F(y1) for methods
// preserving quadratic invariants. Throws NotEquivariant otherwise.
ObservableStep evolve_observable(const ButcherTableau& t, const VectorField& f,
                                 const QuadraticAction& F, const Vec& y0, double h,
                                 const SolverSettings& settings = {});

// Same, from an already computed step.
ObservableStep evolve_observable(const ButcherTableau& t, const VectorField& f,
                                 const QuadraticAction& F, const Vec& y0, double h,
                                 const RkStepResult& step);

struct Lemma1Residuals {
  std::vector<double> stage;
  double step = 0.0;
};

// Both sides of the second-order expansions of F(Y_i) and F(y1) in terms of
// F'(Y_j) f(Y_j) and F''(f(Y_j), f(Y_k)); max-norm differences.
Lemma1Residuals lemma1_residual(const ButcherTableau& t, const VectorField& f,
                                const QuadraticAction& F, const Vec& y0, double h,
                                const SolverSettings& settings = {});

Lemma1Residuals lemma1_residual(const ButcherTableau& t, const VectorField& f,
                                const QuadraticAction& F, const Vec& y0, double h,
                                const RkStepResult& step);

}  // namespace qproj
