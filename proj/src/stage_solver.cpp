#include "qproj/stage_solver.hpp"

#include "qproj/error.hpp"

#include <cmath>
#include <limits>

namespace qproj {

namespace {

bool converged(double residual, const Vec& x, double tol) {
  return residual <= tol * (1.0 + max_norm(x));
}

// Newton on R(x) = x - map(x) with a forward-difference Jacobian.
StageSolution newton(const std::function<Vec(const Vec&)>& map, Vec x,
                     const SolverSettings& settings, int stage, int used) {
  const Eigen::Index n = x.size();
  const double delta0 = std::sqrt(std::numeric_limits<double>::epsilon());
  double residual = std::numeric_limits<double>::infinity();
  for (int it = used + 1; it <= settings.max_iter; ++it) {
    const Vec gx = map(x);
    const Vec r = x - gx;
    residual = max_norm(r);
    if (converged(residual, x, settings.tol)) return {gx, it, residual};

    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double step = delta0 * std::max(1.0, std::abs(x(j)));
      Vec xp = x;
      xp(j) += step;
      jac.col(j) = ((xp - map(xp)) - r) / step;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    x -= lu.solve(r);
    if (!x.allFinite()) break;
  }
  throw NonConvergence(stage, settings.max_iter, residual);
}

}  // namespace

StageSolution solve_fixed_point(const std::function<Vec(const Vec&)>& map, Vec guess,
                                const SolverSettings& settings, int stage) {
  if (!(settings.tol > 0) || settings.max_iter < 1) {
    throw InvalidArgument("solver settings need tol > 0 and max_iter >= 1");
  }
  Vec x = std::move(guess);
  double previous = std::numeric_limits<double>::infinity();
  double residual = previous;
  for (int it = 1; it <= settings.max_iter; ++it) {
    Vec gx = map(x);
    residual = max_norm(gx - x);
    if (converged(residual, x, settings.tol)) return {std::move(gx), it, residual};
    if (!std::isfinite(residual)) break;
    if (settings.strategy == SolverStrategy::NewtonFallback && it > 1 &&
        residual > 0.9 * previous) {
      return newton(map, std::move(x), settings, stage, it);
    }
    previous = residual;
    x = std::move(gx);
  }
  throw NonConvergence(stage, settings.max_iter, residual);
}

}  // namespace qproj
