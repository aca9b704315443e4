#pragma once

#include "qproj/rk_engine.hpp"

#include <functional>

namespace qproj {

struct StageSolution {
  Vec x;
  int iters = 0;
  double residual = 0.0;
};

inline double max_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Solves x = map(x) starting from `guess`. Converged when
// |map(x) - x|_max <= tol (1 + |x|_max); returns map(x) at that point.
// With NewtonFallback a finite-difference Newton iteration takes over once a
// fixed-point sweep reduces the residual by less than 10%.
// Throws NonConvergence tagged with `stage`.
StageSolution solve_fixed_point(const std::function<Vec(const Vec&)>& map, Vec guess,
                                const SolverSettings& settings, int stage);

}  // namespace qproj
