#pragma once

#include "qproj/rk_engine.hpp"
#include "qproj/stage_solver.hpp"
#include "qproj/tableau.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace qproj::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Weights with |b_i| in [0.1, 1] and random signs.
inline Eigen::VectorXd random_weights(std::mt19937_64& rng, int s) {
  Eigen::VectorXd b(s);
  for (int i = 0; i < s; ++i) {
    b(i) = uniform(rng, 0.1, 1.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
  }
  return b;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int s) {
  std::vector<int> p(s);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Vec random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  return random_matrix(rng, n, 1, scale).col(0);
}

// Dense tableau with entries of size about 1/s.
inline ButcherTableau random_tableau(std::mt19937_64& rng, int s) {
  return ButcherTableau(random_matrix(rng, s, s, 1.0 / s), random_vector(rng, s, 1.0 / s));
}

// Random quadratic map R^dim_y -> R^dim_z, coefficients scaled by 1/dim_y.
inline QuadraticMap random_quadratic(std::mt19937_64& rng, int dim_y, int dim_z) {
  const double scale = 1.0 / dim_y;
  std::vector<Eigen::MatrixXd> bil;
  for (int k = 0; k < dim_z; ++k) bil.push_back(random_matrix(rng, dim_y, dim_y, scale));
  return QuadraticMap::symmetrized(random_vector(rng, dim_z, scale),
                                   random_matrix(rng, dim_z, dim_y, scale), std::move(bil));
}

// f(y) = A y + c.
inline VectorField random_affine(std::mt19937_64& rng, int dim) {
  const Eigen::MatrixXd a = random_matrix(rng, dim, dim, 1.0 / std::sqrt(dim));
  const Vec c = random_vector(rng, dim);
  return {dim, [a, c](const Vec& y) -> Vec { return a * y + c; }};
}

}  // namespace qproj::testing
