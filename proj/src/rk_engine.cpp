#include "qproj/rk_engine.hpp"

#include "qproj/error.hpp"
#include "qproj/stage_solver.hpp"

#include <cmath>

namespace qproj {

QuadraticMap::QuadraticMap(Vec c0, Eigen::MatrixXd lin, std::vector<Eigen::MatrixXd> bil)
    : c0_(std::move(c0)), lin_(std::move(lin)), bil_(std::move(bil)) {
  if (lin_.rows() != c0_.size() || static_cast<Eigen::Index>(bil_.size()) != c0_.size()) {
    throw InvalidArgument("quadratic map: dim_z mismatch");
  }
  for (const auto& slice : bil_) {
    if (slice.rows() != lin_.cols() || slice.cols() != lin_.cols()) {
      throw InvalidArgument("quadratic map: bilinear slice must be dim_y x dim_y");
    }
    if (slice != slice.transpose()) throw InvalidArgument("quadratic map: bilinear part not symmetric");
  }
}

QuadraticMap QuadraticMap::symmetrized(Vec c0, Eigen::MatrixXd lin,
                                       std::vector<Eigen::MatrixXd> bil) {
  for (auto& slice : bil) {
    Eigen::MatrixXd sym = 0.5 * (slice + slice.transpose());
    slice = sym;
  }
  return QuadraticMap(std::move(c0), std::move(lin), std::move(bil));
}

Vec QuadraticMap::value(const Vec& y) const {
  if (y.size() != dim_y()) throw DimensionMismatch("quadratic map: wrong input dimension");
  Vec z = c0_ + lin_ * y;
  for (int k = 0; k < dim_z(); ++k) z(k) += 0.5 * y.dot(bil_[k] * y);
  return z;
}

Vec QuadraticMap::derivative(const Vec& y, const Vec& v) const {
  if (y.size() != dim_y() || v.size() != dim_y()) {
    throw DimensionMismatch("quadratic map: wrong input dimension");
  }
  Vec z = lin_ * v;
  for (int k = 0; k < dim_z(); ++k) z(k) += y.dot(bil_[k] * v);
  return z;
}

Vec QuadraticMap::second(const Vec& u, const Vec& v) const {
  if (u.size() != dim_y() || v.size() != dim_y()) {
    throw DimensionMismatch("quadratic map: wrong input dimension");
  }
  Vec z(dim_z());
  for (int k = 0; k < dim_z(); ++k) z(k) = u.dot(bil_[k] * v);
  return z;
}

QuadraticAction QuadraticMap::action() const {
  QuadraticAction out;
  out.dim_y = dim_y();
  out.dim_z = dim_z();
  out.value = [m = *this](const Vec& y) { return m.value(y); };
  out.derivative = [m = *this](const Vec& y, const Vec& v) { return m.derivative(y, v); };
  out.second = [m = *this](const Vec& u, const Vec& v) { return m.second(u, v); };
  return out;
}

namespace {

Vec eval_checked(const VectorField& f, const Vec& y) {
  Vec out = f(y);
  if (out.size() != y.size()) throw DimensionMismatch("vector field changed the dimension");
  return out;
}

// Stage order for the sequential solve, if the permuted tableau is exactly
// lower triangular.
std::optional<std::vector<int>> sequential_order(const ButcherTableau& t) {
  TableauClassification c;
  try {
    c = classify(t);
  } catch (const OrderCycle&) {
    return std::nullopt;
  }
  if (!c.dirk_permutation) return std::nullopt;
  const auto& perm = *c.dirk_permutation;
  const int s = t.stages();
  for (int k = 0; k < s; ++k) {
    for (int l = k + 1; l < s; ++l) {
      if (t.a(perm[k], perm[l]) != 0.0) return std::nullopt;
    }
  }
  return perm;
}

}  // namespace

RkStepResult rk_step(const ButcherTableau& t, const VectorField& f, const Vec& y0, double h,
                     const SolverSettings& settings, std::span<const Vec> guess) {
  if (!(h > 0)) throw InvalidArgument("step size must be positive");
  if (f.dim != y0.size()) throw DimensionMismatch("state dimension does not match vector field");
  const int s = t.stages();
  const Eigen::Index n = y0.size();
  if (!guess.empty() && static_cast<int>(guess.size()) != s) {
    throw DimensionMismatch("stage guess count does not match the tableau");
  }

  RkStepResult out;
  out.stages.assign(s, y0);
  out.stage_iters.assign(s, 0);
  std::vector<Vec> slopes(s, Vec::Zero(n));
  for (int i = 0; i < s && !guess.empty(); ++i) {
    if (guess[i].size() != n) throw DimensionMismatch("stage guess has wrong dimension");
    out.stages[i] = guess[i];
  }

  if (auto order = sequential_order(t)) {
    for (int i : *order) {
      Vec base = y0;
      for (int j = 0; j < s; ++j) {
        if (j != i && t.a(i, j) != 0.0) base += h * t.a(i, j) * slopes[j];
      }
      const double diag = h * t.a(i, i);
      if (diag == 0.0) {
        out.stages[i] = base;
        out.stage_iters[i] = 1;
      } else {
        auto map = [&](const Vec& y) -> Vec { return base + diag * eval_checked(f, y); };
        StageSolution sol = solve_fixed_point(map, out.stages[i], settings, i);
        out.stages[i] = std::move(sol.x);
        out.stage_iters[i] = sol.iters;
      }
      slopes[i] = eval_checked(f, out.stages[i]);
      out.iters += out.stage_iters[i];
    }
  } else {
    Vec stacked(s * n);
    for (int i = 0; i < s; ++i) stacked.segment(i * n, n) = out.stages[i];
    auto map = [&](const Vec& x) -> Vec {
      std::vector<Vec> k(s);
      for (int j = 0; j < s; ++j) k[j] = eval_checked(f, x.segment(j * n, n));
      Vec next(s * n);
      for (int i = 0; i < s; ++i) {
        Vec yi = y0;
        for (int j = 0; j < s; ++j) yi += h * t.a(i, j) * k[j];
        next.segment(i * n, n) = yi;
      }
      return next;
    };
    StageSolution sol = solve_fixed_point(map, std::move(stacked), settings, -1);
    for (int i = 0; i < s; ++i) {
      out.stages[i] = sol.x.segment(i * n, n);
      slopes[i] = eval_checked(f, out.stages[i]);
      out.stage_iters[i] = sol.iters;
    }
    out.iters = sol.iters;
  }

  out.y1 = y0;
  for (int i = 0; i < s; ++i) out.y1 += h * t.b(i) * slopes[i];
  return out;
}

ObservableStep evolve_observable(const ButcherTableau& t, const VectorField& f,
                                 const QuadraticAction& F, const Vec& y0, double h,
                                 const SolverSettings& settings) {
  const double r = check_symplectic(t);
  if (r > kEquivarianceTol) throw NotEquivariant(r);
  return evolve_observable(t, f, F, y0, h, rk_step(t, f, y0, h, settings));
}

ObservableStep evolve_observable(const ButcherTableau& t, const VectorField& f,
                                 const QuadraticAction& F, const Vec& y0, double h,
                                 const RkStepResult& step) {
  const double r = check_symplectic(t);
  if (r > kEquivarianceTol) throw NotEquivariant(r);
  ObservableStep out;
  out.z1 = F.value(y0);
  for (int i = 0; i < t.stages(); ++i) {
    const Vec& yi = step.stages[i];
    out.z1 += h * t.b(i) * F.derivative(yi, f(yi));
    out.stage_values.push_back(F.value(yi));
  }
  return out;
}

Lemma1Residuals lemma1_residual(const ButcherTableau& t, const VectorField& f,
                                const QuadraticAction& F, const Vec& y0, double h,
                                const SolverSettings& settings) {
  return lemma1_residual(t, f, F, y0, h, rk_step(t, f, y0, h, settings));
}

Lemma1Residuals lemma1_residual(const ButcherTableau& t, const VectorField& f,
                                const QuadraticAction& F, const Vec& y0, double h,
                                const RkStepResult& step) {
  const int s = t.stages();
  const auto& a = t.a();
  const auto& b = t.b();

  std::vector<Vec> slope(s), first(s);
  for (int j = 0; j < s; ++j) {
    slope[j] = f(step.stages[j]);
    first[j] = F.derivative(step.stages[j], slope[j]);
  }
  std::vector<std::vector<Vec>> second(s, std::vector<Vec>(s));
  for (int j = 0; j < s; ++j) {
    for (int k = j; k < s; ++k) {
      second[j][k] = F.second(slope[j], slope[k]);
      second[k][j] = second[j][k];
    }
  }

  const Vec fy0 = F.value(y0);
  Lemma1Residuals out;
  for (int i = 0; i < s; ++i) {
    Vec rhs = fy0;
    for (int j = 0; j < s; ++j) rhs += h * a(i, j) * first[j];
    for (int j = 0; j < s; ++j) {
      for (int k = 0; k < s; ++k) {
        const double c = a(i, j) * a(i, k) - a(i, j) * a(j, k) - a(i, k) * a(k, j);
        if (c != 0.0) rhs += 0.5 * h * h * c * second[j][k];
      }
    }
    out.stage.push_back(max_norm(F.value(step.stages[i]) - rhs));
  }

  Vec rhs = fy0;
  for (int i = 0; i < s; ++i) rhs += h * b(i) * first[i];
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double d = b(i) * b(j) - b(i) * a(i, j) - b(j) * a(j, i);
      if (d != 0.0) rhs += 0.5 * h * h * d * second[i][j];
    }
  }
  out.step = max_norm(F.value(step.y1) - rhs);
  return out;
}

}  // namespace qproj
