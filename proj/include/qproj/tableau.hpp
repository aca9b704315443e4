#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qproj {

// Coefficients (a, b) of an s-stage autonomous Runge-Kutta method.
// Node abscissae are not stored.
class ButcherTableau {
 public:
  // Throws InvalidArgument if shapes disagree or any entry is non-finite.
  ButcherTableau(Eigen::MatrixXd a, Eigen::VectorXd b);

  int stages() const { return static_cast<int>(b_.size()); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  double a(int i, int j) const { return a_(i, j); }
  double b(int i) const { return b_(i); }

  // Stage k of the result is stage perm[k] of this tableau.
  ButcherTableau permuted(const std::vector<int>& perm) const;

  bool operator==(const ButcherTableau& other) const = default;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

// a_ij = b_j below the diagonal, b_i / 2 on it, zero above.
ButcherTableau make_sydirk(const Eigen::VectorXd& b);

// max_{i,j} |b_i b_j - b_i a_ij - b_j a_ji|
double check_symplectic(const ButcherTableau& t);

// max over j != k of |a_ij a_ik - a_ij a_jk - a_ik a_kj|
double check_projectable(const ButcherTableau& t);

enum class TableauClass { Explicit, DIRK, SyDIRK, General };

std::string_view to_string(TableauClass c);

struct TableauClassification {
  double symplectic_residual = 0.0;
  double projectable_residual = 0.0;
  // 0-based; stage k of the lower-triangular ordering is original stage perm[k].
  std::optional<std::vector<int>> dirk_permutation;
  TableauClass kind = TableauClass::General;
};

inline constexpr double kDefaultClassifyTol = 1e-12;

// Stage j precedes stage i whenever |a_ij| > tol. If that relation is acyclic
// it is sorted topologically (ties by original index) and the ordering is
// reported. Throws OrderCycle when projectable_residual <= tol but a cycle
// remains, which means tol is too loose for this tableau.
TableauClassification classify(const ButcherTableau& t, double tol = kDefaultClassifyTol);

// midpoint, sydirk2, sydirk3_tj, gauss2, rk4, euler
ButcherTableau builtin_tableau(std::string_view name);
std::vector<std::string> builtin_tableau_names();

// Structured text document {"s": s, "a": [row-major], "b": [...]}, numbers at
// 17 significant digits.
std::string tableau_to_json(const ButcherTableau& t);
ButcherTableau tableau_from_json(std::string_view text);

// Builtin name if it matches one, otherwise a path to a tableau document.
ButcherTableau resolve_tableau(const std::string& name_or_path);

}  // namespace qproj
