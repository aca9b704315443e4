#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <random>
#include <string>
#include <string_view>

namespace qproj {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Real coordinates of complex matrices: row-major, real and imaginary parts
// interleaved. A block of k matrices occupies 2 k n^2 consecutive entries.
Eigen::VectorXd encode(const CMat& m);
CMat decode(const Eigen::VectorXd& v, int n, Eigen::Index offset = 0);
void encode_into(const CMat& m, Eigen::VectorXd& v, Eigen::Index offset);

inline CMat dagger(const CMat& m) { return m.adjoint(); }
inline CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

// M^dagger z - z M^dagger. Throws DimensionMismatch.
CMat ad_star(const CMat& m, const CMat& z);

// Real Frobenius inner product Re tr(A^dagger B).
double frobenius_inner(const CMat& a, const CMat& b);

// max |A + A^dagger| and max |A - A^dagger| entrywise.
double anti_hermitian_defect(const CMat& a);
double hermitian_defect(const CMat& a);

CMat random_complex(int n, std::mt19937_64& rng, double scale = 1.0);
CMat random_anti_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
CMat random_su(int n, std::mt19937_64& rng, double scale = 1.0);
CMat random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);

// Eigenbasis decomposition g = [L, z] + P z for z with distinct nonzero
// eigenvalues, with M^dagger = L + P/2 and N = -L + P/2 so that
// g = M^dagger z + z N.
struct LPSplitting {
  CMat V;
  Eigen::VectorXcd lambda;
  CMat L;
  CMat P;
  CMat M_dagger;
  CMat N;
};

inline constexpr double kDefaultEigTol = 1e-9;

// Eigenvalue gaps and magnitudes must exceed eig_tol times the spectral
// radius, otherwise DegenerateSpectrum. Anti-Hermitian (and Hermitian) z go
// through a Hermitian eigensolver so V is unitary.
LPSplitting lp_split(const CMat& z, const CMat& gval, double eig_tol = kDefaultEigTol);

// Delta_n W = sum_a [X_a, [X_a, W]] with X_a = i J_a the spin-(n-1)/2
// generators; spectrum {-l(l+1) : l = 0..n-1}, multiplicity 2l+1.
class DiscreteLaplacian {
 public:
  explicit DiscreteLaplacian(int n);

  // Cached per dimension; safe to call from several threads.
  static std::shared_ptr<const DiscreteLaplacian> shared(int n);

  int n() const { return n_; }
  const CMat& generator(int a) const { return gens_[a]; }

  CMat apply(const CMat& w) const;
  // Moore-Penrose pseudoinverse on all of C^{n x n}: the identity direction is
  // projected out first. No anti-Hermitian check.
  CMat pinv(const CMat& w) const;

  // n^2 x n^2 matrix of the operator in the elementary-matrix basis
  // (column-major vectorization).
  const CMat& operator_matrix() const { return op_; }
  // Sorted ascending.
  Eigen::VectorXd spectrum() const;

 private:
  int n_;
  CMat gens_[3];
  CMat op_;
  CMat pinv_op_;
};

CMat laplacian_apply(const DiscreteLaplacian& d, const CMat& w);
// Requires w anti-Hermitian within 1e-12 (relative); throws NotAntiHermitian.
CMat laplacian_pinv(const DiscreteLaplacian& d, const CMat& w);

struct ClosureReport {
  double bracket = 0.0;       // [S,T] outside su(n): anti-Hermitian defect + |trace|
  double quadratic = 0.0;     // TST outside u(n): anti-Hermitian defect
  double quadratic_trace = 0.0;  // largest |tr(TST)|; nonzero for n >= 3
  double jordan = 0.0;        // (ST + TS)/2 outside the Hermitian matrices
};

ClosureReport closure_checks(int samples, int n, std::uint64_t seed = 1);

// {"n": n, "re": [...], "im": [...]} row-major, 17 significant digits.
std::string matrix_to_json(const CMat& m);
CMat matrix_from_json(std::string_view text);

}  // namespace qproj
