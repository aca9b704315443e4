#pragma once

#include "qproj/algebra.hpp"
#include "qproj/descent.hpp"
#include "qproj/matrix.hpp"
#include "qproj/rk_engine.hpp"
#include "qproj/trajectory.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qproj {

// Operators T on Y (parametrized by a real vector) with the induced action
// beta(T) on Z: F'(y) T y = beta(T) F(y). `jordan` is the closed form of
// [beta(T)^2 - beta(T^2)] z and `square` the parameter of T^2.
struct OperatorFamily {
  std::function<Vec(std::mt19937_64&)> sample;
  std::function<Vec(const Vec&, const Vec&)> apply;
  std::function<Vec(const Vec&, const Vec&)> beta;
  std::function<Vec(const Vec&)> square;
  std::function<Vec(const Vec&, const Vec&)> jordan;
};

// f on Y, quadratic F: Y -> Z, and the F-related pair (g, gamma) on Z.
struct ProjectableSystem {
  std::string name;
  int dim_y = 0;
  int dim_z = 0;
  VectorField f;
  QuadraticAction F;
  ReducedSystem reduced;
  std::vector<std::string> diagnostic_names;
  Diagnostics diagnostics;
  // Standard full-space initial data for this system; z0 = F(y0).
  std::function<Vec(std::mt19937_64&)> sample_y;
  // Present when the descended stages admit the factored (Cayley-type) form.
  std::optional<MatrixSplitFlow> split;
  std::optional<OperatorFamily> operators;
  // Set when Y = (q, p) complex n x n pairs and F(q, p) = q^dagger p.
  std::optional<int> matrix_pair_n;
};

struct ConsistencyReport {
  double relatedness = 0.0;  // |F'(y)f(y) - g(F(y))| / (1 + |g(F(y))|)
  double gamma = 0.0;        // |F''(f, f) - gamma(F(y))| / (1 + |gamma(F(y))|)
};

ConsistencyReport consistency_check(const ProjectableSystem& sys, int samples,
                                    std::uint64_t seed = 1);

inline constexpr double kConsistencyTol = 1e-10;

// --- catalog -------------------------------------------------------------

using MatrixMap = std::function<CMat(const CMat&)>;

// grad eta(z) = W .* z with W_ab = 1 + (a + b) / (2n); eta(z) = 1/2 sum W |z|^2.
// Maps u(n) into u(n).
MatrixMap weighted_gradient(int n);
std::function<double(const CMat&)> weighted_energy(int n);

// Y = (q, p), F = q^dagger p, f = (q grad_eta, -p grad_eta^dagger),
// g(z) = ad*_{grad_eta(z)} z, gamma(z) = -2 grad_eta^dagger z grad_eta^dagger.
ProjectableSystem matrix_lie_poisson(int n, MatrixMap grad_eta,
                                     std::function<double(const CMat&)> eta = {});

// Quaternion lift of the rigid body: F(y) = 1/4 y k y*, eta = 1/2 sum z_a^2 / I_a.
ProjectableSystem hopf_rigid_body(const Eigen::Vector3d& inertia);

// Y = octonions, F(y) = |y|^2, f(y) = 1/2 a(F(y)) y. `product` replaces the
// Cayley-Dickson product; with a non-default product pass verify = false.
ProjectableSystem octonion_flow(std::function<Octonion(double)> a,
                                OctonionProduct product = cayley_dickson_product,
                                bool verify = true);

// Default octonion coefficient: a(z) = x0 + sin(z) x1 for fixed octonions.
std::function<Octonion(double)> default_octonion_coefficient();

// Semidirect-product Lie-Poisson system on (w, theta), lifted to
// block-triangular 2n x 2n (q, p). Empty closures default to the Laplacian
// pseudoinverse.
ProjectableSystem semidirect_mhd(int n, MatrixMap m1 = {}, MatrixMap m2 = {});

// Arbitrary matrix flow made projectable through the L/P splitting:
// f(q, p) = (q M(z), p N(z)), gamma(z) = 2 M(z)^dagger z N(z), z = q^dagger p.
ProjectableSystem general_matrix_flow(int n, MatrixMap g);

// g(z) = [A, z] - (S z + z S) / 10 with fixed seeded A, S.
MatrixMap default_matrix_flow(int n);

// w' = [Delta^+ w, w] + nu Delta w on u(n) with band-limited unit-enstrophy
// initial data in su(n).
ProjectableSystem zeitlin_ns(int n, double nu);

// Random anti-Hermitian traceless matrix built from the eigenspaces of the
// discrete Laplacian with 1 <= l <= max_l, scaled to 1/2 |w|^2 = 1.
CMat band_limited_su(int n, int max_l, std::mt19937_64& rng);

// --- operator identities ----------------------------------------------------

struct BetaReport {
  double beta = 0.0;         // |F'(y) T y - beta(T) F(y)|
  double jordan = 0.0;       // |[beta(T)^2 - beta(T^2)] F(y) - F''(Ty, Ty)|
  double closed_form = 0.0;  // |closed form - [beta(T)^2 - beta(T^2)] F(y)|
  std::optional<double> momentum;  // |<F(y), M> - 1/2 omega(T_M y, y)| for matrix pairs
};

// Relative residuals of the beta condition and its Jordan consequence at
// random y and operator parameters. Throws InvalidArgument if the system has
// no operator family.
BetaReport beta_condition_check(const ProjectableSystem& sys, int samples,
                                std::uint64_t seed = 1);

}  // namespace qproj
