#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qproj/algebra.hpp"
#include "qproj/error.hpp"
#include "qproj/matrix.hpp"

#include <cmath>
#include <random>

using namespace qproj;

namespace {

const cplx I(0.0, 1.0);

double maxabs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng), n(rng), n(rng)};
}

Octonion random_octonion(std::mt19937_64& rng) {
  return {random_quaternion(rng), random_quaternion(rng)};
}

double dist(const Octonion& a, const Octonion& b) {
  return (a.to_vector() - b.to_vector()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("quaternion units") {
  CHECK(kQuatI * kQuatJ == kQuatK);
  CHECK(kQuatJ * kQuatK == kQuatI);
  CHECK(kQuatK * kQuatI == kQuatJ);
  CHECK(kQuatK * kQuatK == Quaternion::real(-1));
  CHECK(kQuatK.conj() == -kQuatK);
}

TEST_CASE("quaternion norm is multiplicative") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Quaternion a = random_quaternion(rng), b = random_quaternion(rng);
    CHECK((a * b).norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-14));
    CHECK(((a * b).conj() - b.conj() * a.conj()).norm() <= 1e-14);
  }
}

TEST_CASE("hopf map") {
  CHECK(hopf_map(Quaternion::real(1)) == Eigen::Vector3d(0, 0, 0.25));
  CHECK(hopf_map(kQuatK) == Eigen::Vector3d(0, 0, 0.25));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const Quaternion y = random_quaternion(rng);
    CHECK(std::abs(hopf_map(y).norm() - 0.25 * y.norm2()) <= 1e-14 * (1 + y.norm2()));
  }
}

TEST_CASE("octonions are alternative but not associative") {
  std::mt19937_64 rng(3);
  double witness = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Octonion x = random_octonion(rng), y = random_octonion(rng), z = random_octonion(rng);
    const double scale = 1 + x.norm2() * y.norm();
    CHECK(dist((x * x) * y, x * (x * y)) <= 1e-13 * scale);
    CHECK(dist((y * x) * x, y * (x * x)) <= 1e-13 * scale);
    CHECK(std::abs((x * y).norm() - x.norm() * y.norm()) <= 1e-13 * scale);
    CHECK(dist((x * y).conj(), y.conj() * x.conj()) <= 1e-13 * scale);
    witness = std::max(witness, dist((x * y) * z, x * (y * z)));
  }
  CHECK(witness > 0.1);
  const Octonion e = Octonion::real(1);
  const Octonion x = random_octonion(rng);
  CHECK(e * x == x);
  CHECK(x * e == x);
  CHECK(Octonion::from_vector(x.to_vector()) == x);
}

TEST_CASE("complex matrix encoding") {
  std::mt19937_64 rng(4);
  const CMat a = random_complex(3, rng);
  const Eigen::VectorXd v = encode(a);
  CHECK(v.size() == 18);
  CHECK(v(0) == a(0, 0).real());
  CHECK(v(1) == a(0, 0).imag());
  CHECK(v(2) == a(0, 1).real());
  CHECK(decode(v, 3) == a);
  Eigen::VectorXd two(36);
  encode_into(a, two, 0);
  encode_into(2.0 * a, two, 18);
  CHECK(decode(two, 3, 18) == 2.0 * a);
  CHECK(matrix_from_json(matrix_to_json(a)) == a);
  CHECK_THROWS_AS(matrix_from_json("[1,2"), ParseError);
}

TEST_CASE("ad_star") {
  std::mt19937_64 rng(5);
  const CMat z = random_complex(3, rng);
  CHECK(maxabs(ad_star(CMat::Identity(3, 3), z)) == 0.0);
  const CMat d1 = CMat(Eigen::VectorXcd::Random(3).asDiagonal());
  const CMat d2 = CMat(Eigen::VectorXcd::Random(3).asDiagonal());
  CHECK(maxabs(ad_star(d1, d2)) == 0.0);
  const CMat m = random_complex(3, rng);
  CHECK(maxabs(ad_star(m, z) - (m.adjoint() * z - z * m.adjoint())) <= 1e-15);
  CHECK_THROWS_AS(ad_star(m, random_complex(2, rng)), DimensionMismatch);
}

TEST_CASE("lp_split hand example") {
  CMat z = CMat::Zero(2, 2);
  z(0, 0) = I;
  z(1, 1) = 2.0 * I;
  CMat g(2, 2);
  g << 3.0 * I, 1.0, -1.0, I;
  const LPSplitting sp = lp_split(z, g);
  CMat l(2, 2);
  l << 0.0, -I, -I, 0.0;
  CMat p = CMat::Zero(2, 2);
  p(0, 0) = 3.0;
  p(1, 1) = 0.5;
  CHECK(maxabs(sp.L - l) <= 1e-15);
  CHECK(maxabs(sp.P - p) <= 1e-15);
  CHECK(maxabs(commutator(sp.L, z) + sp.P * z - g) <= 1e-15);
  CHECK(maxabs(sp.M_dagger * z + z * sp.N - g) <= 1e-15);
}

TEST_CASE("lp_split on random inputs") {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const CMat z = k % 2 ? random_anti_hermitian(n, rng) : random_complex(n, rng);
    const CMat g = random_complex(n, rng);
    const LPSplitting sp = lp_split(z, g);
    CHECK(maxabs(sp.M_dagger * z + z * sp.N - g) <= 1e-10 * maxabs(g));
    const CMat a = random_complex(n, rng);
    const CMat zu = z / z.norm();
    CHECK(maxabs(lp_split(zu, commutator(a / a.norm(), zu)).P) <= 1e-12);
  }
}

TEST_CASE("lp_split rejects degenerate spectra") {
  CMat z = CMat::Zero(3, 3);
  z(0, 0) = I;
  z(1, 1) = I;
  z(2, 2) = 2.0 * I;
  CHECK_THROWS_AS(lp_split(z, CMat::Ones(3, 3)), DegenerateSpectrum);
  CMat singular = CMat::Zero(2, 2);
  singular(0, 0) = I;
  CHECK_THROWS_AS(lp_split(singular, CMat::Ones(2, 2)), DegenerateSpectrum);
}

TEST_CASE("discrete Laplacian spectrum") {
  const DiscreteLaplacian d2(2);
  const Eigen::VectorXd ev = d2.spectrum();
  REQUIRE(ev.size() == 4);
  CHECK(ev(0) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(ev(3)) <= 1e-12);

  for (int n = 2; n <= 6; ++n) {
    const Eigen::VectorXd e = DiscreteLaplacian(n).spectrum();
    Eigen::Index k = 0;
    for (int l = n - 1; l >= 0; --l) {
      for (int m = 0; m < 2 * l + 1; ++m, ++k) CHECK(std::abs(e(k) + l * (l + 1.0)) <= 1e-8);
    }
  }
  CHECK(DiscreteLaplacian::shared(5).get() == DiscreteLaplacian::shared(5).get());
}

TEST_CASE("discrete Laplacian action and pseudoinverse") {
  const DiscreteLaplacian d(5);
  const CMat iI = I * CMat::Identity(5, 5);
  CHECK(maxabs(laplacian_apply(d, iI)) <= 1e-14);
  CHECK(maxabs(laplacian_pinv(d, iI)) <= 1e-14);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const CMat w = random_anti_hermitian(5, rng);
    CHECK(frobenius_inner(w, laplacian_apply(d, w)) <= 1e-12);
    const CMat traceless = w - (w.trace() / 5.0) * CMat::Identity(5, 5);
    CHECK(maxabs(laplacian_apply(d, laplacian_pinv(d, w)) - traceless) <= 1e-10);
    CHECK(maxabs(laplacian_pinv(d, laplacian_apply(d, w)) - traceless) <= 1e-10);
    CHECK(anti_hermitian_defect(laplacian_pinv(d, w)) <= 1e-12);
  }
  CHECK_THROWS_AS(laplacian_pinv(d, random_hermitian(5, rng)), NotAntiHermitian);
}

TEST_CASE("closure of matrix subspaces") {
  const ClosureReport r = closure_checks(200, 4, 9);
  CHECK(r.bracket <= 1e-13);
  CHECK(r.quadratic <= 1e-13);
  CHECK(r.jordan <= 1e-13);
  CHECK(r.quadratic_trace > 1e-3);

  std::mt19937_64 rng(8);
  const CMat s = random_su(3, rng);
  CHECK(maxabs(commutator(s, s)) == 0.0);
  const CMat a = random_hermitian(4, rng), b = random_hermitian(4, rng);
  CHECK(hermitian_defect(0.5 * (a * b + b * a)) <= 1e-13);
}
