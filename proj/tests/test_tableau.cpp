#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qproj/error.hpp"
#include "qproj/tableau.hpp"

#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace qproj;
using namespace qproj::testing;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ButcherTableau classical_rk4() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(1, 0) = 0.5;
  a(2, 1) = 0.5;
  a(3, 2) = 1.0;
  return ButcherTableau(a, vec({1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}));
}

}  // namespace

TEST_CASE("make_sydirk builds the lower-triangular symplectic form") {
  const ButcherTableau one = make_sydirk(vec({1.0}));
  CHECK(one.a(0, 0) == 0.5);
  CHECK(one.b(0) == 1.0);

  const ButcherTableau two = make_sydirk(vec({0.5, 0.5}));
  Eigen::MatrixXd expected(2, 2);
  expected << 0.25, 0.0, 0.5, 0.25;
  CHECK(two.a() == expected);

  CHECK_THROWS_AS(make_sydirk(vec({1.0, 0.0})), ZeroWeight);
  try {
    make_sydirk(vec({1.0, 0.0}));
  } catch (const ZeroWeight& e) {
    CHECK(e.stage() == 1);
  }
}

TEST_CASE("tableau construction rejects bad shapes and values") {
  CHECK_THROWS_AS(ButcherTableau(Eigen::MatrixXd::Zero(2, 3), vec({1, 2})), InvalidArgument);
  CHECK_THROWS_AS(ButcherTableau(Eigen::MatrixXd::Zero(2, 2), vec({1})), InvalidArgument);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(ButcherTableau(a, vec({1})), InvalidArgument);
}

TEST_CASE("symplecticity residual") {
  CHECK(check_symplectic(make_sydirk(vec({1.0}))) == 0.0);
  CHECK(check_symplectic(builtin_tableau("gauss2")) <= 1e-15);
  // b1^2 - 2 b1 a11 with a11 = 0 gives 1/36 on the diagonal.
  CHECK(check_symplectic(classical_rk4()) >= 1.0 / 36.0);
  CHECK(check_symplectic(builtin_tableau("rk4")) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("projectability residual") {
  CHECK(check_projectable(builtin_tableau("gauss2")) == doctest::Approx(1.0 / 48.0).epsilon(1e-14));
  CHECK(std::abs(check_projectable(builtin_tableau("gauss2")) - 1.0 / 48.0) <= 1e-15);
  CHECK(check_projectable(builtin_tableau("euler")) == 0.0);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const ButcherTableau t = make_sydirk(random_weights(rng, uniform_int(rng, 1, 6)));
    CHECK(check_projectable(t) <= 1e-15);
    CHECK(check_symplectic(t) <= 1e-15);
  }
}

TEST_CASE("classification of builtin and permuted tableaus") {
  const TableauClassification mid = classify(builtin_tableau("midpoint"));
  CHECK(mid.kind == TableauClass::SyDIRK);
  REQUIRE(mid.dirk_permutation);
  CHECK(*mid.dirk_permutation == std::vector<int>{0});

  const ButcherTableau t = make_sydirk(vec({0.5, 0.5}));
  const TableauClassification id = classify(t);
  CHECK(id.kind == TableauClass::SyDIRK);
  CHECK(*id.dirk_permutation == std::vector<int>{0, 1});

  const ButcherTableau swapped = t.permuted({1, 0});
  const TableauClassification sw = classify(swapped);
  CHECK(sw.kind == TableauClass::SyDIRK);
  CHECK(*sw.dirk_permutation == std::vector<int>{1, 0});

  CHECK(classify(builtin_tableau("gauss2")).kind == TableauClass::General);
  CHECK(classify(builtin_tableau("rk4")).kind == TableauClass::Explicit);
  CHECK(classify(builtin_tableau("euler")).kind == TableauClass::Explicit);

  Eigen::MatrixXd dirk(2, 2);
  dirk << 0.3, 0.0, 0.2, 0.4;
  CHECK(classify(ButcherTableau(dirk, vec({0.5, 0.5}))).kind == TableauClass::DIRK);
}

TEST_CASE("random stage permutations are recovered") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const int s = uniform_int(rng, 2, 6);
    const ButcherTableau t = make_sydirk(random_weights(rng, s));
    const std::vector<int> perm = random_permutation(rng, s);
    const ButcherTableau shuffled = t.permuted(perm);
    const TableauClassification c = classify(shuffled);
    REQUIRE(c.kind == TableauClass::SyDIRK);
    CHECK(shuffled.permuted(*c.dirk_permutation) == t);
  }
}

TEST_CASE("projectable tableau with cyclic stage order") {
  // Both couplings exceed the tolerance while their product does not.
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1e-7, 1e-7, 0.0;
  CHECK_THROWS_AS(classify(ButcherTableau(a, vec({0.0, 0.0}))), OrderCycle);
}

TEST_CASE("builtin tableaus") {
  CHECK(builtin_tableau("midpoint") == make_sydirk(vec({1.0})));
  const ButcherTableau tj = builtin_tableau("sydirk3_tj");
  CHECK(tj.b(0) == doctest::Approx(1.351207).epsilon(1e-6));
  CHECK(tj.b(1) == doctest::Approx(-1.702414).epsilon(1e-6));
  CHECK(tj.b(2) == tj.b(0));
  CHECK(tj.b().sum() == doctest::Approx(1.0).epsilon(1e-15));

  const ButcherTableau g = builtin_tableau("gauss2");
  const double r = std::sqrt(3.0) / 6.0;
  CHECK(g.a(0, 1) == doctest::Approx(0.25 - r));
  CHECK(g.a(1, 0) == doctest::Approx(0.25 + r));
  CHECK_THROWS_AS(builtin_tableau("nope"), UnknownName);
  CHECK(builtin_tableau_names().size() >= 6);
}

TEST_CASE("tableau JSON round trip") {
  for (const auto& name : builtin_tableau_names()) {
    const ButcherTableau t = builtin_tableau(name);
    CHECK(tableau_from_json(tableau_to_json(t)) == t);
  }
  CHECK_THROWS_AS(tableau_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(tableau_from_json(R"({"s":2,"a":[1,2,3],"b":[1,1]})"), ParseError);

  const std::string path = "test_tableau_roundtrip.json";
  {
    std::ofstream out(path);
    out << tableau_to_json(builtin_tableau("sydirk2"));
  }
  CHECK(resolve_tableau(path) == builtin_tableau("sydirk2"));
  std::remove(path.c_str());
  CHECK_THROWS_AS(resolve_tableau("missing_tableau_file.json"), UnknownName);
}
