#include "qproj/tableau.hpp"

#include "qproj/error.hpp"
#include "qproj/format.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qproj {

ButcherTableau::ButcherTableau(Eigen::MatrixXd a, Eigen::VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() == 0) throw InvalidArgument("tableau needs at least one stage");
  if (a_.rows() != b_.size() || a_.cols() != b_.size()) {
    throw InvalidArgument("tableau a must be " + std::to_string(b_.size()) + "x" +
                          std::to_string(b_.size()));
  }
  if (!a_.allFinite() || !b_.allFinite()) throw InvalidArgument("tableau has non-finite entries");
}

ButcherTableau ButcherTableau::permuted(const std::vector<int>& perm) const {
  const int s = stages();
  if (static_cast<int>(perm.size()) != s) throw InvalidArgument("permutation length mismatch");
  std::vector<bool> seen(s, false);
  for (int p : perm) {
    if (p < 0 || p >= s || seen[p]) throw InvalidArgument("not a permutation");
    seen[p] = true;
  }
  Eigen::MatrixXd a(s, s);
  Eigen::VectorXd b(s);
  for (int k = 0; k < s; ++k) {
    b(k) = b_(perm[k]);
    for (int l = 0; l < s; ++l) a(k, l) = a_(perm[k], perm[l]);
  }
  return ButcherTableau(std::move(a), std::move(b));
}

ButcherTableau make_sydirk(const Eigen::VectorXd& b) {
  const auto s = b.size();
  for (Eigen::Index i = 0; i < s; ++i) {
    if (b(i) == 0.0) throw ZeroWeight(static_cast<int>(i));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = b(j);
    a(i, i) = b(i) / 2;
  }
  return ButcherTableau(std::move(a), b);
}

double check_symplectic(const ButcherTableau& t) {
  const int s = t.stages();
  double worst = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double r = t.b(i) * t.b(j) - t.b(i) * t.a(i, j) - t.b(j) * t.a(j, i);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double check_projectable(const ButcherTableau& t) {
  const int s = t.stages();
  double worst = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      for (int k = 0; k < s; ++k) {
        if (j == k) continue;
        const double r =
            t.a(i, j) * t.a(i, k) - t.a(i, j) * t.a(j, k) - t.a(i, k) * t.a(k, j);
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

std::string_view to_string(TableauClass c) {
  switch (c) {
    case TableauClass::Explicit: return "Explicit";
    case TableauClass::DIRK: return "DIRK";
    case TableauClass::SyDIRK: return "SyDIRK";
    case TableauClass::General: return "General";
  }
  return "General";
}

namespace {

// Kahn's algorithm, smallest ready index first. Returns the ordering, or the
// stages left over (all of which lie on or behind a cycle).
struct SortResult {
  std::vector<int> order;
  std::vector<int> stuck;
};

SortResult stable_topological_sort(const ButcherTableau& t, double tol) {
  const int s = t.stages();
  std::vector<int> indegree(s, 0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (i != j && std::abs(t.a(i, j)) > tol) ++indegree[i];
    }
  }
  SortResult out;
  std::vector<bool> placed(s, false);
  for (int round = 0; round < s; ++round) {
    int next = -1;
    for (int i = 0; i < s; ++i) {
      if (!placed[i] && indegree[i] == 0) {
        next = i;
        break;
      }
    }
    if (next < 0) break;
    placed[next] = true;
    out.order.push_back(next);
    for (int i = 0; i < s; ++i) {
      if (i != next && std::abs(t.a(i, next)) > tol) --indegree[i];
    }
  }
  for (int i = 0; i < s; ++i) {
    if (!placed[i]) out.stuck.push_back(i);
  }
  return out;
}

}  // namespace

TableauClassification classify(const ButcherTableau& t, double tol) {
  if (!(tol > 0)) throw InvalidArgument("classification tolerance must be positive");
  TableauClassification out;
  out.symplectic_residual = check_symplectic(t);
  out.projectable_residual = check_projectable(t);

  SortResult sorted = stable_topological_sort(t, tol);
  if (!sorted.stuck.empty()) {
    if (out.projectable_residual <= tol) {
      std::ostringstream msg;
      msg << "stage order has a cycle among stages {";
      for (std::size_t k = 0; k < sorted.stuck.size(); ++k) {
        msg << (k ? ", " : "") << sorted.stuck[k] + 1;
      }
      msg << "} although projectable residual " << out.projectable_residual << " <= tol " << tol;
      throw OrderCycle(msg.str());
    }
    out.kind = TableauClass::General;
    return out;
  }

  const ButcherTableau p = t.permuted(sorted.order);
  out.dirk_permutation = std::move(sorted.order);

  bool weights_nonzero = true;
  bool diagonal_zero = true;
  for (int i = 0; i < p.stages(); ++i) {
    weights_nonzero = weights_nonzero && std::abs(p.b(i)) > tol;
    diagonal_zero = diagonal_zero && std::abs(p.a(i, i)) <= tol;
  }
  if (out.symplectic_residual <= tol && out.projectable_residual <= tol && weights_nonzero) {
    out.kind = TableauClass::SyDIRK;
  } else {
    out.kind = diagonal_zero ? TableauClass::Explicit : TableauClass::DIRK;
  }
  return out;
}

ButcherTableau builtin_tableau(std::string_view name) {
  if (name == "midpoint") return make_sydirk(Eigen::VectorXd::Ones(1));
  if (name == "sydirk2") return make_sydirk(Eigen::Vector2d(0.5, 0.5));
  if (name == "sydirk3_tj") {
    const double cbrt2 = std::cbrt(2.0);
    const double w = 1.0 / (2.0 - cbrt2);
    const double v = -cbrt2 / (2.0 - cbrt2);
    return make_sydirk(Eigen::Vector3d(w, v, w));
  }
  if (name == "gauss2") {
    const double r = std::sqrt(3.0) / 6.0;
    Eigen::Matrix2d a;
    a << 0.25, 0.25 - r, 0.25 + r, 0.25;
    return ButcherTableau(a, Eigen::Vector2d(0.5, 0.5));
  }
  if (name == "rk4") {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(1, 0) = 0.5;
    a(2, 1) = 0.5;
    a(3, 2) = 1.0;
    return ButcherTableau(a, Eigen::Vector4d(1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6));
  }
  if (name == "euler") return ButcherTableau(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
  throw UnknownName(std::string(name));
}

std::vector<std::string> builtin_tableau_names() {
  return {"midpoint", "sydirk2", "sydirk3_tj", "gauss2", "rk4", "euler"};
}

std::string tableau_to_json(const ButcherTableau& t) {
  std::ostringstream out;
  const int s = t.stages();
  out << "{\"s\": " << s << ", \"a\": [";
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      out << (i || j ? ", " : "") << format_double(t.a(i, j));
    }
  }
  out << "], \"b\": [";
  for (int i = 0; i < s; ++i) out << (i ? ", " : "") << format_double(t.b(i));
  out << "]}";
  return out.str();
}

ButcherTableau tableau_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("tableau document: ") + e.what());
  }
  try {
    const int s = doc.at("s").get<int>();
    const auto a_flat = doc.at("a").get<std::vector<double>>();
    const auto b_vec = doc.at("b").get<std::vector<double>>();
    if (s < 1 || static_cast<int>(b_vec.size()) != s ||
        static_cast<int>(a_flat.size()) != s * s) {
      throw ParseError("tableau document: field sizes do not match s = " + std::to_string(s));
    }
    Eigen::MatrixXd a(s, s);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) a(i, j) = a_flat[static_cast<std::size_t>(i * s + j)];
    }
    return ButcherTableau(std::move(a), Eigen::Map<const Eigen::VectorXd>(b_vec.data(), s));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tableau document: ") + e.what());
  }
}

ButcherTableau resolve_tableau(const std::string& name_or_path) {
  const auto names = builtin_tableau_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_tableau(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) throw UnknownName(name_or_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return tableau_from_json(buf.str());
}

}  // namespace qproj
