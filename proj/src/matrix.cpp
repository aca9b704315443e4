#include "qproj/matrix.hpp"

#include "qproj/error.hpp"
#include "qproj/format.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace qproj {

Eigen::VectorXd encode(const CMat& m) {
  Eigen::VectorXd v(2 * m.size());
  encode_into(m, v, 0);
  return v;
}

void encode_into(const CMat& m, Eigen::VectorXd& v, Eigen::Index offset) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Eigen::Index k = offset + 2 * (r * m.cols() + c);
      v(k) = m(r, c).real();
      v(k + 1) = m(r, c).imag();
    }
  }
}

CMat decode(const Eigen::VectorXd& v, int n, Eigen::Index offset) {
  if (offset + 2 * n * n > v.size()) throw DimensionMismatch("matrix block exceeds vector");
  CMat m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Eigen::Index k = offset + 2 * (r * n + c);
      m(r, c) = cplx(v(k), v(k + 1));
    }
  }
  return m;
}

CMat ad_star(const CMat& m, const CMat& z) {
  if (m.rows() != z.rows() || m.cols() != z.cols() || m.rows() != m.cols()) {
    throw DimensionMismatch("ad_star needs square matrices of equal size");
  }
  const CMat md = m.adjoint();
  return md * z - z * md;
}

double frobenius_inner(const CMat& a, const CMat& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

double anti_hermitian_defect(const CMat& a) {
  return (a + a.adjoint()).cwiseAbs().maxCoeff();
}

double hermitian_defect(const CMat& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

CMat random_complex(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  CMat m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = cplx(re, im);
    }
  }
  return m;
}

CMat random_anti_hermitian(int n, std::mt19937_64& rng, double scale) {
  const CMat a = random_complex(n, rng, scale);
  return 0.5 * (a - a.adjoint());
}

CMat random_su(int n, std::mt19937_64& rng, double scale) {
  CMat a = random_anti_hermitian(n, rng, scale);
  const cplx tr = a.trace() / static_cast<double>(n);
  a.diagonal().array() -= tr;
  return a;
}

CMat random_hermitian(int n, std::mt19937_64& rng, double scale) {
  const CMat a = random_complex(n, rng, scale);
  return 0.5 * (a + a.adjoint());
}

LPSplitting lp_split(const CMat& z, const CMat& gval, double eig_tol) {
  const Eigen::Index n = z.rows();
  if (z.cols() != n || gval.rows() != n || gval.cols() != n) {
    throw DimensionMismatch("lp_split needs square matrices of equal size");
  }
  LPSplitting out;
  CMat v_inv;
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  const double normal_tol = 1e-13 * scale;
  if (anti_hermitian_defect(z) <= normal_tol || hermitian_defect(z) <= normal_tol) {
    const bool anti = anti_hermitian_defect(z) <= normal_tol;
    CMat h = anti ? CMat(cplx(0, 1) * z) : z;
    h = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> eig(h);
    out.V = eig.eigenvectors();
    v_inv = out.V.adjoint();
    // Diagonal of z itself in this basis.
    out.lambda = (v_inv * z * out.V).diagonal();
  } else {
    Eigen::ComplexEigenSolver<CMat> eig(z);
    if (eig.info() != Eigen::Success) throw DegenerateSpectrum("eigendecomposition failed", 0.0);
    out.V = eig.eigenvectors();
    Eigen::PartialPivLU<CMat> lu(out.V);
    v_inv = lu.inverse();
    out.lambda = eig.eigenvalues();
  }

  const double radius = out.lambda.cwiseAbs().maxCoeff();
  const double floor = eig_tol * radius;
  if (!(radius > 0)) throw DegenerateSpectrum("zero matrix has no splitting", 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(out.lambda(i));
    if (mag <= floor) throw DegenerateSpectrum("near-zero eigenvalue", mag);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double gap = std::abs(out.lambda(i) - out.lambda(j));
      if (gap <= floor) throw DegenerateSpectrum("repeated eigenvalue, gap", gap);
    }
  }

  const CMat k = v_inv * gval * out.V;
  CMat lt = CMat::Zero(n, n);
  CMat pt = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        pt(i, i) = k(i, i) / out.lambda(i);
      } else {
        lt(i, j) = k(i, j) / (out.lambda(j) - out.lambda(i));
      }
    }
  }
  out.L = out.V * lt * v_inv;
  out.P = out.V * pt * v_inv;
  out.M_dagger = out.L + 0.5 * out.P;
  out.N = -out.L + 0.5 * out.P;
  return out;
}

namespace {

Eigen::VectorXcd vec(const CMat& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

CMat unvec(const Eigen::VectorXcd& v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

}  // namespace

DiscreteLaplacian::DiscreteLaplacian(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("Laplacian dimension must be positive");
  const double j = 0.5 * (n - 1);
  CMat jz = CMat::Zero(n, n);
  CMat jplus = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jplus(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMat jminus = jplus.adjoint();
  const cplx i(0, 1);
  gens_[0] = i * (0.5 * (jplus + jminus));
  gens_[1] = i * ((jplus - jminus) / (2.0 * i));
  gens_[2] = i * jz;

  const int dim = n * n;
  op_ = CMat::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    CMat e = CMat::Zero(n, n);
    e(c % n, c / n) = 1.0;
    op_.col(c) = vec(apply(e));
  }
  // Exactly Hermitian in the orthonormal elementary basis.
  op_ = 0.5 * (op_ + op_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> eig(op_);
  Eigen::VectorXd inv = eig.eigenvalues();
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    inv(k) = std::abs(inv(k)) > 0.5 ? 1.0 / inv(k) : 0.0;
  }
  pinv_op_ = eig.eigenvectors() * inv.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
}

std::shared_ptr<const DiscreteLaplacian> DiscreteLaplacian::shared(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const DiscreteLaplacian>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const DiscreteLaplacian>(n);
  return slot;
}

CMat DiscreteLaplacian::apply(const CMat& w) const {
  if (w.rows() != n_ || w.cols() != n_) throw DimensionMismatch("Laplacian dimension mismatch");
  CMat out = CMat::Zero(n_, n_);
  for (const auto& x : gens_) out += commutator(x, commutator(x, w));
  return out;
}

CMat DiscreteLaplacian::pinv(const CMat& w) const {
  if (w.rows() != n_ || w.cols() != n_) throw DimensionMismatch("Laplacian dimension mismatch");
  CMat centered = w;
  centered.diagonal().array() -= w.trace() / static_cast<double>(n_);
  return unvec(pinv_op_ * vec(centered), n_);
}

Eigen::VectorXd DiscreteLaplacian::spectrum() const {
  Eigen::SelfAdjointEigenSolver<CMat> eig(op_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

CMat laplacian_apply(const DiscreteLaplacian& d, const CMat& w) { return d.apply(w); }

CMat laplacian_pinv(const DiscreteLaplacian& d, const CMat& w) {
  if (w.rows() != d.n() || w.cols() != d.n()) throw DimensionMismatch("Laplacian dimension mismatch");
  const double defect = anti_hermitian_defect(w);
  if (defect > 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff())) throw NotAntiHermitian(defect);
  return d.pinv(w);
}

ClosureReport closure_checks(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ClosureReport out;
  for (int k = 0; k < samples; ++k) {
    const CMat s = random_su(n, rng);
    const CMat t = random_su(n, rng);
    const CMat br = commutator(s, t);
    out.bracket = std::max(out.bracket, anti_hermitian_defect(br) + std::abs(br.trace()));
    const CMat tst = t * s * t;
    out.quadratic = std::max(out.quadratic, anti_hermitian_defect(tst));
    out.quadratic_trace = std::max(out.quadratic_trace, std::abs(tst.trace()));

    const CMat hs = random_hermitian(n, rng);
    const CMat ht = random_hermitian(n, rng);
    out.jordan = std::max(out.jordan, hermitian_defect(0.5 * (hs * ht + ht * hs)));
  }
  return out;
}

std::string matrix_to_json(const CMat& m) {
  std::ostringstream re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const char* sep = (r || c) ? ", " : "";
      re << sep << format_double(m(r, c).real());
      im << sep << format_double(m(r, c).imag());
    }
  }
  return "{\"n\": " + std::to_string(m.rows()) + ", \"re\": [" + re.str() + "], \"im\": [" +
         im.str() + "]}";
}

CMat matrix_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const int n = doc.at("n").get<int>();
    const auto re = doc.at("re").get<std::vector<double>>();
    const auto im = doc.at("im").get<std::vector<double>>();
    if (n < 1 || re.size() != static_cast<std::size_t>(n * n) || im.size() != re.size()) {
      throw ParseError("matrix document: sizes do not match n");
    }
    CMat m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const auto k = static_cast<std::size_t>(r * n + c);
        m(r, c) = cplx(re[k], im[k]);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix document: ") + e.what());
  }
}

}  // namespace qproj
