#include "qproj/systems.hpp"

#include "qproj/error.hpp"
#include "qproj/stage_solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qproj {

namespace {

// --- complex matrix pairs (q, p) -------------------------------------------

Vec encode_blocks(std::initializer_list<CMat> blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += 2 * b.size();
  Vec v(total);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    encode_into(b, v, offset);
    offset += 2 * b.size();
  }
  return v;
}

CMat block(const Vec& v, int n, int index) { return decode(v, n, 2 * n * n * index); }

QuadraticAction pair_product_map(int n) {
  QuadraticAction F;
  F.dim_y = 4 * n * n;
  F.dim_z = 2 * n * n;
  F.value = [n](const Vec& y) { return encode(block(y, n, 0).adjoint() * block(y, n, 1)); };
  F.derivative = [n](const Vec& y, const Vec& v) {
    return encode(block(v, n, 0).adjoint() * block(y, n, 1) +
                  block(y, n, 0).adjoint() * block(v, n, 1));
  };
  F.second = [n](const Vec& u, const Vec& v) {
    return encode(block(u, n, 0).adjoint() * block(v, n, 1) +
                  block(v, n, 0).adjoint() * block(u, n, 1));
  };
  return F;
}

// T_{M,N}(q, p) = (q M, p N), beta(T) z = M^dagger z + z N.
OperatorFamily pair_operators(int n) {
  OperatorFamily ops;
  ops.sample = [n](std::mt19937_64& rng) {
    return encode_blocks({random_complex(n, rng, 0.5), random_complex(n, rng, 0.5)});
  };
  ops.apply = [n](const Vec& t, const Vec& y) {
    return encode_blocks({block(y, n, 0) * block(t, n, 0), block(y, n, 1) * block(t, n, 1)});
  };
  ops.beta = [n](const Vec& t, const Vec& z) {
    const CMat zm = decode(z, n);
    return encode(block(t, n, 0).adjoint() * zm + zm * block(t, n, 1));
  };
  ops.square = [n](const Vec& t) {
    const CMat m = block(t, n, 0);
    const CMat nn = block(t, n, 1);
    return encode_blocks({m * m, nn * nn});
  };
  ops.jordan = [n](const Vec& t, const Vec& z) {
    return encode(2.0 * block(t, n, 0).adjoint() * decode(z, n) * block(t, n, 1));
  };
  return ops;
}

double pair_scale(int n) { return 1.0 / (std::sqrt(2.0) * std::pow(n, 0.25)); }

std::vector<double> sorted_eigenvalues(const CMat& z) {
  Eigen::ComplexEigenSolver<CMat> eig(z, false);
  std::vector<cplx> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + z.rows());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<double> out;
  for (const auto& e : ev) {
    out.push_back(e.real());
    out.push_back(e.imag());
  }
  return out;
}

void require_consistent(const ProjectableSystem& sys) {
  const ConsistencyReport r = consistency_check(sys, 4, 20240917);
  if (!(r.relatedness <= kConsistencyTol) || !(r.gamma <= kConsistencyTol)) {
    throw Error(sys.name + ": consistency self-test failed (relatedness " +
                std::to_string(r.relatedness) + ", gamma " + std::to_string(r.gamma) + ")");
  }
}

// --- semidirect block matrices ---------------------------------------------

// q = [[q1, q2^dagger], [0, q1]]
CMat q_shape(const CMat& a, const CMat& b) {
  const Eigen::Index n = a.rows();
  CMat m = CMat::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, n) = b.adjoint();
  m.bottomRightCorner(n, n) = a;
  return m;
}

// p = [[p2^dagger, 0], [p1, p2^dagger]]
CMat p_shape(const CMat& a, const CMat& b) {
  const Eigen::Index n = a.rows();
  CMat m = CMat::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = b.adjoint();
  m.bottomLeftCorner(n, n) = a;
  m.bottomRightCorner(n, n) = b.adjoint();
  return m;
}

std::pair<CMat, CMat> q_blocks(const CMat& m) {
  const Eigen::Index n = m.rows() / 2;
  return {m.topLeftCorner(n, n), m.topRightCorner(n, n).adjoint()};
}

std::pair<CMat, CMat> p_blocks(const CMat& m) {
  const Eigen::Index n = m.rows() / 2;
  return {m.bottomLeftCorner(n, n), m.topLeftCorner(n, n).adjoint()};
}

}  // namespace

ConsistencyReport consistency_check(const ProjectableSystem& sys, int samples,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ConsistencyReport out;
  for (int k = 0; k < samples; ++k) {
    Vec y = sys.sample_y(rng);
    const double scale = 0.3 * max_norm(y);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * normal(rng);
    const Vec z = sys.F.value(y);
    const Vec fy = sys.f(y);
    const Vec gz = sys.reduced.g(z);
    const Vec cz = sys.reduced.gamma(z);
    out.relatedness = std::max(out.relatedness,
                               max_norm(sys.F.derivative(y, fy) - gz) / (1.0 + max_norm(gz)));
    out.gamma = std::max(out.gamma, max_norm(sys.F.second(fy, fy) - cz) / (1.0 + max_norm(cz)));
  }
  return out;
}

MatrixMap weighted_gradient(int n) {
  Eigen::MatrixXd w(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) w(a, b) = 1.0 + (a + b) / (2.0 * n);
  }
  return [w](const CMat& z) -> CMat { return w.cast<cplx>().cwiseProduct(z); };
}

std::function<double(const CMat&)> weighted_energy(int n) {
  MatrixMap grad = weighted_gradient(n);
  return [grad](const CMat& z) { return 0.5 * frobenius_inner(z, grad(z)); };
}

ProjectableSystem matrix_lie_poisson(int n, MatrixMap grad_eta,
                                     std::function<double(const CMat&)> eta) {
  if (n < 2) throw InvalidArgument("matrix_lie_poisson needs n >= 2");
  if (!grad_eta) throw InvalidArgument("matrix_lie_poisson needs grad_eta");
  ProjectableSystem sys;
  sys.name = "matrix_lie_poisson";
  sys.dim_y = 4 * n * n;
  sys.dim_z = 2 * n * n;
  sys.matrix_pair_n = n;
  sys.F = pair_product_map(n);
  sys.f = {sys.dim_y, [n, grad_eta](const Vec& y) {
             const CMat q = block(y, n, 0);
             const CMat p = block(y, n, 1);
             const CMat m = grad_eta(q.adjoint() * p);
             return encode_blocks({q * m, -p * m.adjoint()});
           }};
  sys.reduced = {sys.dim_z,
                 [n, grad_eta](const Vec& z) {
                   const CMat zm = decode(z, n);
                   return encode(ad_star(grad_eta(zm), zm));
                 },
                 [n, grad_eta](const Vec& z) {
                   const CMat zm = decode(z, n);
                   const CMat a = grad_eta(zm).adjoint();
                   return encode(-2.0 * a * zm * a);
                 }};
  if (eta) sys.diagnostic_names.push_back("eta");
  sys.diagnostic_names.push_back("frobenius");
  for (int k = 0; k < n; ++k) {
    sys.diagnostic_names.push_back("eig" + std::to_string(k) + "_re");
    sys.diagnostic_names.push_back("eig" + std::to_string(k) + "_im");
  }
  sys.diagnostics = [n, eta](const Vec& z) {
    const CMat zm = decode(z, n);
    std::vector<double> row;
    if (eta) row.push_back(eta(zm));
    row.push_back(zm.norm());
    for (double e : sorted_eigenvalues(zm)) row.push_back(e);
    return row;
  };
  sys.sample_y = [n](std::mt19937_64& rng) {
    return encode_blocks({random_complex(n, rng, pair_scale(n)), random_complex(n, rng, pair_scale(n))});
  };
  sys.split = MatrixSplitFlow{n, [grad_eta](const CMat& z) {
                                CMat a = grad_eta(z).adjoint();
                                CMat b = -a;
                                return std::make_pair(std::move(a), std::move(b));
                              }};
  sys.operators = pair_operators(n);
  require_consistent(sys);
  return sys;
}

ProjectableSystem hopf_rigid_body(const Eigen::Vector3d& inertia) {
  if (!(inertia.minCoeff() > 0)) throw InvalidArgument("inertia components must be positive");
  const Eigen::Vector3d inv = inertia.cwiseInverse();
  auto grad = [inv](const Eigen::Vector3d& z) -> Eigen::Vector3d { return inv.cwiseProduct(z); };

  ProjectableSystem sys;
  sys.name = "hopf_rigid_body";
  sys.dim_y = 4;
  sys.dim_z = 3;
  auto quat = [](const Vec& v) { return Quaternion{v(0), v(1), v(2), v(3)}; };
  sys.F.dim_y = 4;
  sys.F.dim_z = 3;
  sys.F.value = [quat](const Vec& y) -> Vec { return hopf_map(quat(y)); };
  sys.F.derivative = [quat](const Vec& y, const Vec& v) -> Vec {
    const Quaternion qy = quat(y), qv = quat(v);
    return (0.25 * (qv * kQuatK * qy.conj() + qy * kQuatK * qv.conj())).imag();
  };
  sys.F.second = [quat](const Vec& u, const Vec& v) -> Vec {
    const Quaternion qu = quat(u), qv = quat(v);
    return (0.25 * (qu * kQuatK * qv.conj() + qv * kQuatK * qu.conj())).imag();
  };
  sys.f = {4, [quat, grad](const Vec& y) -> Vec {
             const Quaternion qy = quat(y);
             const Quaternion x = -0.5 * Quaternion::pure(grad(hopf_map(qy)));
             return (x * qy).to_vector();
           }};
  sys.reduced = {3,
                 [grad](const Vec& z) -> Vec {
                   const Eigen::Vector3d zz = z;
                   return zz.cross(grad(zz));
                 },
                 [grad](const Vec& z) -> Vec {
                   const Eigen::Vector3d zz = z;
                   const Eigen::Vector3d gr = grad(zz);
                   return zz.cross(gr).cross(gr) + 0.5 * zz * gr.squaredNorm();
                 }};
  sys.diagnostic_names = {"eta", "norm"};
  sys.diagnostics = [inv](const Vec& z) {
    return std::vector<double>{0.5 * z.cwiseProduct(z).dot(inv), z.norm()};
  };
  // |F(y)| = |y|^2 / 4, so |y| = 2 puts z on the unit sphere.
  sys.sample_y = [](std::mt19937_64& rng) -> Vec {
    std::normal_distribution<double> normal;
    Eigen::Vector4d y(normal(rng), normal(rng), normal(rng), normal(rng));
    return 2.0 * y.normalized();
  };
  OperatorFamily ops;
  ops.sample = [](std::mt19937_64& rng) -> Vec {
    std::normal_distribution<double> normal;
    return Eigen::Vector4d(normal(rng), normal(rng), normal(rng), normal(rng));
  };
  ops.apply = [quat](const Vec& x, const Vec& y) -> Vec { return (quat(x) * quat(y)).to_vector(); };
  ops.beta = [quat](const Vec& x, const Vec& z) -> Vec {
    const Quaternion qx = quat(x);
    const Quaternion qz = Quaternion::pure(z);
    return (qx * qz + qz * qx.conj()).imag();
  };
  ops.square = [quat](const Vec& x) -> Vec { return (quat(x) * quat(x)).to_vector(); };
  ops.jordan = [quat](const Vec& x, const Vec& z) -> Vec {
    const Quaternion qx = quat(x);
    return (2.0 * (qx * Quaternion::pure(z) * qx.conj())).imag();
  };
  sys.operators = std::move(ops);
  require_consistent(sys);
  return sys;
}

std::function<Octonion(double)> default_octonion_coefficient() {
  Eigen::Matrix<double, 8, 1> x0, x1;
  x0 << -0.2, 0.5, -0.3, 0.8, 0.1, -0.6, 0.4, 0.2;
  x1 << 0.3, -0.4, 0.2, 0.1, -0.5, 0.3, 0.6, -0.1;
  const Octonion o0 = Octonion::from_vector(x0);
  const Octonion o1 = Octonion::from_vector(x1);
  return [o0, o1](double z) { return o0 + std::sin(z) * o1; };
}

ProjectableSystem octonion_flow(std::function<Octonion(double)> a, OctonionProduct product,
                                bool verify) {
  if (!a) throw InvalidArgument("octonion_flow needs a coefficient function");
  ProjectableSystem sys;
  sys.name = "octonion_flow";
  sys.dim_y = 8;
  sys.dim_z = 1;
  auto oct = [](const Vec& v) { return Octonion::from_vector(v); };
  sys.F.dim_y = 8;
  sys.F.dim_z = 1;
  sys.F.value = [](const Vec& y) -> Vec { return Vec::Constant(1, y.squaredNorm()); };
  sys.F.derivative = [](const Vec& y, const Vec& v) -> Vec { return Vec::Constant(1, 2.0 * y.dot(v)); };
  sys.F.second = [](const Vec& u, const Vec& v) -> Vec { return Vec::Constant(1, 2.0 * u.dot(v)); };
  sys.f = {8, [a, product, oct](const Vec& y) -> Vec {
             return (0.5 * product(a(y.squaredNorm()), oct(y))).to_vector();
           }};
  sys.reduced = {1, [a](const Vec& z) -> Vec { return a(z(0)).re() * z; },
                 [a](const Vec& z) -> Vec { return 0.5 * a(z(0)).norm2() * z; }};
  sys.diagnostic_names = {"z"};
  sys.diagnostics = [](const Vec& z) { return std::vector<double>{z(0)}; };
  sys.sample_y = [](std::mt19937_64& rng) -> Vec {
    std::normal_distribution<double> normal;
    Vec y(8);
    for (auto& c : y) c = normal(rng);
    return y.normalized();
  };
  OperatorFamily ops;
  ops.sample = [](std::mt19937_64& rng) -> Vec {
    std::normal_distribution<double> normal;
    Vec x(8);
    for (auto& c : x) c = normal(rng);
    return x;
  };
  ops.apply = [product, oct](const Vec& x, const Vec& y) -> Vec { return product(oct(x), oct(y)).to_vector(); };
  ops.beta = [](const Vec& x, const Vec& z) -> Vec { return 2.0 * x(0) * z; };
  ops.square = [product, oct](const Vec& x) -> Vec { return product(oct(x), oct(x)).to_vector(); };
  ops.jordan = [](const Vec& x, const Vec& z) -> Vec { return 2.0 * x.squaredNorm() * z; };
  sys.operators = std::move(ops);
  if (verify) require_consistent(sys);
  return sys;
}

ProjectableSystem semidirect_mhd(int n, MatrixMap m1, MatrixMap m2) {
  if (n < 2) throw InvalidArgument("semidirect_mhd needs n >= 2");
  auto lap = DiscreteLaplacian::shared(n);
  if (!m1) m1 = [lap](const CMat& w) { return lap->pinv(w); };
  if (!m2) m2 = [lap](const CMat& t) { return lap->pinv(t); };

  ProjectableSystem sys;
  sys.name = "semidirect_mhd";
  sys.dim_y = 8 * n * n;  // q1, q2, p1, p2
  sys.dim_z = 4 * n * n;  // w, theta

  auto q_of = [n](const Vec& y) { return q_shape(block(y, n, 0), block(y, n, 1)); };
  auto p_of = [n](const Vec& y) { return p_shape(block(y, n, 2), block(y, n, 3)); };
  auto z_of = [](const CMat& zz) {
    const auto [w, theta] = p_blocks(zz);
    return encode_blocks({w, theta});
  };
  sys.F.dim_y = sys.dim_y;
  sys.F.dim_z = sys.dim_z;
  sys.F.value = [q_of, p_of, z_of](const Vec& y) { return z_of(q_of(y).adjoint() * p_of(y)); };
  sys.F.derivative = [q_of, p_of, z_of](const Vec& y, const Vec& v) {
    return z_of(q_of(v).adjoint() * p_of(y) + q_of(y).adjoint() * p_of(v));
  };
  sys.F.second = [q_of, p_of, z_of](const Vec& u, const Vec& v) {
    return z_of(q_of(u).adjoint() * p_of(v) + q_of(v).adjoint() * p_of(u));
  };
  sys.f = {sys.dim_y, [n, m1, m2, q_of, p_of](const Vec& y) {
             const CMat q = q_of(y);
             const CMat p = p_of(y);
             const auto [w, theta] = p_blocks(q.adjoint() * p);
             const CMat m = q_shape(m1(w), m2(theta));
             const auto [dq1, dq2] = q_blocks(q * m);
             const auto [dp1, dp2] = p_blocks(-p * m.adjoint());
             return encode_blocks({dq1, dq2, dp1, dp2});
           }};
  sys.reduced = {
      sys.dim_z,
      [n, m1, m2](const Vec& z) {
        const CMat w = block(z, n, 0);
        const CMat th = block(z, n, 1);
        const CMat a = m1(w);
        const CMat b = m2(th);
        return encode_blocks({commutator(a.adjoint(), w) + commutator(b, th.adjoint()),
                              commutator(th, a)});
      },
      [n, m1, m2](const Vec& z) {
        const CMat w = block(z, n, 0);
        const CMat th = block(z, n, 1);
        const CMat a = m1(w);
        const CMat b = m2(th);
        const CMat ad = a.adjoint();
        return encode_blocks(
            {-2.0 * (ad * w * ad + ad * th.adjoint() * b + b * th.adjoint() * ad), -2.0 * (a * th * a)});
      }};
  sys.diagnostic_names = {"w_norm", "theta_norm", "cross", "antiherm_defect"};
  sys.diagnostics = [n](const Vec& z) {
    const CMat w = block(z, n, 0);
    const CMat th = block(z, n, 1);
    return std::vector<double>{w.norm(), th.norm(), frobenius_inner(w, th),
                               std::max(anti_hermitian_defect(w), anti_hermitian_defect(th))};
  };
  sys.sample_y = [n](std::mt19937_64& rng) {
    const CMat w0 = random_su(n, rng, 0.5);
    const CMat th0 = random_su(n, rng, 0.5);
    return encode_blocks({CMat::Identity(n, n), CMat::Zero(n, n), w0, th0});
  };

  OperatorFamily ops;
  ops.sample = [n](std::mt19937_64& rng) {
    return encode_blocks({random_complex(n, rng, 0.5), random_complex(n, rng, 0.5),
                          random_complex(n, rng, 0.5), random_complex(n, rng, 0.5)});
  };
  auto m_of = [n](const Vec& t) { return q_shape(block(t, n, 0), block(t, n, 1)); };
  auto n_of = [n](const Vec& t) { return p_shape(block(t, n, 2), block(t, n, 3)); };
  auto zz_of = [n](const Vec& z) { return p_shape(block(z, n, 0), block(z, n, 1)); };
  ops.apply = [q_of, p_of, m_of, n_of](const Vec& t, const Vec& y) {
    const auto [q1, q2] = q_blocks(q_of(y) * m_of(t));
    const auto [p1, p2] = p_blocks(p_of(y) * n_of(t));
    return encode_blocks({q1, q2, p1, p2});
  };
  ops.beta = [m_of, n_of, zz_of, z_of](const Vec& t, const Vec& z) {
    const CMat zz = zz_of(z);
    return z_of(m_of(t).adjoint() * zz + zz * n_of(t));
  };
  ops.square = [m_of, n_of](const Vec& t) {
    const CMat m = m_of(t);
    const CMat nn = n_of(t);
    const auto [m1b, m2b] = q_blocks(m * m);
    const auto [n1b, n2b] = p_blocks(nn * nn);
    return encode_blocks({m1b, m2b, n1b, n2b});
  };
  ops.jordan = [m_of, n_of, zz_of, z_of](const Vec& t, const Vec& z) {
    return z_of(2.0 * m_of(t).adjoint() * zz_of(z) * n_of(t));
  };
  sys.operators = std::move(ops);
  require_consistent(sys);
  return sys;
}

ProjectableSystem general_matrix_flow(int n, MatrixMap g) {
  if (n < 2) throw InvalidArgument("general_matrix_flow needs n >= 2");
  if (!g) throw InvalidArgument("general_matrix_flow needs g");
  ProjectableSystem sys;
  sys.name = "general_matrix_flow";
  sys.dim_y = 4 * n * n;
  sys.dim_z = 2 * n * n;
  sys.matrix_pair_n = n;
  sys.F = pair_product_map(n);
  sys.f = {sys.dim_y, [n, g](const Vec& y) {
             const CMat q = block(y, n, 0);
             const CMat p = block(y, n, 1);
             const CMat z = q.adjoint() * p;
             const LPSplitting sp = lp_split(z, g(z));
             return encode_blocks({q * sp.M_dagger.adjoint(), p * sp.N});
           }};
  sys.reduced = {sys.dim_z, [n, g](const Vec& z) { return encode(g(decode(z, n))); },
                 [n, g](const Vec& z) {
                   const CMat zm = decode(z, n);
                   const LPSplitting sp = lp_split(zm, g(zm));
                   return encode(2.0 * sp.M_dagger * zm * sp.N);
                 }};
  sys.diagnostic_names = {"frobenius"};
  sys.diagnostics = [n](const Vec& z) { return std::vector<double>{decode(z, n).norm()}; };
  sys.sample_y = [n](std::mt19937_64& rng) {
    return encode_blocks({random_complex(n, rng, pair_scale(n)), random_complex(n, rng, pair_scale(n))});
  };
  sys.split = MatrixSplitFlow{n, [g](const CMat& z) {
                                const LPSplitting sp = lp_split(z, g(z));
                                return std::make_pair(sp.M_dagger, sp.N);
                              }};
  sys.operators = pair_operators(n);
  require_consistent(sys);
  return sys;
}

MatrixMap default_matrix_flow(int n) {
  std::mt19937_64 rng(7);
  const CMat a = random_complex(n, rng, 0.5);
  const CMat s = random_complex(n, rng, 0.5);
  return [a, s](const CMat& z) -> CMat { return commutator(a, z) - 0.1 * (s * z + z * s); };
}

CMat band_limited_su(int n, int max_l, std::mt19937_64& rng) {
  auto lap = DiscreteLaplacian::shared(n);
  Eigen::SelfAdjointEigenSolver<CMat> eig(lap->operator_matrix());
  std::normal_distribution<double> normal;
  const double upper = max_l * (max_l + 1) + 0.5;
  Eigen::VectorXcd mix = Eigen::VectorXcd::Zero(n * n);
  for (Eigen::Index k = 0; k < mix.size(); ++k) {
    const double mu = -eig.eigenvalues()(k);
    if (mu > 1.0 && mu < upper) mix += cplx(normal(rng), normal(rng)) * eig.eigenvectors().col(k);
  }
  const CMat x = Eigen::Map<const CMat>(mix.data(), n, n);
  CMat w = 0.5 * (x - x.adjoint());
  w.diagonal().array() -= w.trace() / static_cast<double>(n);
  return w * (std::sqrt(2.0) / w.norm());
}

ProjectableSystem zeitlin_ns(int n, double nu) {
  if (n < 2) throw InvalidArgument("zeitlin_ns needs n >= 2");
  if (!(nu >= 0)) throw InvalidArgument("viscosity must be nonnegative");
  auto lap = DiscreteLaplacian::shared(n);
  MatrixMap g = [lap, nu](const CMat& w) -> CMat {
    CMat out = commutator(lap->pinv(w), w);
    if (nu != 0.0) out += nu * lap->apply(w);
    return out;
  };
  ProjectableSystem sys = general_matrix_flow(n, g);
  sys.name = "zeitlin_ns";
  sys.diagnostic_names = {"energy", "enstrophy", "trace"};
  sys.diagnostics = [n, lap](const Vec& z) {
    const CMat w = decode(z, n);
    return std::vector<double>{-0.5 * frobenius_inner(lap->pinv(w), w), 0.5 * w.squaredNorm(),
                               std::abs(w.trace())};
  };
  const int max_l = std::min(3, n - 1);
  sys.sample_y = [n, max_l](std::mt19937_64& rng) {
    return encode_blocks({CMat::Identity(n, n), band_limited_su(n, max_l, rng)});
  };
  require_consistent(sys);
  return sys;
}

BetaReport beta_condition_check(const ProjectableSystem& sys, int samples, std::uint64_t seed) {
  if (!sys.operators) throw InvalidArgument(sys.name + " exposes no operator family");
  const OperatorFamily& ops = *sys.operators;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  BetaReport out;
  if (sys.matrix_pair_n) out.momentum = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vec y = sys.sample_y(rng);
    const double scale = 0.3 * max_norm(y);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * normal(rng);
    const Vec t = ops.sample(rng);
    const Vec z = sys.F.value(y);
    const Vec ty = ops.apply(t, y);

    const Vec bz = ops.beta(t, z);
    out.beta = std::max(out.beta, max_norm(sys.F.derivative(y, ty) - bz) / (1.0 + max_norm(bz)));

    const Vec jordan = ops.beta(t, bz) - ops.beta(ops.square(t), z);
    const Vec second = sys.F.second(ty, ty);
    out.jordan = std::max(out.jordan, max_norm(second - jordan) / (1.0 + max_norm(jordan)));
    out.closed_form = std::max(out.closed_form,
                               max_norm(ops.jordan(t, z) - jordan) / (1.0 + max_norm(jordan)));

    if (sys.matrix_pair_n) {
      // Cotangent lift T_M (q, p) = (q M, -p M^dagger), omega = Re tr(q1^dagger p2 - q2^dagger p1).
      const int n = *sys.matrix_pair_n;
      const CMat q = block(y, n, 0);
      const CMat p = block(y, n, 1);
      const CMat m = random_complex(n, rng, 0.5);
      const CMat tq = q * m;
      const CMat tp = -p * m.adjoint();
      const double omega = frobenius_inner(tq, p) - frobenius_inner(q, tp);
      const double pairing = frobenius_inner(decode(z, n), m);
      *out.momentum = std::max(*out.momentum, std::abs(pairing - 0.5 * omega) / (1.0 + std::abs(pairing)));
    }
  }
  return out;
}

}  // namespace qproj
