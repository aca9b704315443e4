#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace qproj {

// w + x i + y j + z k with the Hamilton product.
struct Quaternion {
  double w = 0, x = 0, y = 0, z = 0;

  static Quaternion real(double r) { return {r, 0, 0, 0}; }
  static Quaternion pure(const Eigen::Vector3d& v) { return {0, v(0), v(1), v(2)}; }
  static Quaternion from_vector(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

  Eigen::Vector4d to_vector() const { return {w, x, y, z}; }
  Eigen::Vector3d imag() const { return {x, y, z}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(double s, const Quaternion& a) {
    return {s * a.w, s * a.x, s * a.y, s * a.z};
  }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  bool operator==(const Quaternion&) const = default;
};

inline const Quaternion kQuatI{0, 1, 0, 0};
inline const Quaternion kQuatJ{0, 0, 1, 0};
inline const Quaternion kQuatK{0, 0, 0, 1};

// Octonion as a Cayley-Dickson pair of quaternions:
// (q, p)(r, s) = (q r - s* p, s q + p r*),  (q, p)* = (q*, -p).
struct Octonion {
  Quaternion q, p;

  static Octonion real(double r) { return {Quaternion::real(r), {}}; }
  static Octonion from_vector(const Eigen::Matrix<double, 8, 1>& v) {
    return {{v(0), v(1), v(2), v(3)}, {v(4), v(5), v(6), v(7)}};
  }
  Eigen::Matrix<double, 8, 1> to_vector() const {
    Eigen::Matrix<double, 8, 1> v;
    v << q.w, q.x, q.y, q.z, p.w, p.x, p.y, p.z;
    return v;
  }

  Octonion conj() const { return {q.conj(), -p}; }
  double re() const { return q.w; }
  double norm2() const { return q.norm2() + p.norm2(); }
  double norm() const { return std::sqrt(norm2()); }

  friend Octonion operator+(const Octonion& a, const Octonion& b) { return {a.q + b.q, a.p + b.p}; }
  friend Octonion operator-(const Octonion& a, const Octonion& b) { return {a.q - b.q, a.p - b.p}; }
  friend Octonion operator*(double s, const Octonion& a) { return {s * a.q, s * a.p}; }
  friend Octonion operator*(const Octonion& a, const Octonion& b) {
    return {a.q * b.q - b.p.conj() * a.p, b.p * a.q + a.p * b.q.conj()};
  }
  bool operator==(const Octonion&) const = default;
};

using OctonionProduct = std::function<Octonion(const Octonion&, const Octonion&)>;

inline Octonion cayley_dickson_product(const Octonion& a, const Octonion& b) { return a * b; }

// F(y) = 1/4 y k y*, returned as the imaginary part (the real part vanishes).
Eigen::Vector3d hopf_map(const Quaternion& y);

}  // namespace qproj
