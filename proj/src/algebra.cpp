#include "qproj/algebra.hpp"

namespace qproj {

Eigen::Vector3d hopf_map(const Quaternion& y) {
  return (0.25 * (y * kQuatK * y.conj())).imag();
}

}  // namespace qproj
