#pragma once

#include <cmath>
#include <stdexcept>

#include "nilmult/types.hpp"

namespace nilmult {

/// Point of N_{3,2} in exponential coordinates: x is the first layer,
/// y the centre.
template <typename Scalar> struct GroupPoint {
  Vec3<Scalar> x = Vec3<Scalar>::Zero();
  Vec3<Scalar> y = Vec3<Scalar>::Zero();

  static GroupPoint identity() { return {}; }

  bool operator==(const GroupPoint &o) const { return x == o.x && y == o.y; }
};

using Point = GroupPoint<double>;

/// (x, y) . (x', y') = (x + x', y + y' + x ^ x' / 2)
template <typename Scalar>
GroupPoint<Scalar> multiply(const GroupPoint<Scalar> &p,
                            const GroupPoint<Scalar> &q) {
  return {p.x + q.x, p.y + q.y + p.x.cross(q.x) / Scalar(2)};
}

template <typename Scalar>
GroupPoint<Scalar> inverse(const GroupPoint<Scalar> &p) {
  return {-p.x, -p.y};
}

template <typename Scalar>
GroupPoint<Scalar> dilate(Scalar t, const GroupPoint<Scalar> &p) {
  if (!(t > Scalar(0)))
    throw std::invalid_argument("dilate: scale must be positive");
  return {t * p.x, (t * t) * p.y};
}

/// |x| + |y|^{1/2}
template <typename Scalar>
Scalar homogeneous_norm(const GroupPoint<Scalar> &p) {
  using std::sqrt;
  return p.x.norm() + sqrt(p.y.norm());
}

inline constexpr double kRotationTolerance = 1e-12;

template <typename Scalar> bool is_rotation(const Mat3<Scalar> &r) {
  using std::abs;
  const Mat3<Scalar> gram = r.transpose() * r - Mat3<Scalar>::Identity();
  return gram.cwiseAbs().maxCoeff() <= Scalar(kRotationTolerance) &&
         abs(r.determinant() - Scalar(1)) <= Scalar(kRotationTolerance);
}

/// Rotations act by automorphisms: (Rx) ^ (Rx') = R (x ^ x') when det R = 1.
template <typename Scalar>
GroupPoint<Scalar> rotate(const Mat3<Scalar> &r, const GroupPoint<Scalar> &p) {
  if (!is_rotation(r))
    throw std::invalid_argument("rotate: matrix is not a proper rotation");
  return {r * p.x, r * p.y};
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues).
template <typename Scalar>
Mat3<Scalar> axis_rotation(const Vec3<Scalar> &axis, Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix();
}

} // namespace nilmult
