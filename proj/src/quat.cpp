#include "slungload/quat.hpp"

#include <cmath>
#include <stdexcept>

namespace slungload {

Quaternion::Quaternion(double q0, double q1, double q2, double q3)
    : w_(q0), vec_(q1, q2, q3) {
  Normalize();
}

Quaternion::Quaternion(double q0, const Vec3& vec) : w_(q0), vec_(vec) {
  Normalize();
}

Quaternion Quaternion::FromCoeffs(const Vec4& coeffs) {
  return Quaternion(coeffs(0), coeffs(1), coeffs(2), coeffs(3));
}

Quaternion Quaternion::conjugate() const {
  Quaternion c;
  c.w_ = w_;
  c.vec_ = -vec_;
  return c;
}

void Quaternion::Normalize() {
  const double norm = std::sqrt(w_ * w_ + vec_.squaredNorm());
  if (!std::isfinite(norm) || norm == 0.0) {
    throw std::invalid_argument("quaternion must be finite and non-zero");
  }
  w_ /= norm;
  vec_ /= norm;
}

Vec4 quat_mul_raw(const Vec4& p, const Vec4& q) {
  const Vec3 pv = p.tail<3>();
  const Vec3 qv = q.tail<3>();
  Vec4 out;
  out(0) = p(0) * q(0) - pv.dot(qv);
  out.tail<3>() = q(0) * pv + p(0) * qv + pv.cross(qv);
  return out;
}

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return Quaternion::FromCoeffs(quat_mul_raw(p.coeffs(), q.coeffs()));
}

RotationMatrix quat_to_rot(const Quaternion& q) {
  const double q0 = q.w();
  const double q1 = q.vec().x();
  const double q2 = q.vec().y();
  const double q3 = q.vec().z();
  RotationMatrix r;
  r << 1 - 2 * q2 * q2 - 2 * q3 * q3, 2 * q1 * q2 - 2 * q0 * q3,
      2 * q1 * q3 + 2 * q0 * q2,  //
      2 * q1 * q2 + 2 * q0 * q3, 1 - 2 * q1 * q1 - 2 * q3 * q3,
      2 * q2 * q3 - 2 * q0 * q1,  //
      2 * q1 * q3 - 2 * q0 * q2, 2 * q2 * q3 + 2 * q0 * q1,
      1 - 2 * q1 * q1 - 2 * q2 * q2;
  return r;
}

Quaternion quat_error(const Quaternion& desired, const Quaternion& actual) {
  const Quaternion e = quat_mul(desired.conjugate(), actual);
  if (e.w() < 0.0) {
    return Quaternion(-e.w(), -e.vec());
  }
  return e;
}

RotationMatrix basic_rotation(Axis axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  RotationMatrix r;
  switch (axis) {
    case Axis::kX:
      r << 1, 0, 0, 0, c, -s, 0, s, c;
      break;
    case Axis::kY:
      r << c, 0, s, 0, 1, 0, -s, 0, c;
      break;
    case Axis::kZ:
      r << c, -s, 0, s, c, 0, 0, 0, 1;
      break;
  }
  return r;
}

}  // namespace slungload
