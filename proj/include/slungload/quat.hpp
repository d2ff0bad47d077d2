#pragma once

#include <Eigen/Dense>

namespace slungload {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using RotationMatrix = Eigen::Matrix3d;

inline const Vec3 kE3{0.0, 0.0, 1.0};

/// Unit attitude quaternion [q0, q] (scalar first). Every constructor
/// normalizes, so a Quaternion value is always unit norm.
class Quaternion {
 public:
  Quaternion() = default;
  Quaternion(double q0, double q1, double q2, double q3);
  Quaternion(double q0, const Vec3& vec);
  /// Coefficients ordered [q0, q1, q2, q3]. Throws std::invalid_argument if
  /// the vector is zero or not finite.
  static Quaternion FromCoeffs(const Vec4& coeffs);
  static Quaternion Identity() { return {}; }

  double w() const { return w_; }
  const Vec3& vec() const { return vec_; }
  Vec4 coeffs() const { return {w_, vec_.x(), vec_.y(), vec_.z()}; }
  double operator[](int i) const { return i == 0 ? w_ : vec_(i - 1); }

  Quaternion conjugate() const;

  /// Exact coefficient comparison (q and -q compare unequal).
  bool operator==(const Quaternion& other) const {
    return w_ == other.w_ && vec_ == other.vec_;
  }

 private:
  void Normalize();

  double w_ = 1.0;
  Vec3 vec_ = Vec3::Zero();
};

/// Hamilton product p ⊗ q in the matrix form
///   [p0, -pᵀ; p, p0 I + [p×]] [q0; q].
Quaternion quat_mul(const Quaternion& p, const Quaternion& q);
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return quat_mul(p, q);
}

/// Raw (unnormalized) Hamilton product on coefficient vectors. Used by the
/// kinematics, where q̇ = ½ q ⊗ [0, Ω] is not a unit quaternion.
Vec4 quat_mul_raw(const Vec4& p, const Vec4& q);

/// Body-to-world rotation matrix of a unit quaternion.
RotationMatrix quat_to_rot(const Quaternion& q);

/// Attitude error q_d* ⊗ q, canonicalized to a non-negative scalar part so
/// the controller rotates along the short arc. At q0 == 0 the vector part is
/// left as computed.
Quaternion quat_error(const Quaternion& desired, const Quaternion& actual);

enum class Axis { kX, kY, kZ };

/// Single-axis rotation R_(axis, angle).
RotationMatrix basic_rotation(Axis axis, double angle);

}  // namespace slungload
