#pragma once

#include <cmath>
#include <random>

#include "slungload/quat.hpp"
#include "slungload/scenario.hpp"

namespace slungload::testing {

// Hand-rolled generators for the property tests. Fixed seeds keep failures
// reproducible.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Vec3 vec3(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }
  Vec3 unit3() {
    std::normal_distribution<double> n;
    Vec3 v(n(rng_), n(rng_), n(rng_));
    return v.normalized();
  }
  Quaternion quat() {
    std::normal_distribution<double> n;
    return Quaternion(n(rng_), n(rng_), n(rng_), n(rng_));
  }
  // Thrust vectors away from the downward singularity.
  Vec3 thrust_vector() {
    for (;;) {
      const Vec3 u = vec3(10.0);
      if (u.norm() > 1e-3 && u.z() / u.norm() > -0.99) return u;
    }
  }
  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

inline double quat_distance(const Quaternion& a, const Quaternion& b) {
  return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

}  // namespace slungload::testing
