#pragma once

#include <cmath>
#include <stdexcept>

namespace spincorr {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return (x * o.x + y * o.y) + z * o.z; }

  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }

  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Unit 3-vector. The invariant |norm - 1| <= 1e-12 is established at
// construction; downstream algebra relies on it instead of re-normalizing
// (re-normalizing would perturb stored trial records).
class Direction {
 public:
  static constexpr double kUnitTol = 1e-12;

  // Scales an arbitrary nonzero vector to unit length.
  static Direction normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("Direction: cannot normalize zero or non-finite vector");
    }
    return Direction(Vec3{v.x / n, v.y / n, v.z / n});
  }

  // Accepts a vector that is already unit length, without touching its bits.
  static Direction require_unit(const Vec3& v, double tol = kUnitTol) {
    if (std::abs(v.norm() - 1.0) > tol) {
      throw std::invalid_argument("Direction: vector is not unit length");
    }
    return Direction(v);
  }

  // In-plane direction at the given angle from +x, counterclockwise about +z.
  static Direction planar_deg(double degrees) {
    const double rad = degrees * (M_PI / 180.0);
    return require_unit(Vec3{std::cos(rad), std::sin(rad), 0.0}, 1e-9);
  }

  static Direction ex() { return Direction({1.0, 0.0, 0.0}); }
  static Direction ey() { return Direction({0.0, 1.0, 0.0}); }
  static Direction ez() { return Direction({0.0, 0.0, 1.0}); }

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

  double dot(const Direction& o) const { return v_.dot(o.v_); }
  Vec3 cross(const Direction& o) const { return v_.cross(o.v_); }
  Direction negated() const { return Direction(-v_); }

 private:
  explicit Direction(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

}  // namespace spincorr
