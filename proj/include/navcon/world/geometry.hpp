#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace navcon::world {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend constexpr bool operator==(Vec3, Vec3) = default;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
  [[nodiscard]] double horizontal_norm() const { return std::hypot(x, y); }
  [[nodiscard]] Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline std::ostream& operator<<(std::ostream& os, Vec3 v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

/// Axis-aligned box in meters.
struct Box3 {
  Vec3 min;
  Vec3 max;

  [[nodiscard]] Vec3 center() const { return (min + max) * 0.5; }
  [[nodiscard]] Vec3 size() const { return max - min; }
  [[nodiscard]] bool valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }

  [[nodiscard]] bool contains(Vec3 p, double eps = 0.0) const {
    return p.x >= min.x - eps && p.x <= max.x + eps && p.y >= min.y - eps && p.y <= max.y + eps &&
           p.z >= min.z - eps && p.z <= max.z + eps;
  }

  /// Positive-volume overlap; touching faces do not count.
  [[nodiscard]] bool overlaps(const Box3& o, double eps = 1e-9) const {
    return min.x < o.max.x - eps && max.x > o.min.x + eps && min.y < o.max.y - eps &&
           max.y > o.min.y + eps && min.z < o.max.z - eps && max.z > o.min.z + eps;
  }

  /// Closest point of the box to p.
  [[nodiscard]] Vec3 clamp(Vec3 p) const {
    return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
            std::clamp(p.z, min.z, max.z)};
  }

  friend bool operator==(const Box3&, const Box3&) = default;
};

/// Image-space rectangle. x grows rightward, y grows upward from the bottom row.
struct Box2 {
  double left = 0.0;
  double lower = 0.0;
  double right = 0.0;
  double upper = 0.0;

  [[nodiscard]] double width() const { return right - left; }
  [[nodiscard]] double height() const { return upper - lower; }
  [[nodiscard]] double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  [[nodiscard]] double horizontal_center() const { return (left + right) / 2; }
  [[nodiscard]] double vertical_center() const { return (lower + upper) / 2; }
  [[nodiscard]] bool empty() const { return !(right > left && upper > lower); }

  [[nodiscard]] Box2 intersect(const Box2& o) const {
    Box2 r{std::max(left, o.left), std::max(lower, o.lower), std::min(right, o.right),
           std::min(upper, o.upper)};
    if (r.right < r.left) r.right = r.left;
    if (r.upper < r.lower) r.upper = r.lower;
    return r;
  }

  [[nodiscard]] double intersection_area(const Box2& o) const { return intersect(o).area(); }

  [[nodiscard]] bool contains(double x, double y) const {
    return x >= left && x <= right && y >= lower && y <= upper;
  }
  [[nodiscard]] bool contains(const Box2& o) const {
    return o.left >= left && o.right <= right && o.lower >= lower && o.upper <= upper;
  }

  [[nodiscard]] Box2 translated(double dx, double dy) const {
    return {left + dx, lower + dy, right + dx, upper + dy};
  }

  friend bool operator==(const Box2&, const Box2&) = default;
};

inline double iou(const Box2& a, const Box2& b) {
  const double inter = a.intersection_area(b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

inline std::ostream& operator<<(std::ostream& os, const Box2& b) {
  return os << '[' << b.left << ", " << b.lower << ", " << b.right << ", " << b.upper << ']';
}

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace navcon::world
