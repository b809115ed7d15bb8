#pragma once

#include <cmath>
#include <numbers>

namespace swarmsim {

/// Planar vector in centimetres.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  [[nodiscard]] constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  [[nodiscard]] constexpr double norm2() const { return x * x + y * y; }
  [[nodiscard]] double norm() const { return std::hypot(x, y); }
  [[nodiscard]] double angle() const { return std::atan2(y, x); }

  [[nodiscard]] static Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
};

[[nodiscard]] inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Maps any angle onto [-pi, pi).
[[nodiscard]] inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a >= -std::numbers::pi && a < std::numbers::pi) return a;
  double r = std::fmod(a + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  r -= std::numbers::pi;
  // fmod residue can land exactly on +pi
  if (r >= std::numbers::pi) r -= two_pi;
  return r;
}

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, [-pi, pi)

  friend constexpr bool operator==(const Pose &, const Pose &) = default;
};

/// Rotates a world-frame vector into the body frame of `pose`.
[[nodiscard]] inline Vec2 to_body_frame(const Pose &pose, Vec2 world) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  return {c * world.x + s * world.y, -s * world.x + c * world.y};
}

}  // namespace swarmsim
