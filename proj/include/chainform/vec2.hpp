#pragma once

#include <cmath>

namespace chainform {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
constexpr Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

// Unit vector, or the zero vector when |a| <= tiny.
inline Vec2 unit(const Vec2& a, double tiny = 0.0) {
  double l = norm(a);
  if (l <= tiny || l == 0.0) return {0.0, 0.0};
  return a / l;
}

// Distance from p to the closed segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double l2 = norm2(d);
  if (l2 == 0.0) return norm(p - a);
  double s = dot(p - a, d) / l2;
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  return norm(p - (a + d * s));
}

}  // namespace chainform
