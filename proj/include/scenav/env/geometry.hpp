#pragma once

#include <optional>

namespace scenav::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
Vec2 unit(double angle);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const;
  double distance_to(Vec2 p) const;  // 0 inside
};

struct Circle {
  Vec2 center;
  double radius = 0.0;

  double distance_to(Vec2 p) const;  // 0 inside
};

/// Parameter t >= 0 at which origin + t*dir first hits segment [a, b], if any.
/// dir must be a unit vector.
std::optional<double> ray_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b);
std::optional<double> ray_circle(Vec2 origin, Vec2 dir, const Circle& c);
std::optional<double> ray_rect(Vec2 origin, Vec2 dir, const Rect& r);

double segment_point_distance(Vec2 a, Vec2 b, Vec2 p);
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r);

}  // namespace scenav::geom
