#include "scenav/env/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scenav::geom {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

bool Rect::contains(Vec2 p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

double Rect::distance_to(Vec2 p) const {
  const double dx = std::max({min.x - p.x, 0.0, p.x - max.x});
  const double dy = std::max({min.y - p.y, 0.0, p.y - max.y});
  return std::hypot(dx, dy);
}

double Circle::distance_to(Vec2 p) const { return std::max(0.0, norm(p - center) - radius); }

std::optional<double> ray_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double denom = cross(dir, e);
  const Vec2 w = a - origin;
  if (std::abs(denom) < 1e-15) {
    // Parallel; collinear overlap is reported at the nearer endpoint.
    if (std::abs(cross(w, dir)) > 1e-12) return std::nullopt;
    const double ta = dot(a - origin, dir);
    const double tb = dot(b - origin, dir);
    if (ta < 0.0 && tb < 0.0) return std::nullopt;
    if (ta <= 0.0 || tb <= 0.0) return 0.0;
    return std::min(ta, tb);
  }
  const double t = cross(w, e) / denom;
  const double u = cross(w, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

std::optional<double> ray_circle(Vec2 origin, Vec2 dir, const Circle& c) {
  const Vec2 oc = origin - c.center;
  const double b = dot(oc, dir);
  const double cc = dot(oc, oc) - c.radius * c.radius;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return std::nullopt;
  const double t = -b - std::sqrt(disc);
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_rect(Vec2 origin, Vec2 dir, const Rect& r) {
  if (r.contains(origin)) return 0.0;
  const Vec2 corners[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  std::optional<double> best;
  for (int i = 0; i < 4; ++i) {
    if (auto t = ray_segment(origin, dir, corners[i], corners[(i + 1) % 4])) {
      if (!best || *t < *best) best = t;
    }
  }
  return best;
}

double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return norm(p - (a + t * e));
}

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  if (denom != 0.0) {
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return 0.0;
  }
  return std::min({segment_point_distance(a, b, c), segment_point_distance(a, b, d),
                   segment_point_distance(c, d, a), segment_point_distance(c, d, b)});
}

double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r) {
  if (r.contains(a) || r.contains(b)) return 0.0;
  const Vec2 corners[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  double best = segment_segment_distance(a, b, corners[0], corners[1]);
  for (int i = 1; i < 4; ++i) {
    best = std::min(best, segment_segment_distance(a, b, corners[i], corners[(i + 1) % 4]));
  }
  return best;
}

}  // namespace scenav::geom
