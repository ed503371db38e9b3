#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "scenav/env/geometry.hpp"

namespace scenav {

using Obstacle = std::variant<geom::Rect, geom::Circle>;

/// Static arena: walls along the bounding rectangle plus convex obstacles.
struct World {
  std::string name;
  geom::Rect bounds{{0.0, 0.0}, {6.0, 6.0}};
  std::vector<Obstacle> obstacles;

  double diagonal() const;
  /// Distance from p to the nearest obstacle surface or wall (0 when inside one).
  double clearance(geom::Vec2 p) const;

  /// Obstacles inside bounds and the free space (cells with clearance >= radius)
  /// connected on a grid of the given resolution. Throws std::invalid_argument.
  void validate(double robot_radius, double resolution = 0.05) const;
};

namespace worlds {
World empty();
/// 6 x 6 m arena with four 1 x 1 m blocks.
World four_block();
/// 8 x 2.5 m corridor with two staggered baffles.
World corridor();
/// Builtin by name ("empty", "four-block", "corridor").
World builtin(const std::string& name);

/// Line-oriented text format:
///   # comment
///   bounds xmin ymin xmax ymax
///   rect xmin ymin xmax ymax
///   circle cx cy radius
World parse(const std::string& text, const std::string& name = "custom");
World load(const std::filesystem::path& path);
std::string serialize(const World& world);
}  // namespace worlds

}  // namespace scenav
