#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace scenav {

inline constexpr std::size_t kNumRays = 7;
inline constexpr std::size_t kFrontRay = 3;
inline constexpr std::size_t kObsDim = kNumRays + 2;
inline constexpr std::size_t kBearingIndex = kNumRays;       // state[-2]
inline constexpr std::size_t kDistanceIndex = kNumRays + 1;  // state[-1]

/// Agent input. Flattened layout is [lidar0..lidar6, bearing, distance] with
/// lidar[3] straight ahead, lidar[0] at -90 deg (right) and lidar[6] at +90 deg (left).
///
/// bearing is measured clockwise from the heading: positive when the target
/// lies to the robot's right, so a Left turn increases it by 30 deg.
struct Observation {
  std::array<double, kNumRays> lidar{};
  double bearing = 0.0;
  double distance = 0.0;

  std::vector<double> flatten() const;
  static Observation unflatten(const std::vector<double>& flat);
};

/// Scale factors mapping raw observations onto the network's input range.
struct ObservationScale {
  double max_range = 3.5;
  double bearing = 3.141592653589793;
  double distance = 1.0;  // arena diagonal

  std::vector<double> normalize(const Observation& obs) const;
};

}  // namespace scenav
