#include "scenav/env/observation.hpp"

#include <stdexcept>
#include <string>

namespace scenav {

std::vector<double> Observation::flatten() const {
  std::vector<double> flat(lidar.begin(), lidar.end());
  flat.push_back(bearing);
  flat.push_back(distance);
  return flat;
}

Observation Observation::unflatten(const std::vector<double>& flat) {
  if (flat.size() != kObsDim) {
    throw std::invalid_argument("observation needs " + std::to_string(kObsDim) + " values, got " +
                                std::to_string(flat.size()));
  }
  Observation obs;
  for (std::size_t i = 0; i < kNumRays; ++i) obs.lidar[i] = flat[i];
  obs.bearing = flat[kBearingIndex];
  obs.distance = flat[kDistanceIndex];
  return obs;
}

std::vector<double> ObservationScale::normalize(const Observation& obs) const {
  std::vector<double> x(kObsDim);
  for (std::size_t i = 0; i < kNumRays; ++i) x[i] = obs.lidar[i] / max_range;
  x[kBearingIndex] = obs.bearing / bearing;
  x[kDistanceIndex] = obs.distance / distance;
  return x;
}

}  // namespace scenav
