#pragma once

#include <Eigen/Dense>

#include <string>

namespace scenav::verify {

/// Axis-aligned region of the network's input space.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Box() = default;
  /// Throws std::invalid_argument if the bounds disagree in size or cross.
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Box point(const Eigen::VectorXd& x);

  int dim() const { return static_cast<int>(lower.size()); }
  Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
  Eigen::VectorXd width() const { return upper - lower; }
  bool contains(const Eigen::VectorXd& x) const;
  bool contains(const Box& other) const;
  int widest_dim() const;
  /// Halves along `dim` at the midpoint.
  std::pair<Box, Box> split(int dim) const;
  Box clamped_to(const Box& domain) const;
  std::string to_string() const;
};

/// Elementwise interval vector.
struct IntervalVector {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

}  // namespace scenav::verify
