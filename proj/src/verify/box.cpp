#include "scenav/verify/box.hpp"

#include <sstream>
#include <stdexcept>

namespace scenav::verify {

Box::Box(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw std::invalid_argument("box bounds differ in dimension");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw std::invalid_argument("box lower bound exceeds upper bound in dimension " + std::to_string(i));
    }
  }
}

Box Box::point(const Eigen::VectorXd& x) { return Box(x, x); }

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

bool Box::contains(const Box& other) const {
  return other.lower.size() == lower.size() && (other.lower.array() >= lower.array()).all() &&
         (other.upper.array() <= upper.array()).all();
}

int Box::widest_dim() const {
  Eigen::Index best = 0;
  (upper - lower).maxCoeff(&best);
  return static_cast<int>(best);
}

std::pair<Box, Box> Box::split(int d) const {
  const double mid = 0.5 * (lower[d] + upper[d]);
  Box a = *this;
  Box b = *this;
  a.upper[d] = mid;
  b.lower[d] = mid;
  return {a, b};
}

Box Box::clamped_to(const Box& domain) const {
  Box out = *this;
  out.lower = lower.cwiseMax(domain.lower).cwiseMin(domain.upper);
  out.upper = upper.cwiseMin(domain.upper).cwiseMax(out.lower);
  return out;
}

std::string Box::to_string() const {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    os << (i ? ", " : "") << '[' << lower[i] << ", " << upper[i] << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace scenav::verify
