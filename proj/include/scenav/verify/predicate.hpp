#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

#include "scenav/nav/action.hpp"
#include "scenav/nn/dense_net.hpp"
#include "scenav/verify/box.hpp"

namespace scenav::verify {

struct ArgmaxIs {
  int index = 0;
};
struct ArgmaxIsNot {
  int index = 0;
};
/// coeffs . y >= bound (or > when strict).
struct LinearGE {
  std::vector<double> coeffs;
  double bound = 0.0;
  bool strict = false;
};

using OutputPredicate = std::variant<ArgmaxIs, ArgmaxIsNot, LinearGE>;

enum class Tri { True, False, Unknown };

OutputPredicate argmax_is(NavAction a);
OutputPredicate argmax_is_not(NavAction a);
/// y[index] < bound, expressed as -y[index] > -bound.
OutputPredicate output_below(int dim, int index, double bound);

OutputPredicate negate(const OutputPredicate& p);
std::string describe(const OutputPredicate& p);

/// Exact check on a concrete output. Argmax ties resolve to the lowest index,
/// matching the deterministic policy.
bool holds(const OutputPredicate& p, const Eigen::VectorXd& output);

/// Sound three-valued check over every input in the box.
Tri evaluate(const OutputPredicate& p, const nn::DenseNet& net, const Box& box);

/// Signed margin (positive means the predicate holds with room) and its
/// gradient with respect to the network output.
double margin(const OutputPredicate& p, const Eigen::VectorXd& output, Eigen::VectorXd* grad);

}  // namespace scenav::verify
