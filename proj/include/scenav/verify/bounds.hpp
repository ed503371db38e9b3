#pragma once

#include <vector>

#include "scenav/nn/dense_net.hpp"
#include "scenav/verify/box.hpp"

namespace scenav::verify {

/// Sound output bounds by interval arithmetic through every layer
/// (center/radius form, padded outward for floating-point rounding unless the
/// box is a single point).
IntervalVector ibp_bounds(const nn::DenseNet& net, const Box& box);

/// Bounds on the input to each layer; entry k feeds layer k. The last entry is
/// the network output.
std::vector<IntervalVector> ibp_layer_bounds(const nn::DenseNet& net, const Box& box);

/// Bounds of c^T y + offset over the box, folding c into the final affine layer
/// when it has no activation (tighter than combining output intervals).
std::pair<double, double> linear_output_bounds(const nn::DenseNet& net, const std::vector<IntervalVector>& layers,
                                               const Eigen::VectorXd& coeffs);

}  // namespace scenav::verify
