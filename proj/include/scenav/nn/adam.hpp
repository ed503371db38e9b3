#pragma once

#include "scenav/nn/dense_net.hpp"

namespace scenav::nn {

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weight, v_weight;
  std::vector<Eigen::VectorXd> m_bias, v_bias;
  long step = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// Zero moments shaped like the network's parameters.
  static AdamState for_net(const DenseNet& net, double learning_rate);
};

/// One bias-corrected Adam step (descent on grads). Throws std::invalid_argument
/// when state, network and gradients disagree in shape.
void adam_update(AdamState& state, DenseNet& net, const Gradients& grads);

}  // namespace scenav::nn
