#include "scenav/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace scenav::nn {

AdamState AdamState::for_net(const DenseNet& net, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for (const auto& l : net.layers()) {
    s.m_weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    s.v_weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    s.m_bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    s.v_bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
  return s;
}

void adam_update(AdamState& s, DenseNet& net, const Gradients& g) {
  auto& layers = net.mutable_layers();
  const std::size_t n = layers.size();
  if (s.m_weight.size() != n || g.weight.size() != n || g.bias.size() != n) {
    throw std::invalid_argument("adam_update: layer count mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& w = layers[k].weight;
    if (g.weight[k].rows() != w.rows() || g.weight[k].cols() != w.cols() ||
        s.m_weight[k].rows() != w.rows() || s.m_weight[k].cols() != w.cols() ||
        g.bias[k].size() != layers[k].bias.size() || s.m_bias[k].size() != layers[k].bias.size()) {
      throw std::invalid_argument("adam_update: parameter shape mismatch in layer " + std::to_string(k));
    }
  }

  ++s.step;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  auto apply = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = s.beta1 * m + (1.0 - s.beta1) * grad;
    v = s.beta2 * v + (1.0 - s.beta2) * grad.cwiseProduct(grad);
    param.array() -= s.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + s.epsilon);
  };
  for (std::size_t k = 0; k < n; ++k) {
    apply(layers[k].weight, s.m_weight[k], s.v_weight[k], g.weight[k]);
    apply(layers[k].bias, s.m_bias[k], s.v_bias[k], g.bias[k]);
  }
}

}  // namespace scenav::nn
