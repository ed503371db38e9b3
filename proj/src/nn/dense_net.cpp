#include "scenav/nn/dense_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scenav::nn {

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& w : weight) s += w.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  return s;
}

void Gradients::scale(double s) {
  for (auto& w : weight) w *= s;
  for (auto& b : bias) b *= s;
}

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weight.rows() != l.bias.size() || l.weight.rows() == 0 || l.weight.cols() == 0) {
      throw std::invalid_argument("layer " + std::to_string(i) + ": weight/bias shape mismatch");
    }
    if (i > 0 && l.weight.cols() != layers_[i - 1].weight.rows()) {
      throw std::invalid_argument("layer " + std::to_string(i) + " expects " +
                                  std::to_string(l.weight.cols()) + " inputs, previous layer has " +
                                  std::to_string(layers_[i - 1].weight.rows()));
    }
  }
}

DenseNet DenseNet::make(std::span<const int> sizes, std::mt19937_64& rng, double output_gain) {
  if (sizes.size() < 2) throw std::invalid_argument("need at least input and output sizes");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    const bool last = i + 2 == sizes.size();
    const double limit = last ? output_gain * std::sqrt(1.0 / in) : std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> u(-limit, limit);
    DenseLayer l;
    l.weight.resize(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) l.weight(r, c) = u(rng);
    }
    l.bias = Eigen::VectorXd::Zero(out);
    l.activation = last ? Activation::Identity : Activation::ReLU;
    layers.push_back(std::move(l));
  }
  return DenseNet(std::move(layers));
}

int DenseNet::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int DenseNet::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

std::vector<int> DenseNet::topology() const {
  std::vector<int> t{input_dim()};
  for (const auto& l : layers_) t.push_back(static_cast<int>(l.weight.rows()));
  return t;
}

std::size_t DenseNet::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    throw std::invalid_argument("forward: expected " + std::to_string(input_dim()) + " inputs, got " +
                                std::to_string(x.size()));
  }
  Eigen::VectorXd a = x;
  for (const auto& l : layers_) {
    Eigen::VectorXd z = l.weight * a + l.bias;
    if (l.activation == Activation::ReLU) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

std::vector<double> DenseNet::forward(std::span<const double> x) const {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd y = forward(v);
  return {y.data(), y.data() + y.size()};
}

ForwardPass DenseNet::forward_cached(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim()) {
    throw std::invalid_argument("forward: expected " + std::to_string(input_dim()) + " input rows, got " +
                                std::to_string(x.rows()));
  }
  ForwardPass pass;
  Eigen::MatrixXd a = x;
  for (const auto& l : layers_) {
    pass.inputs.push_back(a);
    Eigen::MatrixXd z = l.weight * a;
    z.colwise() += l.bias;
    pass.pre.push_back(z);
    a = l.activation == Activation::ReLU ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  pass.output = std::move(a);
  return pass;
}

Gradients DenseNet::backward(const ForwardPass& pass, const Eigen::MatrixXd& upstream) const {
  if (!pass.valid()) throw std::logic_error("backward called without a cached forward pass");
  if (pass.inputs.size() != layers_.size()) {
    throw std::invalid_argument("cached forward pass belongs to a different network");
  }
  if (upstream.rows() != output_dim() || upstream.cols() != pass.output.cols()) {
    throw std::invalid_argument("backward: upstream gradient shape mismatch");
  }
  Gradients g;
  g.weight.resize(layers_.size());
  g.bias.resize(layers_.size());
  Eigen::MatrixXd delta = upstream;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const auto& l = layers_[k];
    if (l.activation == Activation::ReLU) {
      delta = delta.cwiseProduct((pass.pre[k].array() > 0.0).cast<double>().matrix());
    }
    g.weight[k] = delta * pass.inputs[k].transpose();
    g.bias[k] = delta.rowwise().sum();
    delta = l.weight.transpose() * delta;
  }
  g.input = std::move(delta);
  return g;
}

bool operator==(const DenseNet& a, const DenseNet& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    const auto& x = a.layers_[i];
    const auto& y = b.layers_[i];
    if (x.activation != y.activation || x.weight.rows() != y.weight.rows() ||
        x.weight.cols() != y.weight.cols() || x.weight != y.weight || x.bias != y.bias) {
      return false;
    }
  }
  return true;
}

double clip_grad_norm(Gradients& g, double max_norm) {
  const double n = std::sqrt(g.squared_norm());
  if (max_norm > 0.0 && n > max_norm) g.scale(max_norm / n);
  return n;
}

}  // namespace scenav::nn
