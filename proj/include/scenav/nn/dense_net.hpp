#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace scenav::nn {

enum class Activation { ReLU, Identity };

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  Activation activation = Activation::Identity;
};

/// Cached activations of a batched forward pass; columns are samples.
struct ForwardPass {
  std::vector<Eigen::MatrixXd> inputs;  // input to each layer
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
  Eigen::MatrixXd output;

  bool valid() const { return !inputs.empty() && inputs.size() == pre.size(); }
};

/// Parameter gradients summed over the batch, plus the gradient w.r.t. the input.
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
  Eigen::MatrixXd input;

  double squared_norm() const;
  void scale(double s);
};

class DenseNet {
 public:
  DenseNet() = default;
  /// Throws std::invalid_argument when adjacent layer shapes disagree.
  explicit DenseNet(std::vector<DenseLayer> layers);

  /// Fully connected ReLU trunk with an identity output layer. Hidden layers use
  /// He-uniform fan-in scaling; the output layer is scaled by output_gain.
  static DenseNet make(std::span<const int> sizes, std::mt19937_64& rng, double output_gain = 1.0);

  int input_dim() const;
  int output_dim() const;
  std::vector<int> topology() const;  // input size followed by each layer's output size
  std::size_t num_parameters() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  std::vector<double> forward(std::span<const double> x) const;
  ForwardPass forward_cached(const Eigen::MatrixXd& x) const;

  /// Reverse-mode pass for a cached forward. ReLU'(0) is taken as 0.
  /// Throws std::logic_error on an empty cache and std::invalid_argument on shape mismatch.
  Gradients backward(const ForwardPass& pass, const Eigen::MatrixXd& upstream) const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  friend bool operator==(const DenseNet& a, const DenseNet& b);

 private:
  std::vector<DenseLayer> layers_;
};

/// Clips the global L2 norm of the parameter gradients; returns the pre-clip norm.
double clip_grad_norm(Gradients& g, double max_norm);

}  // namespace scenav::nn
