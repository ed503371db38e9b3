#include "scenav/verify/bounds.hpp"

#include <limits>
#include <stdexcept>

namespace scenav::verify {

namespace {

constexpr double kRoundingPad = 8.0 * std::numeric_limits<double>::epsilon();

IntervalVector affine(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const IntervalVector& in) {
  const Eigen::VectorXd mid = 0.5 * (in.lower + in.upper);
  const Eigen::VectorXd rad = 0.5 * (in.upper - in.lower);
  const Eigen::VectorXd z = w * mid + b;
  if ((rad.array() == 0.0).all()) return {z, z};
  const Eigen::MatrixXd aw = w.cwiseAbs();
  const Eigen::VectorXd zr = aw * rad;
  const Eigen::VectorXd pad =
      kRoundingPad * static_cast<double>(w.cols() + 1) * (aw * (mid.cwiseAbs() + rad) + b.cwiseAbs());
  return {z - zr - pad, z + zr + pad};
}

}  // namespace

std::vector<IntervalVector> ibp_layer_bounds(const nn::DenseNet& net, const Box& box) {
  if (box.dim() != net.input_dim()) throw std::invalid_argument("box dimension does not match network input");
  std::vector<IntervalVector> out;
  IntervalVector cur{box.lower, box.upper};
  for (const auto& l : net.layers()) {
    out.push_back(cur);
    cur = affine(l.weight, l.bias, cur);
    if (l.activation == nn::Activation::ReLU) {
      cur.lower = cur.lower.cwiseMax(0.0);
      cur.upper = cur.upper.cwiseMax(0.0);
    }
  }
  out.push_back(cur);
  return out;
}

IntervalVector ibp_bounds(const nn::DenseNet& net, const Box& box) { return ibp_layer_bounds(net, box).back(); }

std::pair<double, double> linear_output_bounds(const nn::DenseNet& net, const std::vector<IntervalVector>& layers,
                                               const Eigen::VectorXd& c) {
  const auto& last = net.layers().back();
  if (last.activation == nn::Activation::Identity && layers.size() >= 2) {
    const Eigen::RowVectorXd w = c.transpose() * last.weight;
    const double b = c.dot(last.bias);
    const Eigen::MatrixXd wm = w;
    const IntervalVector r = affine(wm, Eigen::VectorXd::Constant(1, b), layers[layers.size() - 2]);
    return {r.lower[0], r.upper[0]};
  }
  const auto& out = layers.back();
  double lo = 0.0, hi = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    lo += c[i] >= 0 ? c[i] * out.lower[i] : c[i] * out.upper[i];
    hi += c[i] >= 0 ? c[i] * out.upper[i] : c[i] * out.lower[i];
  }
  return {lo, hi};
}

}  // namespace scenav::verify
