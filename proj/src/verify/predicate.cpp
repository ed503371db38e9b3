#include "scenav/verify/predicate.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "scenav/nn/policy.hpp"
#include "scenav/verify/bounds.hpp"

namespace scenav::verify {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXd pair_coeffs(int dim, int a, int b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  c[a] = 1.0;
  c[b] = -1.0;
  return c;
}

// True when logit a beats every other logit everywhere, False when some other
// logit beats it everywhere.
Tri argmax_tri(int a, const nn::DenseNet& net, const std::vector<IntervalVector>& layers) {
  const int dim = net.output_dim();
  if (a < 0 || a >= dim) throw std::invalid_argument("argmax predicate index out of range");
  bool all_above = true;
  for (int b = 0; b < dim; ++b) {
    if (b == a) continue;
    const auto [lo, hi] = linear_output_bounds(net, layers, pair_coeffs(dim, a, b));
    if (hi < 0.0) return Tri::False;
    if (!(lo > 0.0)) all_above = false;
  }
  return all_above ? Tri::True : Tri::Unknown;
}

Tri flip(Tri t) {
  if (t == Tri::True) return Tri::False;
  if (t == Tri::False) return Tri::True;
  return Tri::Unknown;
}

}  // namespace

OutputPredicate argmax_is(NavAction a) { return ArgmaxIs{action_index(a)}; }
OutputPredicate argmax_is_not(NavAction a) { return ArgmaxIsNot{action_index(a)}; }

OutputPredicate output_below(int dim, int index, double bound) {
  LinearGE p;
  p.coeffs.assign(static_cast<std::size_t>(dim), 0.0);
  p.coeffs[static_cast<std::size_t>(index)] = -1.0;
  p.bound = -bound;
  p.strict = true;
  return p;
}

OutputPredicate negate(const OutputPredicate& p) {
  return std::visit(overloaded{
                        [](const ArgmaxIs& q) -> OutputPredicate { return ArgmaxIsNot{q.index}; },
                        [](const ArgmaxIsNot& q) -> OutputPredicate { return ArgmaxIs{q.index}; },
                        [](const LinearGE& q) -> OutputPredicate {
                          LinearGE n;
                          for (double c : q.coeffs) n.coeffs.push_back(-c);
                          n.bound = -q.bound;
                          n.strict = !q.strict;
                          return n;
                        },
                    },
                    p);
}

std::string describe(const OutputPredicate& p) {
  return std::visit(overloaded{
                        [](const ArgmaxIs& q) { return "argmax=" + std::to_string(q.index); },
                        [](const ArgmaxIsNot& q) { return "argmax!=" + std::to_string(q.index); },
                        [](const LinearGE& q) {
                          std::ostringstream os;
                          for (std::size_t i = 0; i < q.coeffs.size(); ++i) {
                            os << (i ? " + " : "") << q.coeffs[i] << "*y" << i;
                          }
                          os << (q.strict ? " > " : " >= ") << q.bound;
                          return os.str();
                        },
                    },
                    p);
}

bool holds(const OutputPredicate& p, const Eigen::VectorXd& y) {
  return std::visit(overloaded{
                        [&](const ArgmaxIs& q) { return nn::argmax(y) == q.index; },
                        [&](const ArgmaxIsNot& q) { return nn::argmax(y) != q.index; },
                        [&](const LinearGE& q) {
                          if (q.coeffs.size() != static_cast<std::size_t>(y.size())) {
                            throw std::invalid_argument("linear predicate arity does not match output");
                          }
                          double v = 0.0;
                          for (std::size_t i = 0; i < q.coeffs.size(); ++i) v += q.coeffs[i] * y[static_cast<Eigen::Index>(i)];
                          return q.strict ? v > q.bound : v >= q.bound;
                        },
                    },
                    p);
}

Tri evaluate(const OutputPredicate& p, const nn::DenseNet& net, const Box& box) {
  const auto layers = ibp_layer_bounds(net, box);
  return std::visit(overloaded{
                        [&](const ArgmaxIs& q) { return argmax_tri(q.index, net, layers); },
                        [&](const ArgmaxIsNot& q) { return flip(argmax_tri(q.index, net, layers)); },
                        [&](const LinearGE& q) {
                          if (q.coeffs.size() != static_cast<std::size_t>(net.output_dim())) {
                            throw std::invalid_argument("linear predicate arity does not match output");
                          }
                          const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(q.coeffs.data(), net.output_dim());
                          const auto [lo, hi] = linear_output_bounds(net, layers, c);
                          const bool yes = q.strict ? lo > q.bound : lo >= q.bound;
                          const bool no = q.strict ? hi <= q.bound : hi < q.bound;
                          return yes ? Tri::True : (no ? Tri::False : Tri::Unknown);
                        },
                    },
                    p);
}

double margin(const OutputPredicate& p, const Eigen::VectorXd& y, Eigen::VectorXd* grad) {
  const auto best_other = [&](int a) {
    int best = -1;
    for (int b = 0; b < y.size(); ++b) {
      if (b != a && (best < 0 || y[b] > y[best])) best = b;
    }
    return best;
  };
  if (grad) grad->setZero(y.size());
  return std::visit(overloaded{
                        [&](const ArgmaxIs& q) {
                          const int b = best_other(q.index);
                          if (b < 0) return std::numeric_limits<double>::infinity();
                          if (grad) {
                            (*grad)[q.index] = 1.0;
                            (*grad)[b] = -1.0;
                          }
                          return y[q.index] - y[b];
                        },
                        [&](const ArgmaxIsNot& q) {
                          const int b = best_other(q.index);
                          if (b < 0) return -std::numeric_limits<double>::infinity();
                          if (grad) {
                            (*grad)[q.index] = -1.0;
                            (*grad)[b] = 1.0;
                          }
                          return y[b] - y[q.index];
                        },
                        [&](const LinearGE& q) {
                          double v = -q.bound;
                          for (std::size_t i = 0; i < q.coeffs.size(); ++i) {
                            v += q.coeffs[i] * y[static_cast<Eigen::Index>(i)];
                            if (grad) (*grad)[static_cast<Eigen::Index>(i)] = q.coeffs[i];
                          }
                          return v;
                        },
                    },
                    p);
}

}  // namespace scenav::verify
