#include "scenav/verify/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace scenav::verify {

void Budget::validate() const {
  if (max_splits <= 0) throw std::invalid_argument("verification budget: max_splits must be positive");
  if (max_trials <= 0) throw std::invalid_argument("verification budget: max_trials must be positive");
  if (max_depth < 0) throw std::invalid_argument("verification budget: max_depth must be non-negative");
}

int Budget::depth_cap() const {
  if (max_depth > 0) return max_depth;
  const int bits = static_cast<int>(std::ceil(std::log2(static_cast<double>(max_splits) + 1.0)));
  return std::clamp(2 * bits, 8, 64);
}

std::string_view verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Verified: return "Verified";
    case VerdictKind::Falsified: return "Falsified";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

constexpr int kAscentSteps = 25;

// Predicate the chain must satisfy at a step to count as a counterexample.
OutputPredicate required(const QueryCase& c, std::size_t step) {
  return step < c.prefix.size() ? argmax_is(c.prefix[step]) : c.negated;
}

Eigen::VectorXd sample(const Box& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(b.dim());
  for (int i = 0; i < b.dim(); ++i) x[i] = b.lower[i] + u(rng) * (b.upper[i] - b.lower[i]);
  return x;
}

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Box& b) { return x.cwiseMax(b.lower).cwiseMin(b.upper); }

// Projected sign-gradient ascent on the predicate margin.
Eigen::VectorXd ascend(const nn::DenseNet& net, const OutputPredicate& p, const Box& box, Eigen::VectorXd x) {
  Eigen::VectorXd step = 0.25 * box.width();
  for (int it = 0; it < kAscentSteps; ++it) {
    const auto pass = net.forward_cached(x);
    const Eigen::VectorXd y = pass.output.col(0);
    Eigen::VectorXd g;
    margin(p, y, &g);
    if (holds(p, y)) return x;
    const auto grads = net.backward(pass, g);
    const Eigen::VectorXd gi = grads.input.col(0);
    x = clamp(x + step.cwiseProduct(gi.unaryExpr([](double v) { return double((v > 0) - (v < 0)); })), box);
    step *= 0.75;
  }
  return x;
}

class Search {
 public:
  Search(const nn::DenseNet& net, const PropertyQuery& q, const Budget& b)
      : net_(net), q_(q), budget_(b), rng_(b.seed), cap_(b.depth_cap()) {}

  Verdict run() {
    const long upfront = budget_.max_trials / 2;
    for (long t = 0; t < upfront; ++t) {
      if (auto w = trial(q_.cases[static_cast<std::size_t>(t) % q_.cases.size()], nullptr)) return falsified(*w);
    }

    for (const auto& c : q_.cases) {
      if (auto w = branch_and_bound(c)) return falsified(*w);
      if (exhausted_) break;
    }
    if (stuck_.empty() && !exhausted_) {
      result_.kind = VerdictKind::Verified;
      return result_;
    }

    // Spend what is left of the trial budget inside the undecided regions.
    if (stuck_.empty()) stuck_.push_back({&q_.cases.front(), q_.cases.front().start});
    std::uniform_int_distribution<std::size_t> pick(0, stuck_.size() - 1);
    while (result_.stats.trials < budget_.max_trials) {
      const auto& s = stuck_[pick(rng_)];
      if (auto w = trial(*s.c, &s.origin)) return falsified(*w);
    }
    result_.kind = VerdictKind::Unknown;
    return result_;
  }

 private:
  struct Node {
    std::size_t step;
    Box box;
    Box origin;  // step-0 region this node descends from
    int depth;
  };
  struct Stuck {
    const QueryCase* c;
    Box origin;
  };

  Verdict falsified(Witness w) {
    if (!check_witness(net_, q_, w)) throw std::logic_error("falsification produced an invalid witness");
    result_.kind = VerdictKind::Falsified;
    result_.witness = std::move(w);
    return result_;
  }

  // Follows the chain from `first` (or a fresh sample), optionally improving
  // each point by gradient ascent.
  std::optional<Witness> chain(const QueryCase& c, const Box& origin, std::optional<Eigen::VectorXd> first,
                               bool ascent) {
    Witness w;
    w.case_label = c.label;
    Box box = origin;
    const std::size_t steps = c.prefix.size() + 1;
    for (std::size_t i = 0; i < steps; ++i) {
      const auto p = required(c, i);
      Eigen::VectorXd x = (i == 0 && first) ? *first : (ascent ? sample(box, rng_) : box.center());
      if (ascent) x = ascend(net_, p, box, x);
      const Eigen::VectorXd y = net_.forward(x);
      if (!holds(p, y)) return std::nullopt;
      w.inputs.push_back(x);
      w.outputs.push_back(y);
      if (i + 1 < steps) box = q_.transition->apply(c.prefix[i], Box::point(x));
    }
    return w;
  }

  std::optional<Witness> trial(const QueryCase& c, const Box* region) {
    ++result_.stats.trials;
    return chain(c, region ? *region : c.start, std::nullopt, true);
  }

  // Carries the whole box down the rest of the chain, ignoring the undecided
  // prefix check at `step`. True if every continuation is already excluded.
  bool settled_ahead(const QueryCase& c, std::size_t step, Box box) const {
    for (std::size_t s = step; s < c.prefix.size(); ++s) {
      if (s > step && evaluate(argmax_is(c.prefix[s]), net_, box) == Tri::False) return true;
      box = q_.transition->apply(c.prefix[s], box);
    }
    return evaluate(c.desired, net_, box) == Tri::True;
  }

  std::optional<Witness> branch_and_bound(const QueryCase& c) {
    const std::size_t last = c.prefix.size();
    std::vector<Node> stack{{0, c.start, c.start, 0}};
    while (!stack.empty()) {
      Node n = std::move(stack.back());
      stack.pop_back();
      result_.stats.deepest = std::max(result_.stats.deepest, n.depth);
      if (n.step == 0) {
        ++result_.stats.probes;
        if (auto w = chain(c, n.box, n.box.center(), false)) return w;
      }
      const bool final_step = n.step == last;
      const Tri t = evaluate(final_step ? c.desired : argmax_is(c.prefix[n.step]), net_, n.box);
      if (final_step ? t == Tri::True : t == Tri::False) {
        ++result_.stats.discharged;
        continue;
      }
      if (!final_step && t == Tri::True) {
        stack.push_back({n.step + 1, q_.transition->apply(c.prefix[n.step], n.box), n.origin, n.depth});
        continue;
      }
      if (!final_step && settled_ahead(c, n.step, n.box)) {
        ++result_.stats.discharged;
        continue;
      }
      const bool flat = (n.box.width().array() <= 0.0).all();
      if (n.depth >= cap_ || flat) {
        if (!final_step) {
          // Cannot decide the prefix here; carry every point forward.
          stack.push_back({n.step + 1, q_.transition->apply(c.prefix[n.step], n.box), n.origin, n.depth});
        } else {
          ++result_.stats.undecided;
          stuck_.push_back({&c, n.origin});
        }
        continue;
      }
      if (result_.stats.splits >= budget_.max_splits) {
        exhausted_ = true;
        stuck_.push_back({&c, n.origin});
        for (const auto& rest : stack) stuck_.push_back({&c, rest.origin});
        return std::nullopt;
      }
      ++result_.stats.splits;
      auto [a, b] = n.box.split(n.box.widest_dim());
      const bool root_step = n.step == 0;
      stack.push_back({n.step, b, root_step ? b : n.origin, n.depth + 1});
      stack.push_back({n.step, a, root_step ? a : n.origin, n.depth + 1});
    }
    return std::nullopt;
  }

  const nn::DenseNet& net_;
  const PropertyQuery& q_;
  const Budget& budget_;
  std::mt19937_64 rng_;
  int cap_;
  Verdict result_;
  std::vector<Stuck> stuck_;
  bool exhausted_ = false;
};

}  // namespace

Verdict verify(const nn::DenseNet& net, const PropertyQuery& query, const Budget& budget) {
  budget.validate();
  query.validate(net.input_dim());
  return Search(net, query, budget).run();
}

bool check_witness(const nn::DenseNet& net, const PropertyQuery& query, const Witness& w) {
  const auto it = std::find_if(query.cases.begin(), query.cases.end(),
                               [&](const QueryCase& c) { return c.label == w.case_label; });
  if (it == query.cases.end()) return false;
  const auto& c = *it;
  const std::size_t steps = c.prefix.size() + 1;
  if (w.inputs.size() != steps) return false;
  if (!c.start.contains(w.inputs.front())) return false;
  for (std::size_t i = 0; i < steps; ++i) {
    const Eigen::VectorXd y = net.forward(w.inputs[i]);
    if (!holds(required(c, i), y)) return false;
    if (i + 1 < steps && !query.transition->admits(c.prefix[i], w.inputs[i], w.inputs[i + 1])) return false;
  }
  return true;
}

}  // namespace scenav::verify
