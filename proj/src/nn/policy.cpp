#include "scenav/nn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scenav/env/observation.hpp"

namespace scenav::nn {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void PolicyBundle::validate() const {
  const std::vector<int> policy_shape{static_cast<int>(kObsDim), kHiddenWidth, kHiddenWidth,
                                      static_cast<int>(kNumActions)};
  if (policy.topology() != policy_shape) {
    throw std::invalid_argument("policy topology must be 9-32-32-3");
  }
  auto check_critic = [](const DenseNet& n, const std::string& what) {
    if (n.input_dim() != static_cast<int>(kObsDim) || n.output_dim() != 1) {
      throw std::invalid_argument(what + " must map 9 inputs to 1 output");
    }
  };
  check_critic(reward_critic, "reward critic");
  if (cost_critics.size() != cost_rules.size()) {
    throw std::invalid_argument("one cost critic per active rule required");
  }
  for (std::size_t i = 0; i < cost_critics.size(); ++i) {
    check_critic(cost_critics[i], "cost critic " + std::to_string(cost_rules[i]));
  }
}

PolicyBundle make_policy_bundle(const std::vector<int>& cost_rules, std::uint64_t seed) {
  const std::array<int, 4> policy_shape{static_cast<int>(kObsDim), kHiddenWidth, kHiddenWidth,
                                        static_cast<int>(kNumActions)};
  const std::array<int, 4> critic_shape{static_cast<int>(kObsDim), kHiddenWidth, kHiddenWidth, 1};
  PolicyBundle b;
  std::mt19937_64 policy_rng(derive_seed(seed, 0));
  std::mt19937_64 critic_rng(derive_seed(seed, 1));
  b.policy = DenseNet::make(policy_shape, policy_rng, 0.01);
  b.reward_critic = DenseNet::make(critic_shape, critic_rng, 1.0);
  b.cost_rules = cost_rules;
  for (int rule : cost_rules) {
    std::mt19937_64 rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(rule)));
    b.cost_critics.push_back(DenseNet::make(critic_shape, rng, 1.0));
  }
  return b;
}

std::array<double, kNumActions> softmax(const Eigen::VectorXd& logits) {
  if (logits.size() != static_cast<Eigen::Index>(kNumActions)) {
    throw std::invalid_argument("softmax expects 3 logits");
  }
  const double m = logits.maxCoeff();
  std::array<double, kNumActions> p{};
  double z = 0.0;
  for (std::size_t i = 0; i < kNumActions; ++i) {
    p[i] = std::exp(logits[static_cast<Eigen::Index>(i)] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

int argmax(const Eigen::VectorXd& logits) {
  int best = 0;
  for (int i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

ActionChoice choose_action(const DenseNet& policy, const std::vector<double>& normalized_obs,
                           std::mt19937_64& rng, bool deterministic) {
  const Eigen::VectorXd logits = policy.forward(Eigen::Map<const Eigen::VectorXd>(
      normalized_obs.data(), static_cast<Eigen::Index>(normalized_obs.size())));
  ActionChoice c;
  c.probs = softmax(logits);
  int index;
  if (deterministic) {
    index = argmax(logits);
  } else {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    index = static_cast<int>(kNumActions) - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < kNumActions; ++i) {
      acc += c.probs[i];
      if (u < acc) {
        index = static_cast<int>(i);
        break;
      }
    }
  }
  c.action = action_from_index(index);
  // log-softmax directly from logits for accuracy
  const double m = logits.maxCoeff();
  c.log_prob = logits[index] - m - std::log((logits.array() - m).exp().sum());
  return c;
}

}  // namespace scenav::nn
