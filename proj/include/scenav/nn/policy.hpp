#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scenav/nav/action.hpp"
#include "scenav/nn/dense_net.hpp"

namespace scenav::nn {

inline constexpr int kHiddenWidth = 32;

/// Policy (9 -> 32 -> 32 -> 3 logits), reward critic and one cost critic per
/// active rule, all reading the normalized 9-value observation.
struct PolicyBundle {
  DenseNet policy;
  DenseNet reward_critic;
  std::vector<int> cost_rules;
  std::vector<DenseNet> cost_critics;  // parallel to cost_rules
  std::map<std::string, std::string> metadata;

  /// Throws std::invalid_argument when a net breaks the observation/output contract.
  void validate() const;
};

/// Each net draws from its own seed stream, so the policy and reward critic do
/// not depend on how many cost critics exist.
PolicyBundle make_policy_bundle(const std::vector<int>& cost_rules, std::uint64_t seed);

std::array<double, kNumActions> softmax(const Eigen::VectorXd& logits);

/// Lowest index among the maxima.
int argmax(const Eigen::VectorXd& logits);

struct ActionChoice {
  NavAction action;
  double log_prob;
  std::array<double, kNumActions> probs;
};

/// Samples from the softmax policy, or takes the argmax when deterministic.
ActionChoice choose_action(const DenseNet& policy, const std::vector<double>& normalized_obs,
                           std::mt19937_64& rng, bool deterministic);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace scenav::nn
