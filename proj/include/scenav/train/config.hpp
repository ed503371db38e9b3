#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scenav::train {

enum class TrainMode { BaselinePPO, LagrangianSBP, RewardShaping };
std::string_view mode_name(TrainMode m);
TrainMode parse_mode(std::string_view name);

/// How raw multipliers map onto the normalized ones.
///   OnOverflow: lambda = raw while sum(raw) <= 1/2, else raw / (2 sum(raw)).
///   Always:     lambda = raw / (2 sum(raw)) whenever sum(raw) > 0.
enum class LambdaNormMode { OnOverflow, Always };
std::string_view norm_mode_name(LambdaNormMode m);
LambdaNormMode parse_norm_mode(std::string_view name);

/// Ratio between the multiplier step size and the policy learning rate.
inline constexpr double kLambdaLrRatio = 0.1;

struct Seeds {
  std::uint64_t env = 1;
  std::uint64_t init = 2;
  std::uint64_t sampling = 3;
};

struct TrainConfig {
  TrainMode mode = TrainMode::BaselinePPO;
  double shaping_penalty = 1.0;  // RewardShaping only

  double policy_lr = 3e-4;
  double critic_lr = 1e-3;
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int epochs = 4;
  int minibatch_size = 256;
  int horizon = 2048;  // steps per update, summed over workers
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;

  double gate_threshold = 0.60;
  int gate_window = 100;
  LambdaNormMode lambda_norm = LambdaNormMode::OnOverflow;
  std::vector<int> active_rules{1, 2, 3};
  std::vector<double> cost_thresholds{0.1};  // one value for all rules, or one per active rule

  int max_episodes = 2000;
  int max_updates = 100000;
  int num_workers = 1;
  bool parallel_workers = false;
  int checkpoint_every = 0;  // updates; 0 disables periodic checkpoints

  Seeds seeds;

  double lambda_lr() const { return kLambdaLrRatio * policy_lr; }
  std::vector<double> thresholds() const;  // expanded to one per active rule
  /// Rules that feed cost critics: the active rules in LagrangianSBP mode, none otherwise.
  std::vector<int> cost_rules() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace scenav::train
