#pragma once

#include <string>
#include <vector>

#include "scenav/env/nav_env.hpp"

namespace scenav::train {

struct StepRecord {
  std::vector<double> obs;  // normalized network input
  int action = 0;
  double log_prob = 0.0;
  double reward = 0.0;
  std::vector<double> costs;  // c_k in {0, 1}, one per cost rule
  double value = 0.0;
  std::vector<double> cost_values;
  bool terminal = false;
  /// Audit trail: every monitored rule that blocked the action, and the raw
  /// post-step observation carried as the event payload.
  std::vector<int> violated_rules;
  Observation raw_next;
};

/// Contiguous steps of a single episode inside one rollout. `bootstrap_*` hold
/// the critic estimates at the cut point and are zero when the episode ended in
/// a true terminal state (target or collision).
struct Trajectory {
  std::vector<StepRecord> steps;
  bool ends_episode = false;
  Terminal outcome = Terminal::None;
  std::vector<double> bootstrap_obs;
  double bootstrap_value = 0.0;
  std::vector<double> bootstrap_cost_values;
};

struct AdvantageOptions {
  double gamma = 0.99;
  double decay = 0.95;
  bool normalize_reward = true;
};

/// Flattened over all trajectories in order.
struct AdvantageBatch {
  std::vector<double> reward;      // normalized when requested
  std::vector<double> reward_raw;
  std::vector<double> reward_returns;
  std::vector<std::vector<double>> cost;  // [rule][step], never normalized
  std::vector<std::vector<double>> cost_returns;
};

/// Generalized advantage estimation, independently per channel.
AdvantageBatch compute_advantages(const std::vector<Trajectory>& trajectories, std::size_t num_costs,
                                  const AdvantageOptions& options);

/// One-channel GAE over a single segment.
std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double bootstrap, double gamma, double decay);

}  // namespace scenav::train
