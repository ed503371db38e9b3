#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "scenav/env/nav_env.hpp"
#include "scenav/nav/scenarios.hpp"
#include "scenav/nn/policy.hpp"
#include "scenav/sbp/program.hpp"
#include "scenav/train/config.hpp"
#include "scenav/train/trajectory.hpp"

namespace scenav::train {

inline constexpr int kNumRules = 3;

struct EpisodeRecord {
  Terminal outcome = Terminal::None;
  int steps = 0;
  double episode_return = 0.0;
  std::array<int, kNumRules> violations{};  // monitored, rules 1..3
  std::vector<double> costs;                // J_Ck per cost rule
  std::vector<std::pair<NavAction, Observation>> action_log;  // filled when requested
  Observation initial;

  bool success() const { return outcome == Terminal::ReachedTarget; }
};

struct RolloutSettings {
  TrainMode mode = TrainMode::BaselinePPO;
  std::vector<int> active_rules{1, 2, 3};
  double shaping_penalty = 1.0;
  bool keep_action_log = false;
};

struct RolloutOutput {
  std::vector<Trajectory> trajectories;
  std::vector<EpisodeRecord> episodes;  // completed during this collection
  std::size_t steps() const;
};

/// Picks the next action from the normalized observation.
using ActionSource = std::function<nn::ActionChoice(const std::vector<double>&, std::mt19937_64&)>;

ActionSource sample_from(const nn::DenseNet& policy, bool deterministic = false);

/// One environment plus its rule program and sampling stream. The program
/// always monitors all three rules; costs are reported for the active ones.
/// Episodes persist across collect() calls.
class RolloutWorker {
 public:
  RolloutWorker(World world, EnvConfig env_cfg, nav::RuleSetConfig rules, std::uint64_t env_seed,
                std::uint64_t sampling_seed);

  /// Runs `steps` environment steps. Critic estimates come from `bundle`.
  /// Errors from the environment or the rule program are rethrown with the
  /// step index attached.
  RolloutOutput collect(const nn::PolicyBundle& bundle, const ActionSource& actor, int steps,
                        const RolloutSettings& settings);

  const NavEnv& env() const { return env_; }

 private:
  void start_episode();

  NavEnv env_;
  nav::RuleSetConfig rules_;
  sbp::SBProgram fresh_program_;
  sbp::SBProgram program_;
  std::mt19937_64 rng_;
  bool in_episode_ = false;
  Observation raw_obs_;
  std::vector<double> obs_;
  EpisodeRecord episode_;
  long total_steps_ = 0;
};

/// Fills value / cost_values / bootstrap estimates of each trajectory.
void evaluate_critics(const nn::PolicyBundle& bundle, std::vector<Trajectory>& trajectories);

/// Violation counts per rule obtained by replaying an action log through a
/// fresh program. Independent of the worker's bookkeeping.
std::array<int, kNumRules> replay_violations(const std::vector<std::pair<NavAction, Observation>>& log,
                                             const nav::RuleSetConfig& rules);

}  // namespace scenav::train
