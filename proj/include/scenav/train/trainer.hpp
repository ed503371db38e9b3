#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scenav/env/nav_env.hpp"
#include "scenav/nav/scenarios.hpp"
#include "scenav/nn/policy.hpp"
#include "scenav/train/config.hpp"
#include "scenav/train/lagrange.hpp"
#include "scenav/train/ppo.hpp"
#include "scenav/train/rollout.hpp"

namespace scenav::train {

/// One metrics-log record, written as a single JSON line.
struct EpisodeMetrics {
  int episode = 0;
  int update = 0;
  Terminal outcome = Terminal::None;
  int steps = 0;
  double episode_return = 0.0;
  std::array<int, kNumRules> violations{};
  std::vector<int> cost_rules;
  std::vector<double> costs;    // J_Ck
  std::vector<double> lambdas;  // normalized, after the update that consumed this episode
  double alpha = 1.0;
  bool gate_open = false;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;

  bool success() const { return outcome == Terminal::ReachedTarget; }
};

std::string to_json_line(const EpisodeMetrics& m);
EpisodeMetrics parse_metrics_line(const std::string& line);

struct UpdateRecord {
  int update = 0;
  std::size_t steps = 0;
  LagrangeState lagrange;
  PpoDiagnostics diagnostics;
};

struct TrainHooks {
  std::function<void(const EpisodeMetrics&)> on_episode;
  std::function<void(const UpdateRecord&, const nn::PolicyBundle&)> on_update;
  std::function<void(int update, const nn::PolicyBundle&)> on_checkpoint;
};

struct TrainSetup {
  World world;
  EnvConfig env;
  nav::RuleSetConfig rules;
};

struct TrainResult {
  nn::PolicyBundle bundle;
  std::vector<EpisodeMetrics> episodes;
  LagrangeState lagrange;
  int updates = 0;
};

/// Runs updates until max_episodes episodes finished or max_updates reached.
/// Deterministic in cfg.seeds regardless of cfg.parallel_workers. Lagrange
/// invariants are asserted after every multiplier update.
TrainResult train(const TrainConfig& cfg, const TrainSetup& setup, const TrainHooks& hooks = {});

}  // namespace scenav::train
