#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "scenav/app/run_config.hpp"
#include "scenav/env/nav_env.hpp"
#include "scenav/nn/dense_net.hpp"
#include "scenav/train/rollout.hpp"
#include "scenav/train/trainer.hpp"
#include "scenav/verify/campaign.hpp"

namespace scenav::app {

enum ExitCode { kOk = 0, kOtherError = 1, kConfigError = 2, kIoError = 3, kNumericalError = 4 };

/// Maps the exception currently being handled onto an exit code.
int exit_code_for_current_exception();

struct TraceStep {
  int t = 0;
  RobotState pose;  // after the step
  NavAction action = NavAction::Forward;
  double reward = 0.0;
  std::vector<int> violated_rules;
  Observation obs;  // raw, after the step
  Terminal terminal = Terminal::None;
};

struct EpisodeTrace {
  RobotState start;
  std::vector<TraceStep> steps;
  Terminal outcome = Terminal::None;
  std::array<int, train::kNumRules> violations{};
};

/// Runs one episode from the environment's current state (reset it first),
/// monitoring all three rules.
EpisodeTrace run_episode(const nn::DenseNet& policy, NavEnv& env, const nav::RuleSetConfig& rules,
                         bool deterministic, std::mt19937_64& rng);

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  std::array<double, train::kNumRules> mean_violations{};
  std::array<double, train::kNumRules> std_violations{};
};

/// Fresh episodes with per-episode seeds derived from `seed`.
/// Throws std::invalid_argument for episodes <= 0.
EvalSummary evaluate(const nn::DenseNet& policy, const World& world, const EnvConfig& env,
                     const nav::RuleSetConfig& rules, int episodes, bool deterministic, std::uint64_t seed);

void write_eval_summary(std::ostream& os, const EvalSummary& s);

/// One JSON object per line: a header, one record per step, a summary.
void write_trace(std::ostream& os, const EpisodeTrace& trace, std::uint64_t seed, const std::string& world);
/// Action log (action, raw post-step observation) recovered from a dump.
std::vector<std::pair<NavAction, Observation>> read_trace_actions(std::istream& in);

/// Trains with `cfg`, writing config.json, metrics.jsonl, periodic
/// checkpoints and policy.ckpt into `out`.
train::TrainResult run_training(const RunConfig& cfg, const std::filesystem::path& out);

/// Builds the named properties for a policy with the given config.
std::vector<verify::PropertyQuery> build_queries(const RunConfig& cfg);

/// Expands directories into their *.ckpt files (sorted).
std::vector<std::filesystem::path> expand_checkpoints(const std::vector<std::string>& args);

}  // namespace scenav::app
