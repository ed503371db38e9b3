#include "scenav/train/rollout.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scenav::train {

namespace {

const std::vector<int> kMonitoredRules{1, 2, 3};

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

std::size_t RolloutOutput::steps() const {
  std::size_t n = 0;
  for (const auto& t : trajectories) n += t.steps.size();
  return n;
}

ActionSource sample_from(const nn::DenseNet& policy, bool deterministic) {
  return [&policy, deterministic](const std::vector<double>& obs, std::mt19937_64& rng) {
    return nn::choose_action(policy, obs, rng, deterministic);
  };
}

RolloutWorker::RolloutWorker(World world, EnvConfig env_cfg, nav::RuleSetConfig rules,
                             std::uint64_t env_seed, std::uint64_t sampling_seed)
    : env_(std::move(world), env_cfg, env_seed),
      rules_(std::move(rules)),
      fresh_program_(nav::make_rule_program(kMonitoredRules, rules_)),
      program_(fresh_program_),
      rng_(sampling_seed) {}

void RolloutWorker::start_episode() {
  raw_obs_ = env_.reset();
  obs_ = env_.scale().normalize(raw_obs_);
  program_ = fresh_program_;
  episode_ = EpisodeRecord{};
  episode_.initial = raw_obs_;
  in_episode_ = true;
}

RolloutOutput RolloutWorker::collect(const nn::PolicyBundle& bundle, const ActionSource& actor,
                                     int steps, const RolloutSettings& settings) {
  const bool lagrangian = settings.mode == TrainMode::LagrangianSBP;
  const bool shaping = settings.mode == TrainMode::RewardShaping;
  const std::vector<int> cost_rules = lagrangian ? settings.active_rules : std::vector<int>{};

  RolloutOutput out;
  Trajectory current;
  for (int i = 0; i < steps; ++i, ++total_steps_) {
    if (!in_episode_) start_episode();
    try {
      const nn::ActionChoice choice = actor(obs_, rng_);
      const StepResult result = env_.step(choice.action);
      const sbp::StepOutcome outcome =
          program_.deliver_external(nav::action_to_event(choice.action, result.obs));

      StepRecord rec;
      rec.obs = obs_;
      rec.action = action_index(choice.action);
      rec.log_prob = choice.log_prob;
      rec.reward = result.reward;
      rec.raw_next = result.obs;
      for (const auto& id : outcome.violated_rules) rec.violated_rules.push_back(nav::rule_number(id));

      bool shaped_hit = false;
      for (int r : rec.violated_rules) {
        ++episode_.violations[static_cast<std::size_t>(r - 1)];
        if (contains(settings.active_rules, r)) shaped_hit = true;
      }
      if (shaping && shaped_hit) rec.reward -= settings.shaping_penalty;
      if (episode_.costs.size() != cost_rules.size()) episode_.costs.assign(cost_rules.size(), 0.0);
      for (std::size_t k = 0; k < cost_rules.size(); ++k) {
        const double c = contains(rec.violated_rules, cost_rules[k]) ? 1.0 : 0.0;
        rec.costs.push_back(c);
        episode_.costs[k] += c;
      }
      if (settings.keep_action_log) episode_.action_log.emplace_back(choice.action, result.obs);

      episode_.steps += 1;
      episode_.episode_return += rec.reward;
      rec.terminal = result.terminal == Terminal::ReachedTarget || result.terminal == Terminal::Collision;
      current.steps.push_back(std::move(rec));

      raw_obs_ = result.obs;
      obs_ = env_.scale().normalize(raw_obs_);
      if (result.terminal != Terminal::None) {
        current.ends_episode = true;
        current.outcome = result.terminal;
        // Timeouts are truncations: bootstrap from the final observation.
        if (result.terminal == Terminal::Timeout) current.bootstrap_obs = obs_;
        out.trajectories.push_back(std::move(current));
        current = Trajectory{};
        episode_.outcome = result.terminal;
        if (episode_.costs.size() != cost_rules.size()) episode_.costs.assign(cost_rules.size(), 0.0);
        out.episodes.push_back(std::move(episode_));
        in_episode_ = false;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("rollout step " + std::to_string(total_steps_) + ": " + e.what());
    }
  }
  if (!current.steps.empty()) {
    current.bootstrap_obs = obs_;
    out.trajectories.push_back(std::move(current));
  }
  evaluate_critics(bundle, out.trajectories);
  return out;
}

void evaluate_critics(const nn::PolicyBundle& bundle, std::vector<Trajectory>& trajectories) {
  const std::size_t nc = bundle.cost_critics.size();
  for (auto& t : trajectories) {
    const auto n = static_cast<Eigen::Index>(t.steps.size());
    const bool boot = !t.bootstrap_obs.empty();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(kObsDim), n + (boot ? 1 : 0));
    for (Eigen::Index j = 0; j < n; ++j) {
      x.col(j) = Eigen::Map<const Eigen::VectorXd>(t.steps[static_cast<std::size_t>(j)].obs.data(),
                                                   static_cast<Eigen::Index>(kObsDim));
    }
    if (boot) x.col(n) = Eigen::Map<const Eigen::VectorXd>(t.bootstrap_obs.data(), kObsDim);

    const Eigen::MatrixXd v = bundle.reward_critic.forward_cached(x).output;
    std::vector<Eigen::MatrixXd> cv;
    for (const auto& critic : bundle.cost_critics) cv.push_back(critic.forward_cached(x).output);
    for (Eigen::Index j = 0; j < n; ++j) {
      auto& s = t.steps[static_cast<std::size_t>(j)];
      s.value = v(0, j);
      s.cost_values.resize(nc);
      for (std::size_t k = 0; k < nc; ++k) s.cost_values[k] = cv[k](0, j);
      if (s.costs.size() < nc) s.costs.resize(nc, 0.0);
    }
    t.bootstrap_value = boot ? v(0, n) : 0.0;
    t.bootstrap_cost_values.assign(nc, 0.0);
    if (boot) {
      for (std::size_t k = 0; k < nc; ++k) t.bootstrap_cost_values[k] = cv[k](0, n);
    }
  }
}

std::array<int, kNumRules> replay_violations(const std::vector<std::pair<NavAction, Observation>>& log,
                                             const nav::RuleSetConfig& rules) {
  sbp::SBProgram program = nav::make_rule_program(kMonitoredRules, rules);
  std::array<int, kNumRules> counts{};
  for (const auto& [action, obs] : log) {
    // Count blockers before delivery, independently of StepOutcome.
    const auto blocked = program.blocked_events();
    if (auto it = blocked.find(std::string(event_name(action))); it != blocked.end()) {
      for (const auto& id : it->second) ++counts[static_cast<std::size_t>(nav::rule_number(id) - 1)];
    }
    program.deliver_external(nav::action_to_event(action, obs));
  }
  return counts;
}

}  // namespace scenav::train
