#include "scenav/train/config.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scenav::train {

std::string_view mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::BaselinePPO: return "BaselinePPO";
    case TrainMode::LagrangianSBP: return "LagrangianSBP";
    case TrainMode::RewardShaping: return "RewardShaping";
  }
  return "?";
}

TrainMode parse_mode(std::string_view name) {
  for (auto m : {TrainMode::BaselinePPO, TrainMode::LagrangianSBP, TrainMode::RewardShaping}) {
    if (mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown training mode '" + std::string(name) + "'");
}

std::string_view norm_mode_name(LambdaNormMode m) {
  return m == LambdaNormMode::Always ? "always" : "on_overflow";
}

LambdaNormMode parse_norm_mode(std::string_view name) {
  if (name == "always") return LambdaNormMode::Always;
  if (name == "on_overflow") return LambdaNormMode::OnOverflow;
  throw std::invalid_argument("unknown lambda_norm_mode '" + std::string(name) + "'");
}

std::vector<double> TrainConfig::thresholds() const {
  if (cost_thresholds.size() == 1) return std::vector<double>(active_rules.size(), cost_thresholds[0]);
  return cost_thresholds;
}

std::vector<int> TrainConfig::cost_rules() const {
  if (mode != TrainMode::LagrangianSBP) return {};
  return active_rules;
}

void TrainConfig::validate() const {
  auto need = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("train.") + field + " is out of range");
  };
  need(policy_lr > 0.0, "policy_lr");
  need(critic_lr > 0.0, "critic_lr");
  need(clip_epsilon > 0.0 && clip_epsilon < 1.0, "clip_epsilon");
  need(gamma >= 0.0 && gamma <= 1.0, "gamma");
  need(gae_lambda >= 0.0 && gae_lambda <= 1.0, "gae_lambda");
  need(epochs >= 1, "epochs");
  need(minibatch_size >= 1, "minibatch_size");
  need(horizon >= 1, "horizon");
  need(entropy_coef >= 0.0, "entropy_coef");
  need(max_grad_norm >= 0.0, "max_grad_norm");
  need(gate_threshold >= 0.0, "gate_threshold");
  need(gate_window >= 1, "gate_window");
  need(shaping_penalty >= 0.0, "shaping_penalty");
  need(max_episodes >= 1, "max_episodes");
  need(max_updates >= 1, "max_updates");
  need(num_workers >= 1 && num_workers <= horizon, "num_workers");
  need(checkpoint_every >= 0, "checkpoint_every");
  std::vector<int> rules = active_rules;
  std::sort(rules.begin(), rules.end());
  need(std::adjacent_find(rules.begin(), rules.end()) == rules.end(), "active_rules");
  for (int r : rules) need(r >= 1 && r <= 3, "active_rules");
  need(cost_thresholds.size() == 1 || cost_thresholds.size() == active_rules.size(), "cost_thresholds");
  for (double d : cost_thresholds) need(d >= 0.0, "cost_thresholds");
}

}  // namespace scenav::train
