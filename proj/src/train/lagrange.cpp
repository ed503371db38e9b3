#include "scenav/train/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scenav::train {

double LagrangeState::normalized_sum() const {
  double s = 0.0;
  for (double l : normalized) s += l;
  return s;
}

void LagrangeState::check_invariants() const {
  const double s = normalized_sum();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!(raw[k] >= 0.0) || !(normalized[k] >= 0.0)) {
      throw std::logic_error("negative multiplier for rule " + std::to_string(rules[k]));
    }
  }
  if (!(s <= 0.5)) throw std::logic_error("sum of multipliers exceeds 1/2");
  if (reward_multiplier != 1.0 - s) throw std::logic_error("reward multiplier != 1 - sum(lambda)");
  if (!(reward_multiplier >= s)) throw std::logic_error("reward multiplier below sum(lambda)");
  if (!gate_open) {
    for (double l : raw) {
      if (l != 0.0) throw std::logic_error("multiplier moved before the gate opened");
    }
  }
}

LagrangeState make_lagrange_state(const std::vector<int>& rules, const std::vector<double>& thresholds,
                                  double lambda_lr, LambdaNormMode mode) {
  if (thresholds.size() != rules.size()) throw std::invalid_argument("one threshold per rule required");
  LagrangeState s;
  s.rules = rules;
  s.raw.assign(rules.size(), 0.0);
  s.normalized.assign(rules.size(), 0.0);
  s.thresholds = thresholds;
  s.lambda_lr = lambda_lr;
  s.norm_mode = mode;
  normalize(s);
  return s;
}

void normalize(LagrangeState& s) {
  double total = 0.0;
  for (double l : s.raw) total += l;
  const bool rescale = s.norm_mode == LambdaNormMode::Always ? total > 0.0 : total > 0.5;
  for (std::size_t k = 0; k < s.raw.size(); ++k) {
    s.normalized[k] = rescale ? s.raw[k] / (2.0 * total) : s.raw[k];
  }
  // Rounding can leave the sum an ulp above 1/2; shave the largest term.
  while (s.normalized_sum() > 0.5) {
    auto it = std::max_element(s.normalized.begin(), s.normalized.end());
    *it = std::nextafter(*it, 0.0);
  }
  s.reward_multiplier = 1.0 - s.normalized_sum();
}

LagrangeState lambda_update(LagrangeState s, std::span<const double> episode_costs) {
  if (episode_costs.size() != s.raw.size()) {
    throw std::invalid_argument("lambda_update: one episode cost per rule required");
  }
  if (!s.gate_open) return s;
  for (std::size_t k = 0; k < s.raw.size(); ++k) {
    s.raw[k] = std::max(0.0, s.raw[k] + s.lambda_lr * (episode_costs[k] - s.thresholds[k]));
  }
  normalize(s);
  return s;
}

bool gate_check(std::span<const Terminal> history, int window, double threshold) {
  if (window <= 0 || history.size() < static_cast<std::size_t>(window)) return false;
  return success_rate(history.subspan(history.size() - static_cast<std::size_t>(window))) > threshold;
}

bool DelayedStartGate::record(Terminal outcome) {
  recent_.push_back(outcome);
  if (recent_.size() > static_cast<std::size_t>(window_)) recent_.pop_front();
  if (!open_) {
    const std::vector<Terminal> w(recent_.begin(), recent_.end());
    open_ = gate_check(w, window_, threshold_);
  }
  return open_;
}

}  // namespace scenav::train
