#pragma once

#include <deque>
#include <span>
#include <vector>

#include "scenav/env/nav_env.hpp"
#include "scenav/train/config.hpp"

namespace scenav::train {

struct LagrangeState {
  std::vector<int> rules;
  std::vector<double> raw;         // >= 0
  std::vector<double> normalized;  // sum <= 1/2
  std::vector<double> thresholds;  // violations per episode
  double reward_multiplier = 1.0;  // alpha = 1 - sum(normalized)
  double lambda_lr = 0.0;
  LambdaNormMode norm_mode = LambdaNormMode::OnOverflow;
  bool gate_open = false;

  double normalized_sum() const;
  /// Throws std::logic_error if alpha != 1 - sum(lambda), sum(lambda) > 1/2,
  /// any lambda < 0 or alpha < sum(lambda). Exact comparisons.
  void check_invariants() const;
};

/// All multipliers start at zero, so alpha starts at 1.
LagrangeState make_lagrange_state(const std::vector<int>& rules, const std::vector<double>& thresholds,
                                  double lambda_lr, LambdaNormMode mode);

/// Recomputes normalized multipliers and alpha from the raw ones.
void normalize(LagrangeState& s);

/// Projected ascent raw_k <- max(0, raw_k + lr (J_k - d_k)) followed by
/// normalization. A no-op while the gate is closed.
LagrangeState lambda_update(LagrangeState s, std::span<const double> episode_costs);

/// True iff at least `window` outcomes exist and the success rate over the
/// last `window` is strictly above `threshold`.
bool gate_check(std::span<const Terminal> history, int window = 100, double threshold = 0.60);

/// Sliding outcome window with a latch: once open, stays open.
class DelayedStartGate {
 public:
  DelayedStartGate(int window, double threshold) : window_(window), threshold_(threshold) {}

  /// Records an outcome and returns the (latched) gate state.
  bool record(Terminal outcome);
  bool open() const { return open_; }
  const std::deque<Terminal>& window() const { return recent_; }

 private:
  int window_;
  double threshold_;
  std::deque<Terminal> recent_;
  bool open_ = false;
};

}  // namespace scenav::train
