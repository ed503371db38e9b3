#include "scenav/train/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace scenav::train {

std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double bootstrap, double gamma, double decay) {
  if (rewards.size() != values.size()) throw std::invalid_argument("gae: reward/value length mismatch");
  std::vector<double> adv(rewards.size());
  double next_value = bootstrap;
  double running = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    const double delta = rewards[i] + gamma * next_value - values[i];
    running = delta + gamma * decay * running;
    adv[i] = running;
    next_value = values[i];
  }
  return adv;
}

AdvantageBatch compute_advantages(const std::vector<Trajectory>& trajectories, std::size_t num_costs,
                                  const AdvantageOptions& o) {
  AdvantageBatch out;
  out.cost.resize(num_costs);
  out.cost_returns.resize(num_costs);
  for (const auto& traj : trajectories) {
    const std::size_t n = traj.steps.size();
    std::vector<double> r(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = traj.steps[i].reward;
      v[i] = traj.steps[i].value;
    }
    const auto a = gae(r, v, traj.bootstrap_value, o.gamma, o.decay);
    for (std::size_t i = 0; i < n; ++i) {
      out.reward_raw.push_back(a[i]);
      out.reward_returns.push_back(a[i] + v[i]);
    }
    for (std::size_t k = 0; k < num_costs; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        r[i] = traj.steps[i].costs.at(k);
        v[i] = traj.steps[i].cost_values.at(k);
      }
      const double boot = traj.bootstrap_cost_values.empty() ? 0.0 : traj.bootstrap_cost_values.at(k);
      const auto c = gae(r, v, boot, o.gamma, o.decay);
      for (std::size_t i = 0; i < n; ++i) {
        out.cost[k].push_back(c[i]);
        out.cost_returns[k].push_back(c[i] + v[i]);
      }
    }
  }

  out.reward = out.reward_raw;
  if (o.normalize_reward && !out.reward.empty()) {
    double mean = 0.0;
    for (double x : out.reward) mean += x;
    mean /= static_cast<double>(out.reward.size());
    double var = 0.0;
    for (double x : out.reward) var += (x - mean) * (x - mean);
    var /= static_cast<double>(out.reward.size());
    const double sd = std::sqrt(var) + 1e-8;
    for (double& x : out.reward) x = (x - mean) / sd;
  }
  return out;
}

}  // namespace scenav::train
