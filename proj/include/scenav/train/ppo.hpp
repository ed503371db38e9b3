#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "scenav/nn/adam.hpp"
#include "scenav/nn/policy.hpp"
#include "scenav/train/config.hpp"
#include "scenav/train/lagrange.hpp"
#include "scenav/train/trajectory.hpp"

namespace scenav::train {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flattened training samples for one policy update.
struct PpoBatch {
  Eigen::MatrixXd obs;  // kObsDim x N
  std::vector<int> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;  // combined, see combine_advantages
  std::vector<double> reward_returns;
  std::vector<std::vector<double>> cost_returns;  // [rule][sample]

  std::size_t size() const { return actions.size(); }
};

/// alpha * A_R - sum_k lambda_k * A_Ck, per sample.
std::vector<double> combine_advantages(double alpha, const std::vector<double>& reward_adv,
                                       const std::vector<double>& lambdas,
                                       const std::vector<std::vector<double>>& cost_adv);

PpoBatch make_batch(const std::vector<Trajectory>& trajectories, const AdvantageBatch& adv,
                    const LagrangeState& lagrange, TrainMode mode);

struct SurrogateTerm {
  double value = 0.0;
  Eigen::VectorXd logit_grad;  // d value / d logits
};

/// min(rho * A, clip(rho, 1 - eps, 1 + eps) * A) for one sample, with its
/// gradient w.r.t. the current logits.
SurrogateTerm clipped_surrogate(const Eigen::VectorXd& logits, int action, double old_log_prob,
                                double advantage, double epsilon);

struct OptimizerSet {
  nn::AdamState policy;
  nn::AdamState reward_critic;
  std::vector<nn::AdamState> cost_critics;

  static OptimizerSet for_bundle(const nn::PolicyBundle& bundle, double policy_lr, double critic_lr);
};

struct PpoDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  std::vector<double> cost_value_loss;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

/// Several epochs of shuffled minibatch updates on policy and critics.
/// Throws NumericalError when a loss becomes non-finite.
PpoDiagnostics ppo_update(nn::PolicyBundle& bundle, OptimizerSet& optim, const PpoBatch& batch,
                          const TrainConfig& cfg, std::mt19937_64& rng);

}  // namespace scenav::train
