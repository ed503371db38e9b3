#include "scenav/train/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scenav/env/observation.hpp"

namespace scenav::train {

namespace {

Eigen::VectorXd log_softmax(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  return z.array() - lse;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
  return out;
}

double regress(nn::DenseNet& critic, nn::AdamState& opt, const Eigen::MatrixXd& x,
               const std::vector<double>& targets, const std::vector<std::size_t>& idx, double max_norm) {
  const auto pass = critic.forward_cached(x);
  const auto m = static_cast<double>(idx.size());
  Eigen::MatrixXd upstream(1, x.cols());
  double loss = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double err = pass.output(0, j) - targets[idx[static_cast<std::size_t>(j)]];
    loss += 0.5 * err * err / m;
    upstream(0, j) = err / m;
  }
  auto g = critic.backward(pass, upstream);
  nn::clip_grad_norm(g, max_norm);
  nn::adam_update(opt, critic, g);
  return loss;
}

}  // namespace

std::vector<double> combine_advantages(double alpha, const std::vector<double>& reward_adv,
                                       const std::vector<double>& lambdas,
                                       const std::vector<std::vector<double>>& cost_adv) {
  if (lambdas.size() != cost_adv.size()) throw std::invalid_argument("one cost channel per multiplier");
  std::vector<double> out(reward_adv.size());
  for (std::size_t i = 0; i < reward_adv.size(); ++i) {
    double a = alpha * reward_adv[i];
    for (std::size_t k = 0; k < lambdas.size(); ++k) a -= lambdas[k] * cost_adv[k].at(i);
    out[i] = a;
  }
  return out;
}

PpoBatch make_batch(const std::vector<Trajectory>& trajectories, const AdvantageBatch& adv,
                    const LagrangeState& lagrange, TrainMode mode) {
  PpoBatch b;
  std::size_t n = 0;
  for (const auto& t : trajectories) n += t.steps.size();
  b.obs.resize(static_cast<Eigen::Index>(kObsDim), static_cast<Eigen::Index>(n));
  std::size_t j = 0;
  for (const auto& t : trajectories) {
    for (const auto& s : t.steps) {
      b.obs.col(static_cast<Eigen::Index>(j)) =
          Eigen::Map<const Eigen::VectorXd>(s.obs.data(), static_cast<Eigen::Index>(kObsDim));
      b.actions.push_back(s.action);
      b.old_log_probs.push_back(s.log_prob);
      ++j;
    }
  }
  if (mode == TrainMode::LagrangianSBP) {
    b.advantages = combine_advantages(lagrange.reward_multiplier, adv.reward, lagrange.normalized, adv.cost);
  } else {
    b.advantages = adv.reward;
  }
  b.reward_returns = adv.reward_returns;
  b.cost_returns = adv.cost_returns;
  return b;
}

SurrogateTerm clipped_surrogate(const Eigen::VectorXd& logits, int action, double old_log_prob,
                                double advantage, double epsilon) {
  const Eigen::VectorXd logp = log_softmax(logits);
  const double ratio = std::exp(logp[action] - old_log_prob);
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  const double unclipped_term = ratio * advantage;
  const double clipped_term = clipped * advantage;
  SurrogateTerm t;
  t.value = std::min(unclipped_term, clipped_term);
  t.logit_grad = Eigen::VectorXd::Zero(logits.size());
  if (unclipped_term <= clipped_term) {
    // d ratio / d z = ratio * (onehot - p)
    const Eigen::VectorXd p = logp.array().exp();
    t.logit_grad = -advantage * ratio * p;
    t.logit_grad[action] += advantage * ratio;
  }
  return t;
}

OptimizerSet OptimizerSet::for_bundle(const nn::PolicyBundle& b, double policy_lr, double critic_lr) {
  OptimizerSet o;
  o.policy = nn::AdamState::for_net(b.policy, policy_lr);
  o.reward_critic = nn::AdamState::for_net(b.reward_critic, critic_lr);
  for (const auto& c : b.cost_critics) o.cost_critics.push_back(nn::AdamState::for_net(c, critic_lr));
  return o;
}

PpoDiagnostics ppo_update(nn::PolicyBundle& bundle, OptimizerSet& optim, const PpoBatch& batch,
                          const TrainConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("ppo_update on an empty batch");
  const std::size_t nc = bundle.cost_critics.size();
  if (batch.cost_returns.size() != nc) throw std::invalid_argument("cost returns do not match cost critics");

  PpoDiagnostics diag;
  diag.cost_value_loss.assign(nc, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t mb = static_cast<std::size_t>(cfg.minibatch_size);
  double minibatches = 0.0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += mb) {
      const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + mb)));
      const auto m = static_cast<double>(idx.size());
      const Eigen::MatrixXd x = gather_columns(batch.obs, idx);

      // Policy: maximize surrogate + entropy bonus, i.e. minimize the negation.
      const auto pass = bundle.policy.forward_cached(x);
      Eigen::MatrixXd upstream(pass.output.rows(), pass.output.cols());
      double policy_loss = 0.0, entropy = 0.0, kl = 0.0, clipped = 0.0;
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const std::size_t s = idx[static_cast<std::size_t>(j)];
        const Eigen::VectorXd z = pass.output.col(j);
        const auto term = clipped_surrogate(z, batch.actions[s], batch.old_log_probs[s],
                                            batch.advantages[s], cfg.clip_epsilon);
        const Eigen::VectorXd logp = log_softmax(z);
        const Eigen::VectorXd p = logp.array().exp();
        const double h = -(p.array() * logp.array()).sum();
        // d(-c H)/dz_j = c p_j (log p_j + H)
        const Eigen::VectorXd ent_grad = cfg.entropy_coef * (p.array() * (logp.array() + h)).matrix();
        upstream.col(j) = (-term.logit_grad + ent_grad) / m;
        policy_loss += -term.value / m;
        entropy += h / m;
        const double log_ratio = logp[batch.actions[s]] - batch.old_log_probs[s];
        kl += ((std::exp(log_ratio) - 1.0) - log_ratio) / m;
        if (std::abs(std::exp(log_ratio) - 1.0) > cfg.clip_epsilon) clipped += 1.0 / m;
      }
      if (!std::isfinite(policy_loss) || !std::isfinite(entropy)) {
        std::ostringstream os;
        os << "non-finite policy loss (loss=" << policy_loss << ", entropy=" << entropy
           << ", epoch=" << epoch << ", minibatch start=" << start << ")";
        throw NumericalError(os.str());
      }
      auto g = bundle.policy.backward(pass, upstream);
      nn::clip_grad_norm(g, cfg.max_grad_norm);
      nn::adam_update(optim.policy, bundle.policy, g);

      const double vloss =
          regress(bundle.reward_critic, optim.reward_critic, x, batch.reward_returns, idx, cfg.max_grad_norm);
      if (!std::isfinite(vloss)) throw NumericalError("non-finite reward critic loss");
      diag.value_loss += vloss;
      for (std::size_t k = 0; k < nc; ++k) {
        const double closs = regress(bundle.cost_critics[k], optim.cost_critics[k], x, batch.cost_returns[k],
                                     idx, cfg.max_grad_norm);
        if (!std::isfinite(closs)) throw NumericalError("non-finite cost critic loss");
        diag.cost_value_loss[k] += closs;
      }
      diag.policy_loss += policy_loss;
      diag.entropy += entropy;
      diag.approx_kl += kl;
      diag.clip_fraction += clipped;
      minibatches += 1.0;
    }
  }
  diag.policy_loss /= minibatches;
  diag.value_loss /= minibatches;
  diag.entropy /= minibatches;
  diag.approx_kl /= minibatches;
  diag.clip_fraction /= minibatches;
  for (double& c : diag.cost_value_loss) c /= minibatches;
  return diag;
}

}  // namespace scenav::train
