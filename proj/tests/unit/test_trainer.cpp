#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "scenav/env/world.hpp"
#include "scenav/train/trainer.hpp"

using namespace scenav;
using namespace scenav::train;

namespace {

// Plays a fixed action sequence, cycling when exhausted.
ActionSource scripted(std::vector<NavAction> seq) {
  auto i = std::make_shared<std::size_t>(0);
  return [seq, i](const std::vector<double>&, std::mt19937_64&) {
    nn::ActionChoice c;
    c.action = seq[(*i)++ % seq.size()];
    c.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    c.log_prob = std::log(1.0 / 3);
    return c;
  };
}

ActionSource uniform_random() {
  return [](const std::vector<double>&, std::mt19937_64& rng) {
    nn::ActionChoice c;
    c.action = action_from_index(static_cast<int>(rng() % 3));
    c.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    c.log_prob = std::log(1.0 / 3);
    return c;
  };
}

// Direct double-sum definition of the estimator.
std::vector<double> gae_oracle(const std::vector<double>& r, const std::vector<double>& v, double boot,
                               double gamma, double decay) {
  const std::size_t n = r.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double w = 1.0;
    for (std::size_t l = t; l < n; ++l) {
      const double next = l + 1 < n ? v[l + 1] : boot;
      out[t] += w * (r[l] + gamma * next - v[l]);
      w *= gamma * decay;
    }
  }
  return out;
}

TrainConfig small_config(TrainMode mode) {
  TrainConfig cfg;
  cfg.mode = mode;
  cfg.horizon = 256;
  cfg.minibatch_size = 64;
  cfg.max_episodes = 1000000;
  cfg.max_updates = 10;
  cfg.seeds = {11, 12, 13};
  return cfg;
}

TrainSetup four_block() { return {worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}}; }

}  // namespace

TEST(TrainConfig, DerivedLambdaRateAndValidation) {
  TrainConfig cfg;
  cfg.policy_lr = 5e-4;
  EXPECT_DOUBLE_EQ(cfg.lambda_lr(), 5e-5);
  EXPECT_EQ(cfg.thresholds(), (std::vector<double>{0.1, 0.1, 0.1}));
  EXPECT_TRUE(cfg.cost_rules().empty());
  cfg.mode = TrainMode::LagrangianSBP;
  cfg.active_rules = {1};
  EXPECT_EQ(cfg.cost_rules(), std::vector<int>{1});
  EXPECT_NO_THROW(cfg.validate());
  cfg.active_rules = {1, 1};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.active_rules = {4};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.active_rules = {1, 2};
  cfg.cost_thresholds = {0.1, 0.2, 0.3};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_mode("RewardShaping"), TrainMode::RewardShaping);
  EXPECT_THROW(parse_mode("ppo"), std::invalid_argument);
  EXPECT_EQ(parse_norm_mode(norm_mode_name(LambdaNormMode::Always)), LambdaNormMode::Always);
}

TEST(Lagrange, ZeroInitialization) {
  const auto s = make_lagrange_state({1, 2, 3}, {0.1, 0.1, 0.1}, 1e-5, LambdaNormMode::OnOverflow);
  EXPECT_EQ(s.normalized, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(s.reward_multiplier, 1.0);
  EXPECT_NO_THROW(s.check_invariants());
}

TEST(Lagrange, NormalizationExample) {
  auto s = make_lagrange_state({1, 2, 3}, {0.1, 0.1, 0.1}, 1e-5, LambdaNormMode::OnOverflow);
  s.raw = {1, 1, 1};
  normalize(s);
  for (double l : s.normalized) EXPECT_DOUBLE_EQ(l, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.reward_multiplier, 0.5);
  s.gate_open = true;
  EXPECT_NO_THROW(s.check_invariants());
}

TEST(Lagrange, NormalizationModes) {
  auto s = make_lagrange_state({1, 2}, {0.1, 0.1}, 1e-5, LambdaNormMode::OnOverflow);
  s.raw = {0.1, 0.05};
  normalize(s);
  EXPECT_EQ(s.normalized, (std::vector<double>{0.1, 0.05}));
  EXPECT_EQ(s.reward_multiplier, 1.0 - (0.1 + 0.05));
  s.norm_mode = LambdaNormMode::Always;
  normalize(s);
  EXPECT_NEAR(s.normalized[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.normalized[1], 1.0 / 6.0, 1e-15);
  s.raw = {0.0, 0.0};
  normalize(s);
  EXPECT_EQ(s.reward_multiplier, 1.0);
}

TEST(Lagrange, CostAtThresholdLeavesRawUnchanged) {
  auto s = make_lagrange_state({1}, {0.25}, 0.01, LambdaNormMode::OnOverflow);
  s.gate_open = true;
  s.raw = {0.3};
  normalize(s);
  const std::vector<double> j{0.25};
  EXPECT_EQ(lambda_update(s, j).raw, s.raw);
}

TEST(Lagrange, DecaysToZeroAndStays) {
  auto s = make_lagrange_state({1}, {0.5}, 0.01, LambdaNormMode::OnOverflow);
  s.gate_open = true;
  s.raw = {0.1};
  normalize(s);
  const std::vector<double> j{0.0};
  int steps = 0;
  while (s.raw[0] > 0.0) {
    s = lambda_update(s, j);
    ++steps;
    ASSERT_LT(steps, 1000);
  }
  EXPECT_EQ(steps, 20);  // 0.1 - 20 * 0.005 <= 0
  for (int i = 0; i < 50; ++i) {
    s = lambda_update(s, j);
    EXPECT_EQ(s.raw[0], 0.0);
    EXPECT_EQ(s.reward_multiplier, 1.0);
  }
}

TEST(Lagrange, ClosedGateIsNoOp) {
  auto s = make_lagrange_state({1, 2}, {0.1, 0.1}, 0.01, LambdaNormMode::OnOverflow);
  const std::vector<double> j{50.0, 50.0};
  const auto t = lambda_update(s, j);
  EXPECT_EQ(t.raw, s.raw);
  EXPECT_EQ(t.reward_multiplier, 1.0);
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(lambda_update(s, wrong), std::invalid_argument);
}

TEST(Lagrange, InvariantsUnderRandomUpdates) {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> cost(0.5);
  for (auto mode : {LambdaNormMode::OnOverflow, LambdaNormMode::Always}) {
    auto s = make_lagrange_state({1, 2, 3}, {0.1, 0.5, 2.0}, 0.05, mode);
    s.gate_open = true;
    for (int i = 0; i < 10000; ++i) {
      const std::vector<double> j{cost(rng), cost(rng), cost(rng)};
      s = lambda_update(s, j);
      ASSERT_NO_THROW(s.check_invariants());
      ASSERT_EQ(s.reward_multiplier, 1.0 - s.normalized_sum());
      ASSERT_LE(s.normalized_sum(), 0.5);
    }
  }
}

TEST(Lagrange, InvariantCheckDetectsCorruption) {
  auto s = make_lagrange_state({1}, {0.1}, 0.01, LambdaNormMode::OnOverflow);
  s.raw = {0.2};
  normalize(s);
  EXPECT_THROW(s.check_invariants(), std::logic_error);  // moved with the gate closed
  s.gate_open = true;
  s.reward_multiplier = 0.9;
  EXPECT_THROW(s.check_invariants(), std::logic_error);
  s.normalized = {0.6};
  s.reward_multiplier = 0.4;
  EXPECT_THROW(s.check_invariants(), std::logic_error);
}

TEST(Gate, WindowAndStrictThreshold) {
  std::vector<Terminal> h(99, Terminal::ReachedTarget);
  EXPECT_FALSE(gate_check(h));
  std::vector<Terminal> w(100, Terminal::Collision);
  std::fill_n(w.begin(), 61, Terminal::ReachedTarget);
  EXPECT_TRUE(gate_check(w));
  std::fill_n(w.begin(), 100, Terminal::Timeout);
  std::fill_n(w.begin(), 60, Terminal::ReachedTarget);
  EXPECT_FALSE(gate_check(w));
}

TEST(Gate, LatchesOnceOpen) {
  DelayedStartGate gate(100, 0.6);
  for (int i = 0; i < 99; ++i) EXPECT_FALSE(gate.record(Terminal::ReachedTarget));
  EXPECT_TRUE(gate.record(Terminal::ReachedTarget));
  for (int i = 0; i < 500; ++i) EXPECT_TRUE(gate.record(Terminal::Collision));
  EXPECT_LE(gate.window().size(), 100u);
}

TEST(Advantages, TelescopingExample) {
  const std::vector<double> r{0, 0, 0, 0, 1};
  const auto a = gae(r, std::vector<double>(5, 0.0), 0.0, 1.0, 1.0);
  for (double x : a) EXPECT_EQ(x, 1.0);
}

TEST(Advantages, SingleStepBaseCase) {
  const auto a = gae({0.7}, {0.2}, 0.0, 0.99, 0.95);
  EXPECT_DOUBLE_EQ(a[0], 0.7 - 0.2);
}

TEST(Advantages, MatchesDirectSumOracle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + rng() % 60;
    std::vector<double> r(len), v(len);
    for (std::size_t i = 0; i < len; ++i) {
      r[i] = n(rng);
      v[i] = n(rng);
    }
    const double boot = n(rng);
    const auto a = gae(r, v, boot, 0.99, 0.95);
    const auto o = gae_oracle(r, v, boot, 0.99, 0.95);
    for (std::size_t i = 0; i < len; ++i) ASSERT_NEAR(a[i], o[i], 1e-10);
  }
}

TEST(Advantages, RewardNormalizedCostsRaw) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<Trajectory> ts(3);
  for (auto& t : ts) {
    t.steps.resize(20);
    for (auto& s : t.steps) {
      s.reward = n(rng);
      s.value = n(rng);
      s.costs = {static_cast<double>(rng() % 2), 0.0};
      s.cost_values = {0.0, 0.0};
    }
    t.bootstrap_cost_values = {0.0, 0.0};
  }
  ts[2].ends_episode = true;
  const auto adv = compute_advantages(ts, 2, AdvantageOptions{});
  ASSERT_EQ(adv.reward.size(), 60u);
  const double mean = std::accumulate(adv.reward.begin(), adv.reward.end(), 0.0) / 60.0;
  double var = 0.0;
  for (double x : adv.reward) var += (x - mean) * (x - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(var / 60.0), 1.0, 1e-6);
  // Zero costs and zero critics give exactly zero cost advantage.
  for (double x : adv.cost[1]) EXPECT_EQ(x, 0.0);
  // The first cost channel is raw GAE of the indicator stream.
  std::vector<double> c0, v0(20, 0.0);
  for (const auto& s : ts[0].steps) c0.push_back(s.costs[0]);
  const auto expect = gae_oracle(c0, v0, 0.0, 0.99, 0.95);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(adv.cost[0][i], expect[i], 1e-12);
}

TEST(Ppo, CombinedAdvantageCancels) {
  const std::vector<double> a{0.3, -1.2, 2.0};
  const auto c = combine_advantages(0.5, a, {0.5}, {a});
  for (double x : c) EXPECT_EQ(x, 0.0);
  const auto plain = combine_advantages(1.0, a, {0.0}, {std::vector<double>{9, 9, 9}});
  EXPECT_EQ(plain, a);
}

TEST(Ppo, ClippedBranchHasZeroGradient) {
  const double eps = 0.2;
  const Eigen::Vector3d logits(0.1, -0.4, 0.3);
  const auto p = nn::softmax(logits);
  // Old log-prob chosen so that rho = 1 + 2 eps.
  const double old_lp = std::log(p[1]) - std::log(1.0 + 2.0 * eps);
  const auto t = clipped_surrogate(logits, 1, old_lp, 1.5, eps);
  EXPECT_NEAR(t.value, (1.0 + eps) * 1.5, 1e-12);
  EXPECT_EQ(t.logit_grad.norm(), 0.0);
  // Negative advantage: the unclipped branch is the minimum and carries gradient.
  const auto u = clipped_surrogate(logits, 1, old_lp, -1.5, eps);
  EXPECT_NEAR(u.value, (1.0 + 2.0 * eps) * -1.5, 1e-12);
  EXPECT_GT(u.logit_grad.norm(), 0.0);
}

TEST(Ppo, SurrogateGradientAndBound) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  const double h = 1e-6;
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector3d z(n(rng), n(rng), n(rng));
    const int a = static_cast<int>(rng() % 3);
    const double old_lp = std::log(nn::softmax(z)[static_cast<std::size_t>(a)]) + 0.3 * n(rng);
    const double adv = n(rng);
    const auto t = clipped_surrogate(z, a, old_lp, adv, 0.2);
    const double rho = std::exp(std::log(nn::softmax(z)[static_cast<std::size_t>(a)]) - old_lp);
    ASSERT_LE(t.value, rho * adv + 1e-12);
    for (int d = 0; d < 3; ++d) {
      Eigen::Vector3d zp = z, zm = z;
      zp[d] += h;
      zm[d] -= h;
      const double fd = (clipped_surrogate(zp, a, old_lp, adv, 0.2).value -
                         clipped_surrogate(zm, a, old_lp, adv, 0.2).value) / (2 * h);
      // Skip samples sitting on a clip boundary.
      if (std::abs(rho - 0.8) < 1e-4 || std::abs(rho - 1.2) < 1e-4) continue;
      ASSERT_NEAR(t.logit_grad[d], fd, 1e-5);
    }
  }
}

TEST(Ppo, CancelledAdvantageLeavesPolicyUnchanged) {
  auto bundle = nn::make_policy_bundle({1}, 21);
  TrainConfig cfg;
  cfg.mode = TrainMode::LagrangianSBP;
  cfg.active_rules = {1};
  cfg.entropy_coef = 0.0;
  cfg.minibatch_size = 16;
  auto optim = OptimizerSet::for_bundle(bundle, cfg.policy_lr, cfg.critic_lr);

  auto lag = make_lagrange_state({1}, {0.1}, cfg.lambda_lr(), LambdaNormMode::Always);
  lag.gate_open = true;
  lag.raw = {0.7};
  normalize(lag);
  ASSERT_EQ(lag.normalized[0], 0.5);
  ASSERT_EQ(lag.reward_multiplier, 0.5);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Trajectory t;
  for (int i = 0; i < 64; ++i) {
    StepRecord s;
    s.obs.resize(kObsDim);
    for (double& x : s.obs) x = u(rng);
    s.action = static_cast<int>(rng() % 3);
    s.log_prob = std::log(1.0 / 3);
    s.costs = {0.0};
    s.cost_values = {0.0};
    t.steps.push_back(s);
  }
  AdvantageBatch adv;
  for (int i = 0; i < 64; ++i) adv.reward.push_back(u(rng) - 0.5);
  adv.reward_raw = adv.reward;
  adv.reward_returns.assign(64, 0.0);
  adv.cost = {adv.reward};
  adv.cost_returns = {std::vector<double>(64, 0.0)};
  const auto batch = make_batch({t}, adv, lag, TrainMode::LagrangianSBP);
  for (double a : batch.advantages) ASSERT_EQ(a, 0.0);

  const nn::DenseNet before = bundle.policy;
  ppo_update(bundle, optim, batch, cfg, rng);
  EXPECT_TRUE(bundle.policy == before);
  EXPECT_FALSE(bundle.reward_critic == nn::make_policy_bundle({1}, 21).reward_critic);
}

TEST(Rollout, LeftThenRightCostsRuleOne) {
  RolloutWorker w(worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}, 5, 6);
  const auto bundle = nn::make_policy_bundle({1}, 1);
  RolloutSettings s;
  s.mode = TrainMode::LagrangianSBP;
  s.active_rules = {1};
  const auto out = w.collect(bundle, scripted({NavAction::Left, NavAction::Right}), 2, s);
  ASSERT_EQ(out.trajectories.size(), 1u);
  const auto& st = out.trajectories[0].steps;
  EXPECT_EQ(st[0].costs, std::vector<double>{0.0});
  EXPECT_EQ(st[1].costs, std::vector<double>{1.0});
  EXPECT_EQ(st[1].violated_rules, std::vector<int>{1});
}

TEST(Rollout, BaselineHasNoCostsAndShapingSubtractsPenalty) {
  const auto bundle = nn::make_policy_bundle({}, 1);
  RolloutSettings base;
  base.mode = TrainMode::BaselinePPO;
  RolloutSettings shaping;
  shaping.mode = TrainMode::RewardShaping;
  shaping.shaping_penalty = 1.0;
  // Same seeds: identical episodes, rewards differ only where a rule blocks.
  RolloutWorker a(worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}, 5, 6);
  RolloutWorker b(worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}, 5, 6);
  const std::vector<NavAction> seq{NavAction::Left, NavAction::Right, NavAction::Forward, NavAction::Left,
                                   NavAction::Left, NavAction::Left, NavAction::Left, NavAction::Left,
                                   NavAction::Left, NavAction::Left, NavAction::Left};
  const auto oa = a.collect(bundle, scripted(seq), 300, base);
  const auto ob = b.collect(bundle, scripted(seq), 300, shaping);
  ASSERT_EQ(oa.steps(), ob.steps());
  int penalized = 0;
  for (std::size_t i = 0; i < oa.trajectories.size(); ++i) {
    for (std::size_t j = 0; j < oa.trajectories[i].steps.size(); ++j) {
      const auto& x = oa.trajectories[i].steps[j];
      const auto& y = ob.trajectories[i].steps[j];
      EXPECT_TRUE(x.costs.empty());
      EXPECT_EQ(x.violated_rules, y.violated_rules);
      if (y.violated_rules.empty()) {
        EXPECT_EQ(x.reward, y.reward);
      } else {
        EXPECT_EQ(y.reward, x.reward - 1.0);
        ++penalized;
      }
    }
  }
  EXPECT_GT(penalized, 0);
}

TEST(Rollout, ActorErrorsCarryStepIndex) {
  RolloutWorker w(worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}, 5, 6);
  const auto bundle = nn::make_policy_bundle({}, 1);
  auto calls = std::make_shared<int>(0);
  ActionSource bad = [calls](const std::vector<double>&, std::mt19937_64&) -> nn::ActionChoice {
    if ((*calls)++ == 3) throw std::runtime_error("boom");
    return {NavAction::Left, std::log(1.0 / 3), {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  };
  try {
    w.collect(bundle, bad, 10, RolloutSettings{});
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("step 3"), std::string::npos);
  }
}

TEST(Rollout, EpisodeCostsEqualViolationCounts) {
  RolloutWorker w(worlds::builtin("four-block"), EnvConfig{}, nav::RuleSetConfig{}, 8, 9);
  const auto bundle = nn::make_policy_bundle({1, 2, 3}, 1);
  RolloutSettings s;
  s.mode = TrainMode::LagrangianSBP;
  s.active_rules = {1, 2, 3};
  const auto out = w.collect(bundle, uniform_random(), 5000, s);
  ASSERT_GT(out.episodes.size(), 10u);
  for (const auto& e : out.episodes) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(e.costs[static_cast<std::size_t>(k)], e.violations[static_cast<std::size_t>(k)]);
  }
}

// Logged counts against an offline replay through a fresh program.
TEST(Rollout, ReplayRecountMatchesLoggedViolations) {
  nav::RuleSetConfig rules;
  RolloutWorker w(worlds::builtin("four-block"), EnvConfig{}, rules, 21, 22);
  const auto bundle = nn::make_policy_bundle({}, 1);
  RolloutSettings s;
  s.keep_action_log = true;
  std::vector<EpisodeRecord> eps;
  while (eps.size() < 100) {
    auto out = w.collect(bundle, uniform_random(), 2000, s);
    for (auto& e : out.episodes) eps.push_back(std::move(e));
  }
  int total = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    ASSERT_EQ(eps[i].action_log.size(), static_cast<std::size_t>(eps[i].steps));
    EXPECT_EQ(replay_violations(eps[i].action_log, rules), eps[i].violations);
    total += eps[i].violations[0] + eps[i].violations[1] + eps[i].violations[2];
  }
  EXPECT_GT(total, 0);
}

TEST(Metrics, JsonLineRoundTrip) {
  EpisodeMetrics m;
  m.episode = 4;
  m.update = 2;
  m.outcome = Terminal::Collision;
  m.steps = 17;
  m.episode_return = -1.25;
  m.violations = {3, 0, 1};
  m.cost_rules = {1, 3};
  m.costs = {3, 1};
  m.lambdas = {0.125, 0.0};
  m.alpha = 0.875;
  m.gate_open = true;
  const auto line = to_json_line(m);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(to_json_line(parse_metrics_line(line)), line);
}

TEST(Training, InvariantsHoldAfterEveryUpdate) {
  TrainConfig cfg = small_config(TrainMode::LagrangianSBP);
  cfg.max_updates = 30;
  cfg.gate_window = 10;
  cfg.gate_threshold = 0.0;  // opens after the first successful window
  int checked = 0;
  bool opened = false;
  TrainHooks hooks;
  hooks.on_update = [&](const UpdateRecord& u, const nn::PolicyBundle&) {
    u.lagrange.check_invariants();
    if (opened) EXPECT_TRUE(u.lagrange.gate_open);
    opened = u.lagrange.gate_open;
    if (!u.lagrange.gate_open) {
      for (double l : u.lagrange.normalized) EXPECT_EQ(l, 0.0);
      EXPECT_EQ(u.lagrange.reward_multiplier, 1.0);
    }
    ++checked;
  };
  const auto r = train::train(cfg, four_block(), hooks);
  EXPECT_EQ(checked, 30);
  EXPECT_TRUE(opened);
  EXPECT_EQ(r.updates, 30);
}

TEST(Training, ClosedGateReducesToBaseline) {
  TrainConfig lag = small_config(TrainMode::LagrangianSBP);
  lag.gate_threshold = 1.0;  // unreachable
  TrainConfig base = small_config(TrainMode::BaselinePPO);
  base.gate_threshold = 1.0;
  std::vector<nn::DenseNet> a, b;
  TrainHooks ha, hb;
  ha.on_update = [&](const UpdateRecord&, const nn::PolicyBundle& p) { a.push_back(p.policy); };
  hb.on_update = [&](const UpdateRecord&, const nn::PolicyBundle& p) { b.push_back(p.policy); };
  train::train(lag, four_block(), ha);
  train::train(base, four_block(), hb);
  ASSERT_EQ(a.size(), 10u);
  ASSERT_EQ(b.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i] == b[i]) << "update " << i;
}

TEST(Training, IdenticalSeedsGiveIdenticalLogs) {
  TrainConfig cfg = small_config(TrainMode::LagrangianSBP);
  cfg.gate_window = 5;
  cfg.gate_threshold = 0.0;
  auto log = [&](const TrainConfig& c) {
    std::string s;
    TrainHooks h;
    h.on_episode = [&](const EpisodeMetrics& m) { s += to_json_line(m) + "\n"; };
    train::train(c, four_block(), h);
    return s;
  };
  const auto first = log(cfg);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, log(cfg));
  cfg.num_workers = 4;
  cfg.parallel_workers = false;
  const auto serial = log(cfg);
  cfg.parallel_workers = true;
  EXPECT_EQ(serial, log(cfg));
}

TEST(Training, EmptyWorldBaselineLearns) {
  TrainConfig cfg;
  cfg.mode = TrainMode::BaselinePPO;
  cfg.max_episodes = 2000;
  cfg.seeds = {1, 2, 3};
  const auto r = train::train(cfg, TrainSetup{worlds::builtin("empty"), EnvConfig{}, nav::RuleSetConfig{}});
  ASSERT_GE(r.episodes.size(), 200u);
  int wins = 0;
  for (std::size_t i = r.episodes.size() - 200; i < r.episodes.size(); ++i) wins += r.episodes[i].success();
  EXPECT_GT(wins / 200.0, 0.8);
}
