#include "scenav/train/trainer.hpp"

#include "json.hpp"

#include <thread>

namespace scenav::train {

using nlohmann::json;

std::string to_json_line(const EpisodeMetrics& m) {
  json j;
  j["episode"] = m.episode;
  j["update"] = m.update;
  j["outcome"] = std::string(terminal_name(m.outcome));
  j["success"] = m.success();
  j["steps"] = m.steps;
  j["return"] = m.episode_return;
  j["mean_reward"] = m.steps > 0 ? m.episode_return / m.steps : 0.0;
  j["violations"] = m.violations;
  j["rules"] = m.cost_rules;
  j["J_C"] = m.costs;
  j["lambda"] = m.lambdas;
  j["alpha"] = m.alpha;
  j["gate_open"] = m.gate_open;
  j["policy_loss"] = m.policy_loss;
  j["value_loss"] = m.value_loss;
  j["entropy"] = m.entropy;
  return j.dump();
}

EpisodeMetrics parse_metrics_line(const std::string& line) {
  const json j = json::parse(line);
  EpisodeMetrics m;
  m.episode = j.at("episode").get<int>();
  m.update = j.at("update").get<int>();
  m.outcome = parse_terminal(j.at("outcome").get<std::string>());
  m.steps = j.at("steps").get<int>();
  m.episode_return = j.at("return").get<double>();
  m.violations = j.at("violations").get<std::array<int, kNumRules>>();
  m.cost_rules = j.at("rules").get<std::vector<int>>();
  m.costs = j.at("J_C").get<std::vector<double>>();
  m.lambdas = j.at("lambda").get<std::vector<double>>();
  m.alpha = j.at("alpha").get<double>();
  m.gate_open = j.at("gate_open").get<bool>();
  m.policy_loss = j.at("policy_loss").get<double>();
  m.value_loss = j.at("value_loss").get<double>();
  m.entropy = j.at("entropy").get<double>();
  return m;
}

TrainResult train(const TrainConfig& cfg, const TrainSetup& setup, const TrainHooks& hooks) {
  cfg.validate();
  const std::vector<int> cost_rules = cfg.cost_rules();

  TrainResult result;
  result.bundle = nn::make_policy_bundle(cost_rules, cfg.seeds.init);
  result.bundle.metadata["mode"] = std::string(mode_name(cfg.mode));
  result.bundle.metadata["world"] = setup.world.name;
  std::string active;
  for (int r : cfg.active_rules) active += (active.empty() ? "" : ",") + std::to_string(r);
  result.bundle.metadata["active_rules"] = active.empty() ? "none" : active;

  auto optim = OptimizerSet::for_bundle(result.bundle, cfg.policy_lr, cfg.critic_lr);
  LagrangeState lagrange = make_lagrange_state(
      cost_rules, cost_rules.empty() ? std::vector<double>{} : cfg.thresholds(), cfg.lambda_lr(), cfg.lambda_norm);
  DelayedStartGate gate(cfg.gate_window, cfg.gate_threshold);
  std::mt19937_64 update_rng(nn::derive_seed(cfg.seeds.sampling, 1000));

  std::vector<RolloutWorker> workers;
  for (int w = 0; w < cfg.num_workers; ++w) {
    workers.emplace_back(setup.world, setup.env, setup.rules,
                         nn::derive_seed(cfg.seeds.env, static_cast<std::uint64_t>(w)),
                         nn::derive_seed(cfg.seeds.sampling, static_cast<std::uint64_t>(w)));
  }
  RolloutSettings settings;
  settings.mode = cfg.mode;
  settings.active_rules = cfg.active_rules;
  settings.shaping_penalty = cfg.shaping_penalty;

  const AdvantageOptions adv_opts{cfg.gamma, cfg.gae_lambda, true};
  int episode_counter = 0;

  while (episode_counter < cfg.max_episodes && result.updates < cfg.max_updates) {
    // Workers read a snapshot of the bundle; results merge in worker order.
    const nn::PolicyBundle snapshot = result.bundle;
    std::vector<RolloutOutput> outputs(workers.size());
    auto run = [&](std::size_t w) {
      int steps = cfg.horizon / cfg.num_workers;
      if (w == 0) steps += cfg.horizon % cfg.num_workers;
      outputs[w] = workers[w].collect(snapshot, sample_from(snapshot.policy), steps, settings);
    };
    if (cfg.parallel_workers && workers.size() > 1) {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers.size(); ++w) threads.emplace_back(run, w);
    } else {
      for (std::size_t w = 0; w < workers.size(); ++w) run(w);
    }

    std::vector<Trajectory> trajectories;
    std::vector<EpisodeRecord> finished;
    for (auto& o : outputs) {
      for (auto& t : o.trajectories) trajectories.push_back(std::move(t));
      for (auto& e : o.episodes) finished.push_back(std::move(e));
    }

    for (const auto& e : finished) gate.record(e.outcome);
    lagrange.gate_open = gate.open();
    if (!finished.empty() && !cost_rules.empty()) {
      std::vector<double> mean_cost(cost_rules.size(), 0.0);
      for (const auto& e : finished) {
        for (std::size_t k = 0; k < cost_rules.size(); ++k) mean_cost[k] += e.costs[k];
      }
      for (double& c : mean_cost) c /= static_cast<double>(finished.size());
      lagrange = lambda_update(lagrange, mean_cost);
    }
    lagrange.check_invariants();

    const AdvantageBatch adv = compute_advantages(trajectories, cost_rules.size(), adv_opts);
    const PpoBatch batch = make_batch(trajectories, adv, lagrange, cfg.mode);
    const PpoDiagnostics diag = ppo_update(result.bundle, optim, batch, cfg, update_rng);
    ++result.updates;

    for (const auto& e : finished) {
      EpisodeMetrics m;
      m.episode = episode_counter++;
      m.update = result.updates;
      m.outcome = e.outcome;
      m.steps = e.steps;
      m.episode_return = e.episode_return;
      m.violations = e.violations;
      m.cost_rules = cost_rules;
      m.costs = e.costs;
      m.lambdas = lagrange.normalized;
      m.alpha = lagrange.reward_multiplier;
      m.gate_open = lagrange.gate_open;
      m.policy_loss = diag.policy_loss;
      m.value_loss = diag.value_loss;
      m.entropy = diag.entropy;
      if (hooks.on_episode) hooks.on_episode(m);
      result.episodes.push_back(std::move(m));
    }
    if (hooks.on_update) hooks.on_update(UpdateRecord{result.updates, batch.size(), lagrange, diag}, result.bundle);
    if (hooks.on_checkpoint && cfg.checkpoint_every > 0 && result.updates % cfg.checkpoint_every == 0) {
      hooks.on_checkpoint(result.updates, result.bundle);
    }
  }
  result.lagrange = lagrange;
  result.bundle.metadata["episodes"] = std::to_string(episode_counter);
  result.bundle.metadata["updates"] = std::to_string(result.updates);
  return result;
}

}  // namespace scenav::train
