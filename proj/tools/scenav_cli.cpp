// scenav: train, evaluate, verify and replay navigation policies.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenav/app/commands.hpp"
#include "scenav/nn/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace scenav;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool deterministic = false;
  std::optional<long> budget;
};

app::RunConfig load_config(const Common& c) {
  app::RunConfig cfg = c.config.empty() ? app::RunConfig{} : app::load_run_config(c.config);
  if (c.seed) app::apply_seed(cfg, *c.seed);
  if (!c.out.empty()) cfg.out = c.out;
  return cfg;
}

nn::DenseNet load_policy(const std::string& path) {
  if (!fs::exists(path)) throw app::IoError("checkpoint not found: '" + path + "'");
  const auto ckpt = nn::load_checkpoint(path);
  if (!ckpt.has_net("policy")) throw nn::CheckpointError(path + ": no 'policy' network");
  const auto& net = ckpt.net("policy");
  if (net.input_dim() != static_cast<int>(kObsDim) || net.output_dim() != kNumActions) {
    throw nn::CheckpointError(path + ": policy topology does not match the navigation task");
  }
  return net;
}

int cmd_train(const Common& c) {
  app::RunConfig cfg = load_config(c);
  if (c.budget) {
    if (*c.budget <= 0) throw app::ConfigError("--budget: must be positive");
    cfg.train.max_episodes = static_cast<int>(*c.budget);
  }
  cfg.validate();
  const auto result = app::run_training(cfg, cfg.out);
  const std::size_t n = result.episodes.size();
  const std::size_t tail = std::min<std::size_t>(n, 200);
  int success = 0;
  for (std::size_t i = n - tail; i < n; ++i) success += result.episodes[i].success();
  std::cout << "episodes " << n << " updates " << result.updates << " success(last " << tail
            << ") " << (tail ? double(success) / double(tail) : 0.0) << "\nwrote " << cfg.out << '\n';
  return app::kOk;
}

int cmd_eval(const Common& c, const std::string& checkpoint, std::optional<int> episodes) {
  app::RunConfig cfg = load_config(c);
  if (episodes) cfg.eval.episodes = *episodes;
  if (c.deterministic) cfg.eval.deterministic = true;
  if (cfg.eval.episodes <= 0) throw app::ConfigError("--episodes: must be positive");
  const auto policy = load_policy(checkpoint);
  const auto summary = app::evaluate(policy, app::resolve_world(cfg), cfg.env, cfg.rules, cfg.eval.episodes,
                                     cfg.eval.deterministic, cfg.eval.seed);
  app::write_eval_summary(std::cout, summary);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    app::write_eval_summary(f, summary);
    if (!f) throw app::IoError("failed writing '" + c.out + "'");
  }
  return app::kOk;
}

int cmd_verify(const Common& c, const std::vector<std::string>& checkpoints, const std::vector<std::string>& props) {
  app::RunConfig cfg = load_config(c);
  if (c.budget) cfg.verify.budget.max_splits = *c.budget;
  if (!props.empty()) cfg.verify.properties = props;
  cfg.validate();
  const auto paths = app::expand_checkpoints(checkpoints);
  if (paths.empty()) throw app::ConfigError("verify: no checkpoints given");
  const auto result = verify::campaign(paths, app::build_queries(cfg), cfg.verify.budget);
  const fs::path table = c.out.empty() ? fs::path("verify.tsv") : fs::path(c.out);
  if (table.has_parent_path()) fs::create_directories(table.parent_path());
  std::ofstream f(table);
  verify::write_table(f, result);
  if (!f) throw app::IoError("failed writing '" + table.string() + "'");
  verify::write_summary(std::cout, result);
  std::cout << "wrote " << table.string() << '\n';
  return app::kOk;
}

int cmd_replay(const Common& c, const std::string& checkpoint) {
  app::RunConfig cfg = load_config(c);
  const auto policy = load_policy(checkpoint);
  const std::uint64_t seed = c.seed.value_or(cfg.eval.seed);
  NavEnv env(app::resolve_world(cfg), cfg.env, nn::derive_seed(seed, 0));
  env.reset(nn::derive_seed(seed, 2));
  std::mt19937_64 rng(nn::derive_seed(seed, 1));
  const auto trace = app::run_episode(policy, env, cfg.rules, c.deterministic, rng);
  const fs::path out = c.out.empty() ? fs::path("replay.jsonl") : fs::path(c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out);
  app::write_trace(f, trace, seed, cfg.world);
  if (!f) throw app::IoError("failed writing '" + out.string() + "'");
  std::cout << "outcome " << terminal_name(trace.outcome) << " steps " << trace.steps.size() << " violations "
            << trace.violations[0] << ' ' << trace.violations[1] << ' ' << trace.violations[2] << "\nwrote "
            << out.string() << '\n';
  return app::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Rule-constrained navigation policies: training, evaluation, verification, replay"};
  cli.require_subcommand(1);

  Common common;
  std::string checkpoint;
  std::vector<std::string> checkpoints;
  std::vector<std::string> props;
  std::optional<int> episodes;

  const auto add_common = [&](CLI::App* sub, bool budget) {
    sub->add_option("--config", common.config, "JSON run config")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Derive all seeds from this value");
    sub->add_option("--out", common.out, "Output path");
    sub->add_flag("--deterministic", common.deterministic, "Argmax actions instead of sampling");
    if (budget) sub->add_option("--budget", common.budget, "Episodes (train) or max splits (verify)");
  };

  auto* train = cli.add_subcommand("train", "Train a policy; writes checkpoints, metrics and the archived config");
  add_common(train, true);
  auto* eval = cli.add_subcommand("eval", "Evaluate a checkpoint on fresh episodes");
  add_common(eval, false);
  eval->add_option("checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--episodes", episodes, "Number of episodes");
  auto* ver = cli.add_subcommand("verify", "Run verification queries over checkpoints");
  add_common(ver, true);
  ver->add_option("checkpoints", checkpoints, "Checkpoint files or directories")->required();
  ver->add_option("--property", props, "Property name (repeatable)");
  auto* replay = cli.add_subcommand("replay", "Dump one episode as JSON lines");
  add_common(replay, false);
  replay->add_option("checkpoint", checkpoint, "Checkpoint file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::kConfigError;
  }

  try {
    if (*train) return cmd_train(common);
    if (*eval) return cmd_eval(common, checkpoint, episodes);
    if (*ver) return cmd_verify(common, checkpoints, props);
    if (*replay) return cmd_replay(common, checkpoint);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::exit_code_for_current_exception();
  }
  return app::kOtherError;
}
