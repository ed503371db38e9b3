#include "scenav/app/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scenav/nn/policy.hpp"

namespace scenav::app {

using nlohmann::json;

namespace {

// Reads declared fields of one JSON object and rejects anything left over.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + ": wrong type (" + std::string(it->type_name()) + ")");
    }
  }

  template <class F>
  void object(const char* key, F&& fn) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    Fields sub(*it, field(key));
    fn(sub);
    sub.finish();
  }

  template <class F>
  void string_as(const char* key, F&& fn) {
    std::string s;
    bool present = j_.contains(key);
    get(key, s);
    if (!present) return;
    try {
      fn(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field(key) + ": " + e.what());
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(field(k) + ": unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "<root>" : path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_env(Fields& f, EnvConfig& e) {
  f.get("step_len", e.step_len);
  f.get("turn_angle", e.turn_angle);
  f.get("max_range", e.max_range);
  f.get("robot_radius", e.robot_radius);
  f.get("goal_radius", e.goal_radius);
  f.get("max_steps", e.max_steps);
  f.get("reward_scale", e.reward_scale);
  f.get("step_penalty", e.step_penalty);
  f.get("min_start_goal_dist", e.min_start_goal_dist);
  f.get("max_placement_tries", e.max_placement_tries);
}

void read_train(Fields& f, train::TrainConfig& t) {
  f.string_as("mode", [&](const std::string& s) { t.mode = train::parse_mode(s); });
  f.get("shaping_penalty", t.shaping_penalty);
  f.get("policy_lr", t.policy_lr);
  f.get("critic_lr", t.critic_lr);
  f.get("clip_epsilon", t.clip_epsilon);
  f.get("gamma", t.gamma);
  f.get("gae_lambda", t.gae_lambda);
  f.get("epochs", t.epochs);
  f.get("minibatch_size", t.minibatch_size);
  f.get("horizon", t.horizon);
  f.get("entropy_coef", t.entropy_coef);
  f.get("max_grad_norm", t.max_grad_norm);
  f.get("gate_threshold", t.gate_threshold);
  f.get("gate_window", t.gate_window);
  f.string_as("lambda_norm", [&](const std::string& s) { t.lambda_norm = train::parse_norm_mode(s); });
  f.get("active_rules", t.active_rules);
  f.get("cost_thresholds", t.cost_thresholds);
  f.get("max_episodes", t.max_episodes);
  f.get("max_updates", t.max_updates);
  f.get("num_workers", t.num_workers);
  f.get("parallel_workers", t.parallel_workers);
  f.get("checkpoint_every", t.checkpoint_every);
  f.object("seeds", [&](Fields& s) {
    s.get("env", t.seeds.env);
    s.get("init", t.seeds.init);
    s.get("sampling", t.seeds.sampling);
  });
}

void read_rules(Fields& f, nav::RuleSetConfig& r) {
  f.get("k", r.consecutive_turns_k);
  f.object("guard", [&](Fields& g) {
    g.get("minimal_fwd_clearance", r.guard.minimal_fwd_clearance);
    g.get("minimal_clearance", r.guard.minimal_clearance);
    g.get("fwd_dir", r.guard.fwd_dir);
    g.get("fwd_dir_tolerance", r.guard.fwd_dir_tolerance);
  });
  f.get("advance_on_block", r.program.advance_on_block);
  f.get("max_super_step", r.program.max_super_step);
}

void read_verify(Fields& f, VerifyConfig& v) {
  f.get("max_splits", v.budget.max_splits);
  f.get("max_trials", v.budget.max_trials);
  f.get("max_depth", v.budget.max_depth);
  f.get("seed", v.budget.seed);
  f.get("slack", v.slack);
  f.get("k", v.k);
  f.get("properties", v.properties);
}

void read_eval(Fields& f, EvalConfig& e) {
  f.get("episodes", e.episodes);
  f.get("deterministic", e.deterministic);
  f.get("seed", e.seed);
}

// Re-throws a domain validation error under the section's path.
template <class F>
void in_section(const std::string& section, F&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind(section + ".", 0) == 0) throw ConfigError(msg);
    throw ConfigError(section + ": " + msg);
  }
}

}  // namespace

void RunConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw ConfigError("schema_version: unsupported version " + std::to_string(schema_version));
  }
  if (world.empty()) throw ConfigError("world: must not be empty");
  if (out.empty()) throw ConfigError("out: must not be empty");
  in_section("env", [&] { env.validate(); });
  in_section("train", [&] { train.validate(); });
  in_section("rules.guard", [&] { rules.guard.validate(); });
  if (rules.consecutive_turns_k < 1) throw ConfigError("rules.k: must be at least 1");
  if (rules.program.max_super_step < 1) throw ConfigError("rules.max_super_step: must be positive");
  in_section("verify", [&] { verify.budget.validate(); });
  if (!(verify.slack >= 0.0)) throw ConfigError("verify.slack: must be non-negative");
  if (verify.k < 2) throw ConfigError("verify.k: must be at least 2");
  static const std::set<std::string> known{"turning-when-clear", "back-and-forth", "k-turns", "toy-output-below-40"};
  for (const auto& p : verify.properties) {
    if (!known.count(p)) throw ConfigError("verify.properties: unknown property '" + p + "'");
  }
  if (eval.episodes <= 0) throw ConfigError("eval.episodes: must be positive");
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  Fields root(j, "");
  root.get("schema_version", cfg.schema_version);
  if (!j.contains("schema_version")) throw ConfigError("schema_version: required");
  root.get("world", cfg.world);
  root.object("env", [&](Fields& f) { read_env(f, cfg.env); });
  root.object("train", [&](Fields& f) { read_train(f, cfg.train); });
  root.object("rules", [&](Fields& f) { read_rules(f, cfg.rules); });
  root.object("verify", [&](Fields& f) { read_verify(f, cfg.verify); });
  root.object("eval", [&](Fields& f) { read_eval(f, cfg.eval); });
  root.get("out", cfg.out);
  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_run_config(ss.str());
  cfg.base_dir = path.parent_path();
  return cfg;
}

std::string to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["world"] = c.world;
  j["env"] = {{"step_len", c.env.step_len},
              {"turn_angle", c.env.turn_angle},
              {"max_range", c.env.max_range},
              {"robot_radius", c.env.robot_radius},
              {"goal_radius", c.env.goal_radius},
              {"max_steps", c.env.max_steps},
              {"reward_scale", c.env.reward_scale},
              {"step_penalty", c.env.step_penalty},
              {"min_start_goal_dist", c.env.min_start_goal_dist},
              {"max_placement_tries", c.env.max_placement_tries}};
  const auto& t = c.train;
  j["train"] = {{"mode", std::string(train::mode_name(t.mode))},
                {"shaping_penalty", t.shaping_penalty},
                {"policy_lr", t.policy_lr},
                {"critic_lr", t.critic_lr},
                {"clip_epsilon", t.clip_epsilon},
                {"gamma", t.gamma},
                {"gae_lambda", t.gae_lambda},
                {"epochs", t.epochs},
                {"minibatch_size", t.minibatch_size},
                {"horizon", t.horizon},
                {"entropy_coef", t.entropy_coef},
                {"max_grad_norm", t.max_grad_norm},
                {"gate_threshold", t.gate_threshold},
                {"gate_window", t.gate_window},
                {"lambda_norm", std::string(train::norm_mode_name(t.lambda_norm))},
                {"active_rules", t.active_rules},
                {"cost_thresholds", t.cost_thresholds},
                {"max_episodes", t.max_episodes},
                {"max_updates", t.max_updates},
                {"num_workers", t.num_workers},
                {"parallel_workers", t.parallel_workers},
                {"checkpoint_every", t.checkpoint_every},
                {"seeds", {{"env", t.seeds.env}, {"init", t.seeds.init}, {"sampling", t.seeds.sampling}}}};
  const auto& g = c.rules.guard;
  j["rules"] = {{"k", c.rules.consecutive_turns_k},
                {"guard",
                 {{"minimal_fwd_clearance", g.minimal_fwd_clearance},
                  {"minimal_clearance", g.minimal_clearance},
                  {"fwd_dir", g.fwd_dir},
                  {"fwd_dir_tolerance", g.fwd_dir_tolerance}}},
                {"advance_on_block", c.rules.program.advance_on_block},
                {"max_super_step", c.rules.program.max_super_step}};
  j["verify"] = {{"max_splits", c.verify.budget.max_splits},
                 {"max_trials", c.verify.budget.max_trials},
                 {"max_depth", c.verify.budget.max_depth},
                 {"seed", c.verify.budget.seed},
                 {"slack", c.verify.slack},
                 {"k", c.verify.k},
                 {"properties", c.verify.properties}};
  j["eval"] = {{"episodes", c.eval.episodes}, {"deterministic", c.eval.deterministic}, {"seed", c.eval.seed}};
  j["out"] = c.out;
  return j.dump(2) + "\n";
}

World resolve_world(const RunConfig& cfg) {
  static const std::set<std::string> builtins{"empty", "four-block", "corridor"};
  if (builtins.count(cfg.world)) return worlds::builtin(cfg.world);
  std::filesystem::path p = cfg.world;
  if (p.is_relative() && !cfg.base_dir.empty()) p = cfg.base_dir / p;
  if (!std::filesystem::exists(p)) throw IoError("world file not found: '" + p.string() + "'");
  try {
    return worlds::load(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("world: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.train.seeds.env = nn::derive_seed(seed, 1);
  cfg.train.seeds.init = nn::derive_seed(seed, 2);
  cfg.train.seeds.sampling = nn::derive_seed(seed, 3);
  cfg.eval.seed = nn::derive_seed(seed, 4);
  cfg.verify.budget.seed = nn::derive_seed(seed, 5);
}

}  // namespace scenav::app
