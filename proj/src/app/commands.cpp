#include "scenav/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "scenav/nn/checkpoint.hpp"
#include "scenav/nn/policy.hpp"
#include "scenav/train/ppo.hpp"

namespace scenav::app {

using nlohmann::json;

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kConfigError;
  } catch (const IoError&) {
    return kIoError;
  } catch (const nn::CheckpointError&) {
    return kIoError;
  } catch (const train::NumericalError&) {
    return kNumericalError;
  } catch (const std::invalid_argument&) {
    return kConfigError;
  } catch (...) {
    return kOtherError;
  }
}

EpisodeTrace run_episode(const nn::DenseNet& policy, NavEnv& env, const nav::RuleSetConfig& rules,
                         bool deterministic, std::mt19937_64& rng) {
  EpisodeTrace trace;
  trace.start = env.state();
  sbp::SBProgram program = nav::make_rule_program({1, 2, 3}, rules);
  const auto actor = train::sample_from(policy, deterministic);
  Observation raw = observe(env.world(), env.config(), env.state());
  for (int t = 0; env.state().status == Terminal::None; ++t) {
    const auto choice = actor(env.scale().normalize(raw), rng);
    const StepResult r = env.step(choice.action);
    const auto outcome = program.deliver_external(nav::action_to_event(choice.action, r.obs));
    TraceStep s;
    s.t = t;
    s.pose = env.state();
    s.action = choice.action;
    s.reward = r.reward;
    for (const auto& id : outcome.violated_rules) {
      const int rule = nav::rule_number(id);
      s.violated_rules.push_back(rule);
      ++trace.violations[static_cast<std::size_t>(rule - 1)];
    }
    s.obs = r.obs;
    s.terminal = r.terminal;
    trace.steps.push_back(std::move(s));
    raw = r.obs;
  }
  trace.outcome = env.state().status;
  return trace;
}

EvalSummary evaluate(const nn::DenseNet& policy, const World& world, const EnvConfig& env_cfg,
                     const nav::RuleSetConfig& rules, int episodes, bool deterministic, std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("eval.episodes: must be positive");
  NavEnv env(world, env_cfg, nn::derive_seed(seed, 0));
  std::mt19937_64 rng(nn::derive_seed(seed, 1));
  EvalSummary s;
  s.episodes = episodes;
  std::array<double, train::kNumRules> sum{}, sq{};
  double steps = 0.0;
  int success = 0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(nn::derive_seed(seed, 2 + static_cast<std::uint64_t>(e)));
    const auto trace = run_episode(policy, env, rules, deterministic, rng);
    success += trace.outcome == Terminal::ReachedTarget;
    steps += static_cast<double>(trace.steps.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k] += trace.violations[k];
      sq[k] += static_cast<double>(trace.violations[k]) * trace.violations[k];
    }
  }
  const double n = episodes;
  s.success_rate = success / n;
  s.mean_steps = steps / n;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    s.mean_violations[k] = sum[k] / n;
    s.std_violations[k] = std::sqrt(std::max(0.0, sq[k] / n - s.mean_violations[k] * s.mean_violations[k]));
  }
  return s;
}

void write_eval_summary(std::ostream& os, const EvalSummary& s) {
  os << std::fixed << std::setprecision(4);
  os << "episodes " << s.episodes << "\nsuccess_rate " << s.success_rate << "\nmean_steps " << s.mean_steps << '\n';
  for (std::size_t k = 0; k < s.mean_violations.size(); ++k) {
    os << "rule" << k + 1 << "_violations " << s.mean_violations[k] << " +- " << s.std_violations[k] << '\n';
  }
  os << std::defaultfloat;
}

namespace {

json pose_json(const RobotState& p) {
  return {{"x", p.x}, {"y", p.y}, {"heading", p.heading}, {"target_x", p.target_x}, {"target_y", p.target_y}};
}

}  // namespace

void write_trace(std::ostream& os, const EpisodeTrace& trace, std::uint64_t seed, const std::string& world) {
  os << json{{"type", "episode"}, {"seed", seed}, {"world", world}, {"start", pose_json(trace.start)}}.dump() << '\n';
  for (const auto& s : trace.steps) {
    os << json{{"type", "step"},
               {"t", s.t},
               {"pose", pose_json(s.pose)},
               {"action", std::string(action_name(s.action))},
               {"reward", s.reward},
               {"violated_rules", s.violated_rules},
               {"obs", s.obs.flatten()},
               {"terminal", std::string(terminal_name(s.terminal))}}
              .dump()
       << '\n';
  }
  os << json{{"type", "summary"},
             {"outcome", std::string(terminal_name(trace.outcome))},
             {"steps", trace.steps.size()},
             {"violations", trace.violations}}
            .dump()
     << '\n';
}

std::vector<std::pair<NavAction, Observation>> read_trace_actions(std::istream& in) {
  std::vector<std::pair<NavAction, Observation>> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.at("type") != "step") continue;
    log.emplace_back(parse_action(j.at("action").get<std::string>()),
                     Observation::unflatten(j.at("obs").get<std::vector<double>>()));
  }
  return log;
}

train::TrainResult run_training(const RunConfig& cfg, const std::filesystem::path& out) {
  const World world = resolve_world(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out / "checkpoints", ec);
  if (ec) throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());

  const auto write_file = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
    if (!f) throw IoError("failed writing '" + p.string() + "'");
  };
  write_file(out / "config.json", to_json(cfg));

  std::ofstream metrics(out / "metrics.jsonl");
  if (!metrics) throw IoError("cannot open '" + (out / "metrics.jsonl").string() + "'");
  train::TrainHooks hooks;
  hooks.on_episode = [&](const train::EpisodeMetrics& m) { metrics << train::to_json_line(m) << '\n'; };
  hooks.on_checkpoint = [&](int update, const nn::PolicyBundle& b) {
    std::ostringstream name;
    name << "update_" << std::setw(6) << std::setfill('0') << update << ".ckpt";
    nn::save_checkpoint(b, out / "checkpoints" / name.str());
  };
  auto result = train::train(cfg.train, {world, cfg.env, cfg.rules}, hooks);
  metrics.flush();
  if (!metrics) throw IoError("failed writing metrics");
  nn::save_checkpoint(result.bundle, out / "policy.ckpt");
  return result;
}

std::vector<verify::PropertyQuery> build_queries(const RunConfig& cfg) {
  std::vector<verify::PropertyQuery> out;
  const auto t = verify::make_transition(cfg.env, cfg.verify.slack);
  ObservationScale scale;
  scale.max_range = cfg.env.max_range;
  for (const auto& name : cfg.verify.properties) {
    if (name == verify::kTurningWhenClear) {
      out.push_back(verify::property_turning_when_clear(cfg.rules.guard, scale));
    } else if (name == verify::kBackAndForth) {
      out.push_back(verify::property_back_and_forth(t));
    } else if (name == verify::kKTurns) {
      out.push_back(verify::property_k_turns(cfg.verify.k, t));
    } else if (name == "toy-output-below-40") {
      out.push_back(verify::make_query(name, verify::Box(Eigen::Vector2d::Zero(), Eigen::Vector2d::Constant(10.0)),
                                       verify::output_below(1, 0, 40.0)));
    } else {
      throw ConfigError("verify.properties: unknown property '" + name + "'");
    }
  }
  return out;
}

std::vector<std::filesystem::path> expand_checkpoints(const std::vector<std::string>& args) {
  std::vector<std::filesystem::path> out;
  for (const auto& a : args) {
    const std::filesystem::path p = a;
    if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> found;
      for (const auto& e : std::filesystem::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".ckpt") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace scenav::app
