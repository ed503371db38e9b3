#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenav/env/nav_env.hpp"
#include "scenav/env/world.hpp"
#include "scenav/nav/scenarios.hpp"
#include "scenav/train/config.hpp"
#include "scenav/verify/verifier.hpp"

namespace scenav::app {

inline constexpr int kSchemaVersion = 1;

/// Bad or inconsistent configuration; the message starts with the field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable files and failed writes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyConfig {
  verify::Budget budget;
  double slack = 0.05;
  int k = 7;
  std::vector<std::string> properties{"turning-when-clear", "back-and-forth", "k-turns"};
};

struct EvalConfig {
  int episodes = 200;
  bool deterministic = true;
  std::uint64_t seed = 1000;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  /// Builtin world name, or a world file path (relative to the config file).
  std::string world = "four-block";
  EnvConfig env;
  train::TrainConfig train;
  nav::RuleSetConfig rules;
  VerifyConfig verify;
  EvalConfig eval;
  std::string out = "runs/default";

  /// Directory relative paths resolve against; empty for the working directory.
  std::filesystem::path base_dir;

  /// Throws ConfigError.
  void validate() const;
};

/// JSON text. Unknown keys and type mismatches are ConfigErrors naming the
/// field path (e.g. "train.policy_lr").
RunConfig parse_run_config(const std::string& text);
/// Throws IoError when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);
std::string to_json(const RunConfig& cfg);

/// Throws IoError naming the path when a world file is missing.
World resolve_world(const RunConfig& cfg);

/// Replaces the three named seeds with streams derived from one value.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

}  // namespace scenav::app
