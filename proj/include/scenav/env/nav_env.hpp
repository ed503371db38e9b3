#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

#include "scenav/env/observation.hpp"
#include "scenav/env/world.hpp"
#include "scenav/nav/action.hpp"

namespace scenav {

struct EnvConfig {
  double step_len = 0.15;
  double turn_angle = 0.5235987755982988;  // 30 deg
  double max_range = 3.5;
  double robot_radius = 0.1;
  double goal_radius = 0.2;
  int max_steps = 500;
  double reward_scale = 3.0;
  double step_penalty = 0.001;
  double min_start_goal_dist = 1.5;
  int max_placement_tries = 10000;

  void validate() const;
};

enum class Terminal { None, ReachedTarget, Collision, Timeout };

std::string_view terminal_name(Terminal t);
Terminal parse_terminal(std::string_view name);

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // (-pi, pi], counter-clockwise from +x
  double target_x = 0.0;
  double target_y = 0.0;
  int steps_taken = 0;
  Terminal status = Terminal::None;

  geom::Vec2 position() const { return {x, y}; }
  geom::Vec2 target() const { return {target_x, target_y}; }
  double target_distance() const;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  Terminal terminal = Terminal::None;
};

/// Ray offsets relative to the heading, index 0 first.
std::array<double, kNumRays> lidar_offsets();

/// Random start and target in free space; deterministic in seed.
/// Throws std::runtime_error when placement keeps failing.
std::pair<RobotState, Observation> reset(const World& world, const EnvConfig& cfg, std::uint64_t seed);

std::array<double, kNumRays> raycast_lidar(const World& world, const EnvConfig& cfg,
                                           const RobotState& pose);

Observation observe(const World& world, const EnvConfig& cfg, const RobotState& pose);

/// Advances state in place. Throws std::logic_error on a finished episode.
StepResult step(const World& world, const EnvConfig& cfg, RobotState& state, NavAction action);

/// True iff moving the robot disc from `from` along `heading` by `length` hits
/// a wall or obstacle.
bool sweep_collides(const World& world, const EnvConfig& cfg, geom::Vec2 from, double heading,
                    double length);

/// Fraction of ReachedTarget outcomes. Throws std::invalid_argument on empty input.
double success_rate(std::span<const Terminal> outcomes);

/// Environment instance owning a world, a pose and the stream of episode seeds.
class NavEnv {
 public:
  NavEnv(World world, EnvConfig cfg, std::uint64_t seed);

  Observation reset();
  Observation reset(std::uint64_t episode_seed);
  /// Scripted start; the state is validated against the world.
  Observation reset_to(const RobotState& state);
  StepResult step(NavAction action);

  const World& world() const { return world_; }
  const EnvConfig& config() const { return cfg_; }
  const RobotState& state() const { return state_; }
  ObservationScale scale() const;

 private:
  World world_;
  EnvConfig cfg_;
  RobotState state_;
  std::mt19937_64 seeds_;
};

}  // namespace scenav
