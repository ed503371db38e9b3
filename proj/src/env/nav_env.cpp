#include "scenav/env/nav_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scenav {

using geom::Vec2;

void EnvConfig::validate() const {
  if (!(step_len > 0.0) || !(turn_angle > 0.0) || !(max_range > 0.0) || !(robot_radius > 0.0) ||
      !(goal_radius > 0.0) || max_steps < 1 || max_placement_tries < 1 || min_start_goal_dist < 0.0) {
    throw std::invalid_argument("invalid environment configuration");
  }
}

std::string_view terminal_name(Terminal t) {
  switch (t) {
    case Terminal::None: return "None";
    case Terminal::ReachedTarget: return "ReachedTarget";
    case Terminal::Collision: return "Collision";
    case Terminal::Timeout: return "Timeout";
  }
  return "?";
}

Terminal parse_terminal(std::string_view name) {
  for (Terminal t : {Terminal::None, Terminal::ReachedTarget, Terminal::Collision, Terminal::Timeout}) {
    if (terminal_name(t) == name) return t;
  }
  throw std::invalid_argument("unknown terminal '" + std::string(name) + "'");
}

double RobotState::target_distance() const { return geom::norm(target() - position()); }

std::array<double, kNumRays> lidar_offsets() {
  std::array<double, kNumRays> off{};
  for (std::size_t i = 0; i < kNumRays; ++i) {
    off[i] = (static_cast<double>(i) - static_cast<double>(kFrontRay)) * std::numbers::pi / 6.0;
  }
  return off;
}

std::pair<RobotState, Observation> reset(const World& world, const EnvConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(world.bounds.min.x, world.bounds.max.x);
  std::uniform_real_distribution<double> uy(world.bounds.min.y, world.bounds.max.y);
  std::uniform_real_distribution<double> uh(-std::numbers::pi, std::numbers::pi);

  auto sample_free = [&]() -> Vec2 {
    for (int i = 0; i < cfg.max_placement_tries; ++i) {
      Vec2 p{ux(rng), uy(rng)};
      if (world.clearance(p) >= cfg.robot_radius) return p;
    }
    throw std::runtime_error("could not place robot in world '" + world.name + "'");
  };

  for (int attempt = 0; attempt < cfg.max_placement_tries; ++attempt) {
    const Vec2 start = sample_free();
    const Vec2 goal = sample_free();
    if (geom::norm(goal - start) < cfg.min_start_goal_dist) continue;
    RobotState s;
    s.x = start.x;
    s.y = start.y;
    s.heading = geom::wrap_angle(uh(rng));
    s.target_x = goal.x;
    s.target_y = goal.y;
    return {s, observe(world, cfg, s)};
  }
  throw std::runtime_error("could not place start/target pair in world '" + world.name + "'");
}

std::array<double, kNumRays> raycast_lidar(const World& world, const EnvConfig& cfg,
                                           const RobotState& pose) {
  const auto offsets = lidar_offsets();
  const Vec2 origin = pose.position();
  const auto& b = world.bounds;
  const Vec2 corners[4] = {b.min, {b.max.x, b.min.y}, b.max, {b.min.x, b.max.y}};

  std::array<double, kNumRays> out{};
  for (std::size_t i = 0; i < kNumRays; ++i) {
    const Vec2 dir = geom::unit(pose.heading + offsets[i]);
    double best = cfg.max_range;
    auto consider = [&](std::optional<double> t) {
      if (t && *t < best) best = *t;
    };
    for (int k = 0; k < 4; ++k) consider(geom::ray_segment(origin, dir, corners[k], corners[(k + 1) % 4]));
    for (const auto& o : world.obstacles) {
      if (const auto* r = std::get_if<geom::Rect>(&o)) {
        consider(geom::ray_rect(origin, dir, *r));
      } else {
        consider(geom::ray_circle(origin, dir, std::get<geom::Circle>(o)));
      }
    }
    out[i] = best;
  }
  return out;
}

Observation observe(const World& world, const EnvConfig& cfg, const RobotState& pose) {
  Observation obs;
  obs.lidar = raycast_lidar(world, cfg, pose);
  const Vec2 to_target = pose.target() - pose.position();
  obs.bearing = geom::wrap_angle(pose.heading - std::atan2(to_target.y, to_target.x));
  obs.distance = geom::norm(to_target);
  return obs;
}

bool sweep_collides(const World& world, const EnvConfig& cfg, Vec2 from, double heading, double length) {
  const Vec2 to = from + length * geom::unit(heading);
  const double r = cfg.robot_radius;
  const auto& b = world.bounds;
  for (const Vec2 p : {from, to}) {
    if (p.x - b.min.x < r || b.max.x - p.x < r || p.y - b.min.y < r || b.max.y - p.y < r) return true;
  }
  for (const auto& o : world.obstacles) {
    if (const auto* rect = std::get_if<geom::Rect>(&o)) {
      if (geom::segment_rect_distance(from, to, *rect) < r) return true;
    } else {
      const auto& c = std::get<geom::Circle>(o);
      if (geom::segment_point_distance(from, to, c.center) < r + c.radius) return true;
    }
  }
  return false;
}

StepResult step(const World& world, const EnvConfig& cfg, RobotState& state, NavAction action) {
  if (state.status != Terminal::None) {
    throw std::logic_error("step called on a finished episode (" +
                           std::string(terminal_name(state.status)) + ")");
  }
  const double dist_before = state.target_distance();
  StepResult result;
  ++state.steps_taken;

  switch (action) {
    case NavAction::Left:
      state.heading = geom::wrap_angle(state.heading + cfg.turn_angle);
      break;
    case NavAction::Right:
      state.heading = geom::wrap_angle(state.heading - cfg.turn_angle);
      break;
    case NavAction::Forward:
      if (sweep_collides(world, cfg, state.position(), state.heading, cfg.step_len)) {
        state.status = Terminal::Collision;
      } else {
        const Vec2 p = state.position() + cfg.step_len * geom::unit(state.heading);
        state.x = p.x;
        state.y = p.y;
      }
      break;
  }

  const double dist_after = state.target_distance();
  if (state.status == Terminal::Collision) {
    result.reward = -1.0;
  } else if (dist_after <= cfg.goal_radius) {
    state.status = Terminal::ReachedTarget;
    result.reward = 1.0;
  } else {
    result.reward = (dist_before - dist_after) * cfg.reward_scale - cfg.step_penalty;
    if (state.steps_taken >= cfg.max_steps) state.status = Terminal::Timeout;
  }
  result.terminal = state.status;
  result.obs = observe(world, cfg, state);
  return result;
}

double success_rate(std::span<const Terminal> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("success_rate of an empty window");
  const auto hits = std::count(outcomes.begin(), outcomes.end(), Terminal::ReachedTarget);
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

NavEnv::NavEnv(World world, EnvConfig cfg, std::uint64_t seed)
    : world_(std::move(world)), cfg_(cfg), seeds_(seed) {
  cfg_.validate();
  world_.validate(cfg_.robot_radius);
  state_.status = Terminal::Timeout;  // must reset before stepping
}

Observation NavEnv::reset() { return reset(seeds_()); }

Observation NavEnv::reset(std::uint64_t episode_seed) {
  auto [state, obs] = scenav::reset(world_, cfg_, episode_seed);
  state_ = state;
  return obs;
}

Observation NavEnv::reset_to(const RobotState& state) {
  if (world_.clearance(state.position()) < cfg_.robot_radius) {
    throw std::invalid_argument("scripted start overlaps an obstacle");
  }
  state_ = state;
  state_.steps_taken = 0;
  state_.status = Terminal::None;
  return observe(world_, cfg_, state_);
}

StepResult NavEnv::step(NavAction action) { return scenav::step(world_, cfg_, state_, action); }

ObservationScale NavEnv::scale() const {
  return ObservationScale{cfg_.max_range, std::numbers::pi, world_.diagonal()};
}

}  // namespace scenav
