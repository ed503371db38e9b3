#include "scenav/nav/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace scenav::nav {

namespace {

const std::vector<std::string> kAllActionEvents{events::kMoveForward, events::kTurnLeft,
                                                events::kTurnRight};

sbp::SyncDeclaration wait_all(std::vector<std::string> blocked) {
  sbp::SyncDeclaration d;
  d.waited_for = kAllActionEvents;
  d.blocked = std::move(blocked);
  return d;
}

bool is_action_event(const std::string& name) {
  return name == events::kMoveForward || name == events::kTurnLeft || name == events::kTurnRight;
}

// Rule 2 local state.
struct TurnRun {
  std::optional<std::string> turn;
  int length = 0;
};

}  // namespace

void ClearPathGuardConfig::validate() const {
  if (!(minimal_fwd_clearance > 0.0) || !(minimal_clearance > 0.0)) {
    throw std::invalid_argument("guard clearances must be positive");
  }
  if (!(fwd_dir_tolerance > 0.0) || !(fwd_dir_tolerance < std::numbers::pi)) {
    throw std::invalid_argument("fwd_dir_tolerance must lie in (0, pi)");
  }
}

bool ClearPathGuardConfig::holds(const Observation& s) const {
  return s.lidar[kFrontRay] > minimal_fwd_clearance && s.lidar[kFrontRay - 1] > minimal_clearance &&
         s.lidar[kFrontRay + 1] > minimal_clearance &&
         std::abs(fwd_dir - s.bearing) < fwd_dir_tolerance;
}

sbp::Scenario make_avoid_back_and_forth() {
  // State: the turn event that must not be followed by its opposite, or "".
  sbp::Scenario s;
  s.id = kBackAndForthId;
  s.initial_state = std::string();
  s.step = [](const std::any& state, const sbp::Event& ev) {
    auto last = std::any_cast<std::string>(state);
    if (ev.name == events::kTurnLeft || ev.name == events::kTurnRight) {
      last = ev.name;
    } else if (ev.name == events::kMoveForward) {
      last.clear();
    }
    std::vector<std::string> blocked;
    if (last == events::kTurnLeft) blocked.emplace_back(events::kTurnRight);
    if (last == events::kTurnRight) blocked.emplace_back(events::kTurnLeft);
    return sbp::Transition{last, wait_all(std::move(blocked))};
  };
  return s;
}

sbp::Scenario make_avoid_k_consecutive_turns(int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  sbp::Scenario s;
  s.id = kConsecutiveTurnsId;
  s.initial_state = TurnRun{};
  s.step = [k](const std::any& state, const sbp::Event& ev) {
    auto run = std::any_cast<TurnRun>(state);
    if (ev.name == events::kMoveForward) {
      run = TurnRun{};
    } else if (ev.name == events::kTurnLeft || ev.name == events::kTurnRight) {
      if (run.turn == ev.name) {
        run.length = std::min(run.length + 1, k);
      } else {
        run = TurnRun{ev.name, 1};
      }
    }
    std::vector<std::string> blocked;
    if (run.turn && run.length >= k) blocked.push_back(*run.turn);
    return sbp::Transition{run, wait_all(std::move(blocked))};
  };
  return s;
}

sbp::Scenario make_avoid_turning_when_clear(const ClearPathGuardConfig& cfg) {
  cfg.validate();
  sbp::Scenario s;
  s.id = kTurningWhenClearId;
  s.initial_state = false;
  s.step = [cfg](const std::any&, const sbp::Event& ev) {
    bool clear = false;
    if (is_action_event(ev.name)) {
      if (!ev.payload || ev.payload->size() != kObsDim) {
        throw std::runtime_error(std::string(kTurningWhenClearId) + ": event '" + ev.name +
                                 "' needs a " + std::to_string(kObsDim) + "-value observation payload");
      }
      clear = cfg.holds(Observation::unflatten(*ev.payload));
    }
    std::vector<std::string> blocked;
    if (clear) blocked = {events::kTurnLeft, events::kTurnRight};
    return sbp::Transition{clear, wait_all(std::move(blocked))};
  };
  return s;
}

sbp::Event action_to_event(NavAction a, const Observation& raw) {
  return sbp::Event(std::string(event_name(a)), raw.flatten());
}

std::set<std::string> action_event_names() {
  return {kAllActionEvents.begin(), kAllActionEvents.end()};
}

std::string rule_id(int rule) {
  switch (rule) {
    case 1: return kBackAndForthId;
    case 2: return kConsecutiveTurnsId;
    case 3: return kTurningWhenClearId;
    default: throw std::invalid_argument("unknown rule " + std::to_string(rule));
  }
}

int rule_number(const std::string& id) {
  for (int r = 1; r <= 3; ++r) {
    if (rule_id(r) == id) return r;
  }
  throw std::invalid_argument("unknown rule id '" + id + "'");
}

sbp::SBProgram make_rule_program(const std::vector<int>& rules, const RuleSetConfig& cfg) {
  sbp::SBProgram program(action_event_names(), cfg.program);
  std::vector<int> sorted = rules;
  std::sort(sorted.begin(), sorted.end());
  for (int r : sorted) {
    switch (r) {
      case 1: program.register_scenario(make_avoid_back_and_forth()); break;
      case 2: program.register_scenario(make_avoid_k_consecutive_turns(cfg.consecutive_turns_k)); break;
      case 3: program.register_scenario(make_avoid_turning_when_clear(cfg.guard)); break;
      default: throw std::invalid_argument("unknown rule " + std::to_string(r));
    }
  }
  return program;
}

}  // namespace scenav::nav
