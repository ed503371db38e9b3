#pragma once

#include <set>
#include <string>
#include <vector>

#include "scenav/env/observation.hpp"
#include "scenav/nav/action.hpp"
#include "scenav/sbp/program.hpp"

namespace scenav::nav {

inline constexpr const char* kBackAndForthId = "avoid-back-and-forth";
inline constexpr const char* kConsecutiveTurnsId = "avoid-k-consecutive-turns";
inline constexpr const char* kTurningWhenClearId = "avoid-turning-when-clear";

/// Guard constants for the turning-when-clear rule, in meters / radians.
/// Defaults follow a 0.15 m forward step: 2 steps ahead, 1 step to the sides,
/// and half of a 30 deg turn as the alignment window.
struct ClearPathGuardConfig {
  double minimal_fwd_clearance = 0.30;
  double minimal_clearance = 0.15;
  double fwd_dir = 0.0;
  double fwd_dir_tolerance = 0.2617993877991494;  // 15 deg

  /// Throws std::invalid_argument when a clearance is non-positive or the
  /// tolerance is outside (0, pi).
  void validate() const;
  /// True iff the path ahead is clear and the target is straight ahead.
  bool holds(const Observation& raw) const;
};

/// Rule 1. Left blocks Right and vice versa until the next Forward.
sbp::Scenario make_avoid_back_and_forth();

/// Rule 2. After k identical consecutive turns, that turn is blocked until
/// Forward or the opposite turn resets the run.
sbp::Scenario make_avoid_k_consecutive_turns(int k = 7);

/// Rule 3. Blocks both turns whenever the payload of the last delivered event
/// satisfies the clear-path guard. Payloads must be raw (unnormalized)
/// flattened observations.
sbp::Scenario make_avoid_turning_when_clear(const ClearPathGuardConfig& cfg);

sbp::Event action_to_event(NavAction a, const Observation& raw);

std::set<std::string> action_event_names();

/// Rule numbering used in configs and logs: 1, 2, 3.
std::string rule_id(int rule);
int rule_number(const std::string& id);

struct RuleSetConfig {
  int consecutive_turns_k = 7;
  ClearPathGuardConfig guard;
  sbp::ProgramOptions program;
};

/// Program with the requested rules registered in ascending rule order.
sbp::SBProgram make_rule_program(const std::vector<int>& rules, const RuleSetConfig& cfg);

}  // namespace scenav::nav
