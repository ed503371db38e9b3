#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenav/env/nav_env.hpp"
#include "scenav/env/observation.hpp"
#include "scenav/nav/action.hpp"
#include "scenav/nav/scenarios.hpp"
#include "scenav/verify/box.hpp"
#include "scenav/verify/predicate.hpp"

namespace scenav::verify {

/// The normalized observation hypercube: lidar and distance in [0,1], bearing in [-1,1].
Box observation_domain();

/// Interval over-approximation of one environment step in normalized space.
/// Turning rotates the lidar fan by one sector (the newly exposed ray gets
/// [0,1]) and shifts the bearing; the result is widened by the slack and
/// clipped to the domain.
struct TransitionModel {
  double bearing_shift = 1.0 / 6.0;  // turn angle / pi
  Eigen::VectorXd slack = Eigen::VectorXd::Constant(kObsDim, 0.05);

  Box apply(NavAction a, const Box& box) const;
  /// True iff next lies in apply(a, {current}).
  bool admits(NavAction a, const Eigen::VectorXd& current, const Eigen::VectorXd& next) const;
};

/// One start region and the chain of argmax actions leading to the final check.
struct QueryCase {
  std::string label;
  Box start;
  std::vector<NavAction> prefix;
  OutputPredicate desired;
  OutputPredicate negated;
};

struct PropertyQuery {
  std::string name;
  std::vector<QueryCase> cases;
  std::optional<TransitionModel> transition;

  /// Network invocations per case (the same for every case).
  int steps() const;
  /// Throws std::invalid_argument on an empty query, mismatched case lengths,
  /// or a multi-step query without a transition map.
  void validate(int input_dim) const;
};

PropertyQuery make_query(std::string name, Box start, OutputPredicate desired);

/// Uniform slack in every dimension. Throws std::invalid_argument if negative.
TransitionModel make_transition(const EnvConfig& env, double slack);

PropertyQuery property_turning_when_clear(const nav::ClearPathGuardConfig& cfg, const ObservationScale& scale);
PropertyQuery property_back_and_forth(const TransitionModel& t);
/// Throws std::invalid_argument for k < 2.
PropertyQuery property_k_turns(int k, const TransitionModel& t);

inline constexpr const char* kTurningWhenClear = "turning-when-clear";
inline constexpr const char* kBackAndForth = "back-and-forth";
inline constexpr const char* kKTurns = "k-turns";

}  // namespace scenav::verify
