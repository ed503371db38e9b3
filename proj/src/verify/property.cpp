#include "scenav/verify/property.hpp"

#include <cmath>
#include <stdexcept>

namespace scenav::verify {

Box observation_domain() {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(kObsDim);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(kObsDim);
  lo[kBearingIndex] = -1.0;
  return Box(lo, hi);
}

namespace {

void shift_bearing(Box& b, double shift) {
  double lo = b.lower[kBearingIndex] + shift;
  double hi = b.upper[kBearingIndex] + shift;
  if (lo > 1.0) {
    lo -= 2.0;
    hi -= 2.0;
  } else if (hi < -1.0) {
    lo += 2.0;
    hi += 2.0;
  } else if (hi > 1.0 || lo < -1.0) {
    lo = -1.0;
    hi = 1.0;
  }
  b.lower[kBearingIndex] = lo;
  b.upper[kBearingIndex] = hi;
}

}  // namespace

Box TransitionModel::apply(NavAction a, const Box& in) const {
  if (in.dim() != static_cast<int>(kObsDim)) throw std::invalid_argument("transition expects observation boxes");
  Box out = in;
  const int n = static_cast<int>(kNumRays);
  if (a == NavAction::Left) {
    // Rotating left moves each sector one slot toward the right side.
    for (int j = 0; j + 1 < n; ++j) {
      out.lower[j] = in.lower[j + 1];
      out.upper[j] = in.upper[j + 1];
    }
    out.lower[n - 1] = 0.0;
    out.upper[n - 1] = 1.0;
    shift_bearing(out, bearing_shift);
  } else if (a == NavAction::Right) {
    for (int j = n - 1; j > 0; --j) {
      out.lower[j] = in.lower[j - 1];
      out.upper[j] = in.upper[j - 1];
    }
    out.lower[0] = 0.0;
    out.upper[0] = 1.0;
    shift_bearing(out, -bearing_shift);
  } else {
    // Moving forward can change every reading; only the domain is known.
    return observation_domain();
  }
  out.lower -= slack;
  out.upper += slack;
  return out.clamped_to(observation_domain());
}

bool TransitionModel::admits(NavAction a, const Eigen::VectorXd& cur, const Eigen::VectorXd& next) const {
  return apply(a, Box::point(cur)).contains(next);
}

int PropertyQuery::steps() const { return cases.empty() ? 0 : static_cast<int>(cases.front().prefix.size()) + 1; }

void PropertyQuery::validate(int input_dim) const {
  if (cases.empty()) throw std::invalid_argument("query '" + name + "' has no cases");
  for (const auto& c : cases) {
    if (static_cast<int>(c.prefix.size()) + 1 != steps()) {
      throw std::invalid_argument("query '" + name + "' mixes cases of different length");
    }
    if (c.start.dim() != input_dim) throw std::invalid_argument("query '" + name + "' box dimension mismatch");
  }
  if (steps() > 1 && !transition) throw std::invalid_argument("multi-step query '" + name + "' needs a transition map");
  if (steps() == 1 && transition) throw std::invalid_argument("single-step query '" + name + "' has a transition map");
}

PropertyQuery make_query(std::string name, Box start, OutputPredicate desired) {
  PropertyQuery q;
  q.name = std::move(name);
  q.cases.push_back({q.name, std::move(start), {}, desired, negate(desired)});
  return q;
}

TransitionModel make_transition(const EnvConfig& env, double slack) {
  if (!(slack >= 0.0)) throw std::invalid_argument("transition slack must be non-negative");
  TransitionModel t;
  t.bearing_shift = env.turn_angle / M_PI;
  t.slack = Eigen::VectorXd::Constant(kObsDim, slack);
  return t;
}

PropertyQuery property_turning_when_clear(const nav::ClearPathGuardConfig& cfg, const ObservationScale& scale) {
  // A zero tolerance is allowed here: it pins the bearing to fwd_dir.
  if (!(cfg.minimal_fwd_clearance > 0.0) || !(cfg.minimal_clearance > 0.0) || !(cfg.fwd_dir_tolerance >= 0.0)) {
    throw std::invalid_argument("clear-path guard needs positive clearances and a non-negative tolerance");
  }
  const double fwd = cfg.minimal_fwd_clearance / scale.max_range;
  const double side = cfg.minimal_clearance / scale.max_range;
  const double lo_b = (cfg.fwd_dir - cfg.fwd_dir_tolerance) / scale.bearing;
  const double hi_b = (cfg.fwd_dir + cfg.fwd_dir_tolerance) / scale.bearing;
  if (fwd > 1.0 || side > 1.0) throw std::invalid_argument("clearance threshold exceeds the lidar range");
  if (lo_b < -1.0 || hi_b > 1.0) throw std::invalid_argument("bearing window exceeds the normalized range");
  Box box = observation_domain();
  box.lower[kFrontRay] = fwd;
  box.lower[kFrontRay - 1] = side;
  box.lower[kFrontRay + 1] = side;
  box.lower[kBearingIndex] = lo_b;
  box.upper[kBearingIndex] = hi_b;
  return make_query(kTurningWhenClear, box, argmax_is(NavAction::Forward));
}

PropertyQuery property_back_and_forth(const TransitionModel& t) {
  if ((t.slack.array() < 0.0).any()) throw std::invalid_argument("transition slack must be non-negative");
  PropertyQuery q;
  q.name = kBackAndForth;
  q.transition = t;
  const auto add = [&](NavAction first, NavAction then) {
    const auto desired = argmax_is_not(then);
    q.cases.push_back({std::string(action_name(first)) + "-then-" + std::string(action_name(then)),
                       observation_domain(), {first}, desired, negate(desired)});
  };
  add(NavAction::Left, NavAction::Right);
  add(NavAction::Right, NavAction::Left);
  return q;
}

PropertyQuery property_k_turns(int k, const TransitionModel& t) {
  if (k < 2) throw std::invalid_argument("k-turns property needs k >= 2");
  PropertyQuery q;
  q.name = kKTurns;
  q.transition = t;
  for (NavAction a : {NavAction::Left, NavAction::Right}) {
    const auto desired = argmax_is_not(a);
    q.cases.push_back({std::to_string(k) + "x" + std::string(action_name(a)), observation_domain(),
                       std::vector<NavAction>(static_cast<std::size_t>(k - 1), a), desired, negate(desired)});
  }
  return q;
}

}  // namespace scenav::verify
