#include "scenav/nav/action.hpp"

#include <stdexcept>
#include <string>

namespace scenav {

NavAction action_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kNumActions)) {
    throw std::out_of_range("action index " + std::to_string(index) + " out of range");
  }
  return static_cast<NavAction>(index);
}

std::string_view action_name(NavAction a) {
  switch (a) {
    case NavAction::Forward: return "Forward";
    case NavAction::Left: return "Left";
    case NavAction::Right: return "Right";
  }
  return "?";
}

NavAction parse_action(std::string_view name) {
  for (NavAction a : kAllActions) {
    if (action_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown action '" + std::string(name) + "'");
}

std::string_view event_name(NavAction a) {
  switch (a) {
    case NavAction::Forward: return events::kMoveForward;
    case NavAction::Left: return events::kTurnLeft;
    case NavAction::Right: return events::kTurnRight;
  }
  return "?";
}

NavAction action_for_event(std::string_view name) {
  for (NavAction a : kAllActions) {
    if (event_name(a) == name) return a;
  }
  throw std::invalid_argument("'" + std::string(name) + "' is not an action event");
}

}  // namespace scenav
