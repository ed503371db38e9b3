#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace scenav {

/// Discrete action set; the integer values double as policy output indices.
enum class NavAction : int { Forward = 0, Left = 1, Right = 2 };

inline constexpr std::size_t kNumActions = 3;
inline constexpr std::array<NavAction, kNumActions> kAllActions{NavAction::Forward, NavAction::Left,
                                                                NavAction::Right};

namespace events {
inline constexpr const char* kMoveForward = "SBP_MoveForward";
inline constexpr const char* kTurnLeft = "SBP_TurnLeft";
inline constexpr const char* kTurnRight = "SBP_TurnRight";
}  // namespace events

constexpr int action_index(NavAction a) { return static_cast<int>(a); }
NavAction action_from_index(int index);

std::string_view action_name(NavAction a);
/// Parses "Forward" / "Left" / "Right" (as printed by action_name).
NavAction parse_action(std::string_view name);

std::string_view event_name(NavAction a);
/// Inverse of event_name; throws std::invalid_argument for other names.
NavAction action_for_event(std::string_view name);

}  // namespace scenav
