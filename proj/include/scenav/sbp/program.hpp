#pragma once

#include <any>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scenav::sbp {

/// A named occurrence. Identity is the name only; the payload rides along so
/// that data-dependent scenarios can inspect it.
struct Event {
  std::string name;
  std::optional<std::vector<double>> payload;

  Event() = default;
  explicit Event(std::string n) : name(std::move(n)) {}
  Event(std::string n, std::vector<double> data) : name(std::move(n)), payload(std::move(data)) {}

  friend bool operator==(const Event& a, const Event& b) { return a.name == b.name; }
};

/// Name of the event every scenario receives once, at registration.
inline constexpr const char* kInitEvent = "__init__";

/// What a scenario publishes at a synchronization point. Vectors preserve
/// declaration order, which event selection uses for tie-breaking.
struct SyncDeclaration {
  std::vector<std::string> requested;
  std::vector<std::string> blocked;
  std::vector<std::string> waited_for;

  bool requests(const std::string& e) const;
  bool blocks(const std::string& e) const;
  bool waits_for(const std::string& e) const;
  /// Throws std::logic_error if an event is both requested and blocked.
  void validate(const std::string& scenario_id) const;
};

struct Transition {
  std::any state;
  SyncDeclaration declaration;
};

/// Immutable scenario description: an initial local state and a deterministic
/// transition function. Execution state lives in the owning SBProgram.
struct Scenario {
  using StepFn = std::function<Transition(const std::any& state, const Event& event)>;

  std::string id;
  std::any initial_state;
  StepFn step;
};

struct StepOutcome {
  /// Scenarios that blocked the delivered event before delivery, in registration order.
  std::vector<std::string> violated_rules;
  /// Internal events fired during the super-step, in firing order.
  std::vector<Event> triggered_internal;
};

struct ProgramOptions {
  /// Deliver an external event to its listeners even when some scenario blocked it.
  bool advance_on_block = true;
  /// Upper bound on internal events fired per super-step.
  std::size_t max_super_step = 1000;
};

/// Copyable: scenario descriptions are shared, local states are values.
class SBProgram {
 public:
  explicit SBProgram(std::set<std::string> external_events, ProgramOptions options = {});

  /// Puts the scenario at its initial synchronization point.
  /// Throws std::invalid_argument on a duplicate id.
  void register_scenario(const Scenario& scenario);

  /// An internal event requested by some scenario and blocked by none, or
  /// nothing. Ties break by registration index, then declaration order.
  std::optional<Event> select_internal_event() const;

  /// Delivers an agent-side event and runs the resulting super-step.
  StepOutcome deliver_external(const Event& event);

  /// Event name -> ids of scenarios currently blocking it (registration order).
  std::map<std::string, std::vector<std::string>> blocked_events() const;

  bool is_blocked(const std::string& event_name) const;

  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& scenario_id) const;
  std::vector<std::string> scenario_ids() const;
  const SyncDeclaration& declaration(const std::string& scenario_id) const;
  const std::set<std::string>& external_events() const { return external_; }
  const ProgramOptions& options() const { return options_; }

 private:
  struct Entry {
    std::shared_ptr<const Scenario> scenario;
    std::any state;
    SyncDeclaration declaration;
  };

  void fire(Entry& entry, const Event& event);
  bool listens(const Entry& entry, const std::string& name) const;

  std::set<std::string> external_;
  ProgramOptions options_;
  std::vector<Entry> entries_;
};

}  // namespace scenav::sbp
