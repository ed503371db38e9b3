#include "scenav/sbp/program.hpp"

#include <algorithm>
#include <stdexcept>

namespace scenav::sbp {

namespace {

bool contains_name(const std::vector<std::string>& names, const std::string& e) {
  return std::find(names.begin(), names.end(), e) != names.end();
}

}  // namespace

bool SyncDeclaration::requests(const std::string& e) const { return contains_name(requested, e); }
bool SyncDeclaration::blocks(const std::string& e) const { return contains_name(blocked, e); }
bool SyncDeclaration::waits_for(const std::string& e) const { return contains_name(waited_for, e); }

void SyncDeclaration::validate(const std::string& scenario_id) const {
  for (const auto& e : requested) {
    if (blocks(e)) {
      throw std::logic_error("scenario '" + scenario_id + "' both requests and blocks '" + e + "'");
    }
  }
}

SBProgram::SBProgram(std::set<std::string> external_events, ProgramOptions options)
    : external_(std::move(external_events)), options_(options) {}

void SBProgram::register_scenario(const Scenario& scenario) {
  if (contains(scenario.id)) {
    throw std::invalid_argument("scenario '" + scenario.id + "' is already registered");
  }
  if (!scenario.step) {
    throw std::invalid_argument("scenario '" + scenario.id + "' has no transition function");
  }
  Entry entry{std::make_shared<const Scenario>(scenario), scenario.initial_state, {}};
  Transition init = entry.scenario->step(entry.state, Event(kInitEvent));
  init.declaration.validate(scenario.id);
  entry.state = std::move(init.state);
  entry.declaration = std::move(init.declaration);
  entries_.push_back(std::move(entry));
}

bool SBProgram::contains(const std::string& scenario_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.scenario->id == scenario_id; });
}

std::vector<std::string> SBProgram::scenario_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.scenario->id);
  return ids;
}

const SyncDeclaration& SBProgram::declaration(const std::string& scenario_id) const {
  for (const auto& e : entries_) {
    if (e.scenario->id == scenario_id) return e.declaration;
  }
  throw std::out_of_range("unknown scenario '" + scenario_id + "'");
}

bool SBProgram::is_blocked(const std::string& event_name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.declaration.blocks(event_name); });
}

std::optional<Event> SBProgram::select_internal_event() const {
  for (const auto& entry : entries_) {
    for (const auto& name : entry.declaration.requested) {
      if (external_.count(name) != 0) continue;
      if (!is_blocked(name)) return Event(name);
    }
  }
  return std::nullopt;
}

bool SBProgram::listens(const Entry& entry, const std::string& name) const {
  return entry.declaration.requests(name) || entry.declaration.waits_for(name);
}

void SBProgram::fire(Entry& entry, const Event& event) {
  Transition next = entry.scenario->step(entry.state, event);
  next.declaration.validate(entry.scenario->id);
  entry.state = std::move(next.state);
  entry.declaration = std::move(next.declaration);
}

StepOutcome SBProgram::deliver_external(const Event& event) {
  if (external_.count(event.name) == 0) {
    throw std::invalid_argument("'" + event.name + "' is not an external event");
  }

  StepOutcome outcome;
  for (const auto& entry : entries_) {
    if (entry.declaration.blocks(event.name)) outcome.violated_rules.push_back(entry.scenario->id);
  }

  if (outcome.violated_rules.empty() || options_.advance_on_block) {
    // Listener set is fixed before anyone advances.
    std::vector<std::size_t> listeners;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (listens(entries_[i], event.name)) listeners.push_back(i);
    }
    for (std::size_t i : listeners) fire(entries_[i], event);
  }

  while (auto internal = select_internal_event()) {
    if (outcome.triggered_internal.size() >= options_.max_super_step) {
      std::string ids;
      for (const auto& e : entries_) ids += (ids.empty() ? "" : ", ") + e.scenario->id;
      throw std::runtime_error("super-step exceeded " + std::to_string(options_.max_super_step) +
                               " internal events; scenarios: [" + ids + "]");
    }
    std::vector<std::size_t> listeners;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (listens(entries_[i], internal->name)) listeners.push_back(i);
    }
    for (std::size_t i : listeners) fire(entries_[i], *internal);
    outcome.triggered_internal.push_back(std::move(*internal));
  }
  return outcome;
}

std::map<std::string, std::vector<std::string>> SBProgram::blocked_events() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& entry : entries_) {
    for (const auto& name : entry.declaration.blocked) {
      auto& ids = out[name];
      if (!contains_name(ids, entry.scenario->id)) ids.push_back(entry.scenario->id);
    }
  }
  return out;
}

}  // namespace scenav::sbp
