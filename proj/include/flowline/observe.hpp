#pragma once

// Named observation vectors and validated action commands over a Line.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowline/line.hpp"

namespace flowline {

enum class StateKind { discrete, count, numeric };

std::string_view to_string(StateKind kind);

enum class ObjectKind { station, buffer, worker };

struct StateDescriptor {
    std::string owner;
    std::string name;
    StateKind kind = StateKind::numeric;
    std::vector<std::string> labels;  // discrete only, label-encoded in this order
    double lower = 0.0;
    double upper = 0.0;  // numeric bounds; infinity when unbounded
    bool observable = true;
    bool actionable = false;
    bool lagged = false;  // carries a valid flag in observations

    ObjectKind object = ObjectKind::station;
    std::uint32_t object_index = 0;

    [[nodiscard]] std::string full_name() const { return owner + "." + name; }
};

/// Full names ("Owner.state") to hide from observations.
using ObservationMask = std::set<std::string>;

struct SpaceDescriptors {
    std::vector<StateDescriptor> states;       // every state, observable or not
    std::vector<StateDescriptor> observation;  // observable subset
    std::vector<StateDescriptor> action;       // actionable subset

    [[nodiscard]] const StateDescriptor* find(std::string_view owner, std::string_view name) const;
    [[nodiscard]] bool has_owner(std::string_view owner) const;
};

/// Ordering: stations in layout order, then buffers, then workers; states
/// sorted by name within an object.
SpaceDescriptors space_descriptors(const Line& line, const ObservationMask& mask = {});

struct Observation {
    std::vector<double> values;
    std::vector<std::string> names;
    std::vector<bool> valid;  // false for lagged states that have no value yet
    SimTime timestamp = 0.0;

    [[nodiscard]] std::optional<double> find(std::string_view name) const;
    /// Throws std::out_of_range for unknown or masked names.
    [[nodiscard]] double at(std::string_view name) const;
};

Observation snapshot(const Line& line, const SpaceDescriptors& spaces);

/// object -> state -> new value. Discrete values are label indices.
using ActionCommand = std::map<std::string, std::map<std::string, double>>;

enum class ActionErrorKind { unknown_object, unknown_state, not_actionable, out_of_range };

std::string_view to_string(ActionErrorKind kind);

class ActionError : public std::invalid_argument {
public:
    ActionError(ActionErrorKind kind, std::string object, std::string state, double value);

    [[nodiscard]] ActionErrorKind kind() const { return kind_; }
    [[nodiscard]] const std::string& object() const { return object_; }
    [[nodiscard]] const std::string& state() const { return state_; }
    [[nodiscard]] double value() const { return value_; }

private:
    ActionErrorKind kind_;
    std::string object_;
    std::string state_;
    double value_;
};

/// Throws ActionError for the first invalid entry; nothing is applied then.
void validate_command(const SpaceDescriptors& spaces, const ActionCommand& cmd);

/// Validates the whole command, then applies every entry.
void apply(Line& line, const SpaceDescriptors& spaces, const ActionCommand& cmd);

/// Current value of an actionable state, in command encoding.
double current_value(const Line& line, const StateDescriptor& state);

}  // namespace flowline
