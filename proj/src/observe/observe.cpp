#include "flowline/observe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace flowline {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StateDescriptor make_state(std::string owner, std::string name, StateKind kind, ObjectKind object,
                           std::uint32_t index) {
    StateDescriptor d;
    d.owner = std::move(owner);
    d.name = std::move(name);
    d.kind = kind;
    d.object = object;
    d.object_index = index;
    if (kind == StateKind::count) d.upper = kInf;
    return d;
}

StateDescriptor discrete(std::string owner, std::string name, std::vector<std::string> labels, ObjectKind object,
                         std::uint32_t index) {
    auto d = make_state(std::move(owner), std::move(name), StateKind::discrete, object, index);
    d.upper = labels.empty() ? 0.0 : static_cast<double>(labels.size() - 1);
    d.labels = std::move(labels);
    return d;
}

StateDescriptor numeric(std::string owner, std::string name, double lower, double upper, ObjectKind object,
                        std::uint32_t index) {
    auto d = make_state(std::move(owner), std::move(name), StateKind::numeric, object, index);
    d.lower = lower;
    d.upper = upper;
    return d;
}

double value_of(const Line& line, const StateDescriptor& d, bool& valid) {
    valid = true;
    switch (d.object) {
        case ObjectKind::buffer:
            return line.buffers()[d.object_index].fill();
        case ObjectKind::worker: {
            const Worker& w = line.workers()[d.object_index];
            const auto& stations = line.pools()[w.pool].stations;
            return static_cast<double>(std::find(stations.begin(), stations.end(), w.assigned) - stations.begin());
        }
        case ObjectKind::station:
            break;
    }
    const Station& st = line.stations()[d.object_index];
    if (d.name == "mode") return static_cast<double>(static_cast<int>(st.mode));
    if (d.name == "processing_time") {
        valid = st.processing_time_valid;
        return st.last_processing_time;
    }
    if (d.name == "n_ok") return static_cast<double>(st.n_ok);
    if (d.name == "n_nok") return static_cast<double>(st.n_nok);
    if (d.name == "n_workers") return st.workers_assigned;
    if (d.name == "waiting_time") return st.waiting_time;
    if (d.name == "index_buffer_in") return static_cast<double>(st.in_index);
    if (d.name == "index_buffer_out") return static_cast<double>(st.out_index);
    if (d.name == "on") return st.on ? 1.0 : 0.0;
    throw std::logic_error("unhandled state " + d.full_name());
}

}  // namespace

std::string_view to_string(StateKind kind) {
    switch (kind) {
        case StateKind::discrete: return "discrete";
        case StateKind::count: return "count";
        case StateKind::numeric: return "numeric";
    }
    return "unknown";
}

std::string_view to_string(ActionErrorKind kind) {
    switch (kind) {
        case ActionErrorKind::unknown_object: return "unknown object";
        case ActionErrorKind::unknown_state: return "unknown state";
        case ActionErrorKind::not_actionable: return "state is not actionable";
        case ActionErrorKind::out_of_range: return "value out of range";
    }
    return "unknown";
}

static std::string action_message(ActionErrorKind kind, const std::string& object, const std::string& state,
                                  double value) {
    std::ostringstream msg;
    msg << to_string(kind) << ": " << object;
    if (!state.empty()) msg << "." << state;
    msg << " = " << value;
    return msg.str();
}

ActionError::ActionError(ActionErrorKind kind, std::string object, std::string state, double value)
    : std::invalid_argument(action_message(kind, object, state, value)),
      kind_(kind),
      object_(std::move(object)),
      state_(std::move(state)),
      value_(value) {}

const StateDescriptor* SpaceDescriptors::find(std::string_view owner, std::string_view name) const {
    for (const auto& d : states) {
        if (d.owner == owner && d.name == name) return &d;
    }
    return nullptr;
}

bool SpaceDescriptors::has_owner(std::string_view owner) const {
    return std::any_of(states.begin(), states.end(), [&](const StateDescriptor& d) { return d.owner == owner; });
}

SpaceDescriptors space_descriptors(const Line& line, const ObservationMask& mask) {
    SpaceDescriptors out;
    auto flush = [&](std::vector<StateDescriptor>& group) {
        std::sort(group.begin(), group.end(),
                  [](const StateDescriptor& a, const StateDescriptor& b) { return a.name < b.name; });
        for (auto& d : group) out.states.push_back(std::move(d));
        group.clear();
    };

    std::vector<StateDescriptor> group;
    const auto& buffers = line.buffers();
    for (const auto& st : line.stations()) {
        const auto& name = st.spec.name;
        const auto idx = st.index;
        const auto kind = st.spec.kind;
        group.push_back(discrete(name, "mode", {"working", "failing", "waiting"}, ObjectKind::station, idx));
        auto pt = numeric(name, "processing_time", 0.0, kInf, ObjectKind::station, idx);
        pt.lagged = true;
        group.push_back(pt);
        if (kind != StationKind::switch_) {
            group.push_back(make_state(name, "n_ok", StateKind::count, ObjectKind::station, idx));
        }
        if (kind == StationKind::assembly) {
            group.push_back(make_state(name, "n_nok", StateKind::count, ObjectKind::station, idx));
        }
        if (st.pool) group.push_back(make_state(name, "n_workers", StateKind::count, ObjectKind::station, idx));
        if (kind == StationKind::source) {
            auto w = numeric(name, "waiting_time", 0.0, st.spec.waiting_time_max, ObjectKind::station, idx);
            w.actionable = st.spec.actionable_waiting_time;
            group.push_back(w);
        }
        if (kind == StationKind::switch_) {
            std::vector<std::string> in_labels;
            std::vector<std::string> out_labels;
            for (auto b : st.inputs) in_labels.push_back(buffers[b].name);
            for (auto b : st.outputs) out_labels.push_back(buffers[b].name);
            auto in = discrete(name, "index_buffer_in", in_labels, ObjectKind::station, idx);
            auto out_state = discrete(name, "index_buffer_out", out_labels, ObjectKind::station, idx);
            in.actionable = true;
            out_state.actionable = true;
            group.push_back(in);
            group.push_back(out_state);
        }
        if (st.spec.actionable_on_off) {
            auto on = discrete(name, "on", {"off", "on"}, ObjectKind::station, idx);
            on.actionable = true;
            group.push_back(on);
        }
        flush(group);
    }
    for (std::uint32_t i = 0; i < buffers.size(); ++i) {
        group.push_back(numeric(buffers[i].name, "fill", 0.0, 1.0, ObjectKind::buffer, i));
        flush(group);
    }
    const auto& stations = line.stations();
    for (std::uint32_t i = 0; i < line.workers().size(); ++i) {
        const Worker& w = line.workers()[i];
        std::vector<std::string> labels;
        for (auto s : line.pools()[w.pool].stations) labels.push_back(stations[s].spec.name);
        auto d = discrete(w.name, "station", labels, ObjectKind::worker, i);
        d.actionable = true;
        group.push_back(d);
        flush(group);
    }

    for (auto& d : out.states) {
        d.observable = mask.count(d.full_name()) == 0;
        if (d.observable) out.observation.push_back(d);
        if (d.actionable) out.action.push_back(d);
    }
    return out;
}

std::optional<double> Observation::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return values[i];
    }
    return std::nullopt;
}

double Observation::at(std::string_view name) const {
    auto v = find(name);
    if (!v) throw std::out_of_range("observation has no entry '" + std::string(name) + "'");
    return *v;
}

Observation snapshot(const Line& line, const SpaceDescriptors& spaces) {
    Observation obs;
    obs.timestamp = line.now();
    obs.values.reserve(spaces.observation.size());
    obs.names.reserve(spaces.observation.size());
    obs.valid.reserve(spaces.observation.size());
    for (const auto& d : spaces.observation) {
        bool valid = true;
        obs.values.push_back(value_of(line, d, valid));
        obs.names.push_back(d.full_name());
        obs.valid.push_back(valid);
    }
    return obs;
}

double current_value(const Line& line, const StateDescriptor& state) {
    bool valid = true;
    return value_of(line, state, valid);
}

void validate_command(const SpaceDescriptors& spaces, const ActionCommand& cmd) {
    for (const auto& [object, states] : cmd) {
        if (!spaces.has_owner(object)) {
            const double v = states.empty() ? 0.0 : states.begin()->second;
            const std::string s = states.empty() ? std::string() : states.begin()->first;
            throw ActionError(ActionErrorKind::unknown_object, object, s, v);
        }
        for (const auto& [state, value] : states) {
            const StateDescriptor* d = spaces.find(object, state);
            if (d == nullptr) throw ActionError(ActionErrorKind::unknown_state, object, state, value);
            if (!d->actionable) throw ActionError(ActionErrorKind::not_actionable, object, state, value);
            bool ok = std::isfinite(value) && value >= d->lower && value <= d->upper;
            if (d->kind == StateKind::discrete) ok = ok && !d->labels.empty() && value == std::floor(value);
            if (!ok) throw ActionError(ActionErrorKind::out_of_range, object, state, value);
        }
    }
}

void apply(Line& line, const SpaceDescriptors& spaces, const ActionCommand& cmd) {
    validate_command(spaces, cmd);
    for (const auto& [object, states] : cmd) {
        for (const auto& [state, value] : states) {
            const StateDescriptor& d = *spaces.find(object, state);
            const auto idx = d.object_index;
            if (d.object == ObjectKind::worker) {
                const Worker& w = line.workers()[idx];
                line.reassign_worker(idx, line.pools()[w.pool].stations[static_cast<std::size_t>(value)]);
            } else if (d.name == "waiting_time") {
                line.set_waiting_time(idx, value);
            } else if (d.name == "index_buffer_in") {
                line.set_in_index(idx, static_cast<std::size_t>(value));
            } else if (d.name == "index_buffer_out") {
                line.set_out_index(idx, static_cast<std::size_t>(value));
            } else if (d.name == "on") {
                line.set_on(idx, value != 0.0);
            }
        }
    }
}

}  // namespace flowline
