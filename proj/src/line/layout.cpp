#include "flowline/layout.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace flowline {

using nlohmann::json;

std::string_view to_string(StationKind kind) {
    switch (kind) {
        case StationKind::source: return "source";
        case StationKind::process: return "process";
        case StationKind::assembly: return "assembly";
        case StationKind::sink: return "sink";
        case StationKind::switch_: return "switch";
        case StationKind::magazine: return "magazine";
    }
    return "unknown";
}

StationKind station_kind_from_string(std::string_view name) {
    for (auto kind : {StationKind::source, StationKind::process, StationKind::assembly, StationKind::sink,
                      StationKind::switch_, StationKind::magazine}) {
        if (to_string(kind) == name) return kind;
    }
    throw LayoutError("unknown station type '" + std::string(name) + "'");
}

std::string default_buffer_name(std::string_view from, std::string_view to) {
    return "Buffer_" + std::string(from) + "_to_" + std::string(to);
}

std::vector<std::string> initial_assignment(const PoolSpec& pool) {
    if (!pool.initial_assignment.empty()) return pool.initial_assignment;
    std::vector<std::string> out;
    if (pool.stations.empty()) return out;
    for (int w = 0; w < pool.workers; ++w) out.push_back(pool.stations[w % pool.stations.size()]);
    return out;
}

namespace {

struct Degree {
    int main_in = 0;
    int component_in = 0;
    int out = 0;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw LayoutError(message);
}

bool valid_distribution(const Distribution& d) {
    return d.minimum >= 0.0 && d.exp_mean >= 0.0;
}

}  // namespace

void validate(const LayoutSpec& spec) {
    require(spec.version == kLayoutVersion, "unsupported layout version " + std::to_string(spec.version));

    std::map<std::string, const StationSpec*> by_name;
    for (const auto& s : spec.stations) {
        require(!s.name.empty(), "station without a name");
        require(by_name.emplace(s.name, &s).second, "duplicate station name '" + s.name + "'");
        require(valid_distribution(s.processing), "negative processing time at '" + s.name + "'");
        require(s.rework_probability >= 0.0 && s.rework_probability <= 1.0,
                "rework probability outside [0,1] at '" + s.name + "'");
        require(s.carrier_capacity >= 1, "carrier capacity must be positive at '" + s.name + "'");
        require(s.waiting_time >= 0.0 && s.waiting_time <= s.waiting_time_max,
                "waiting time outside its range at '" + s.name + "'");
        require(s.nok_error_time >= 0.0, "negative NOK error time at '" + s.name + "'");
        require(s.initial_carriers >= 0, "negative carrier count at '" + s.name + "'");
        if (s.performance_coefficient) {
            require(*s.performance_coefficient >= 0.0, "negative performance coefficient at '" + s.name + "'");
        }
        if (s.speed_window) {
            require(s.speed_window->end >= s.speed_window->start && s.speed_window->factor > 0.0,
                    "invalid speed window at '" + s.name + "'");
        }
    }
    bool has_sink = std::any_of(spec.stations.begin(), spec.stations.end(),
                                [](const StationSpec& s) { return s.kind == StationKind::sink; });
    require(has_sink, "no sink");

    std::map<std::string, Degree> degree;
    std::set<std::string> buffer_names;
    for (const auto& b : spec.buffers) {
        std::string name = b.name.empty() ? default_buffer_name(b.from, b.to) : b.name;
        require(buffer_names.insert(name).second, "duplicate buffer name '" + name + "'");
        require(by_name.count(b.from), "dangling buffer reference: '" + name + "' from unknown station '" + b.from + "'");
        require(by_name.count(b.to), "dangling buffer reference: '" + name + "' to unknown station '" + b.to + "'");
        require(b.capacity >= 1, "buffer '" + name + "' needs a positive capacity");
        require(b.traversal_time >= 0.0, "buffer '" + name + "' has a negative traversal time");
        require(valid_distribution(b.put_time) && valid_distribution(b.get_time),
                "buffer '" + name + "' has a negative put/get time");
        if (b.component) {
            require(by_name.at(b.to)->kind == StationKind::assembly,
                    "component buffer '" + name + "' must feed an assembly");
            ++degree[b.to].component_in;
        } else {
            ++degree[b.to].main_in;
        }
        ++degree[b.from].out;
    }

    for (const auto& s : spec.stations) {
        const Degree d = degree[s.name];
        const std::string& n = s.name;
        switch (s.kind) {
            case StationKind::source:
                require(d.out == 1, "source '" + n + "' needs exactly one output buffer");
                require(d.main_in <= 1, "source '" + n + "' accepts at most one carrier-return input");
                break;
            case StationKind::process:
                require(d.main_in == 1 && d.out == 1, "process '" + n + "' needs exactly one input and one output");
                break;
            case StationKind::assembly:
                require(d.component_in >= 1, "assembly '" + n + "' has no component input");
                require(d.main_in == 1 && d.out == 1,
                        "assembly '" + n + "' needs exactly one main input and one output");
                break;
            case StationKind::sink:
                require(d.main_in == 1, "sink '" + n + "' needs exactly one input");
                require(d.out <= 1, "sink '" + n + "' accepts at most one carrier-return output");
                break;
            case StationKind::switch_:
                require(d.main_in >= 1 && d.out >= 1, "switch '" + n + "' needs inputs and outputs");
                break;
            case StationKind::magazine:
                require(d.out == 1, "magazine '" + n + "' needs exactly one output buffer");
                require(d.main_in <= 1, "magazine '" + n + "' accepts at most one return input");
                break;
        }
    }

    std::set<std::string> pooled;
    for (const auto& p : spec.pools) {
        require(p.workers >= 0, "pool '" + p.name + "' has a negative worker count");
        require(!p.stations.empty(), "pool '" + p.name + "' has no eligible stations");
        require(p.traversal_time >= 0.0, "pool '" + p.name + "' has a negative traversal time");
        for (const auto& s : p.stations) {
            require(by_name.count(s), "worker pool '" + p.name + "' references unknown station '" + s + "'");
            require(pooled.insert(s).second, "station '" + s + "' belongs to more than one pool");
        }
        if (!p.initial_assignment.empty()) {
            require(static_cast<int>(p.initial_assignment.size()) == p.workers,
                    "pool '" + p.name + "' initial assignment does not cover every worker");
            for (const auto& s : p.initial_assignment) {
                require(std::find(p.stations.begin(), p.stations.end(), s) != p.stations.end(),
                        "pool '" + p.name + "' assigns a worker to ineligible station '" + s + "'");
            }
        }
    }
}

void to_json(json& j, const Distribution& d) {
    j = json{{"minimum", d.minimum}, {"exp_mean", d.exp_mean}};
}

void from_json(const json& j, Distribution& d) {
    if (j.is_number()) {
        d = Distribution{j.get<double>(), 0.0};
        return;
    }
    d.minimum = j.value("minimum", 0.0);
    d.exp_mean = j.value("exp_mean", 0.0);
}

namespace {

json station_to_json(const StationSpec& s) {
    const StationSpec defaults;
    json j{{"name", s.name}, {"type", std::string(to_string(s.kind))}, {"processing", s.processing}};
    if (s.performance_coefficient) j["performance_coefficient"] = *s.performance_coefficient;
    if (s.speed_window) {
        j["speed_window"] = {{"start", s.speed_window->start}, {"end", s.speed_window->end},
                             {"factor", s.speed_window->factor}};
    }
    if (s.waiting_time != defaults.waiting_time) j["waiting_time"] = s.waiting_time;
    if (s.actionable_waiting_time) j["actionable_waiting_time"] = true;
    if (s.waiting_time_max != defaults.waiting_time_max) j["waiting_time_max"] = s.waiting_time_max;
    if (!s.part_specs.empty()) {
        json parts = json::array();
        for (const auto& p : s.part_specs) {
            json pj = json::object();
            if (p.assembly_condition) pj["assembly_condition"] = *p.assembly_condition;
            parts.push_back(pj);
        }
        j["part_specs"] = parts;
    }
    if (s.carrier_capacity != defaults.carrier_capacity) j["carrier_capacity"] = s.carrier_capacity;
    if (s.rework_probability != defaults.rework_probability) j["rework_probability"] = s.rework_probability;
    if (s.nok_error_time != defaults.nok_error_time) j["nok_error_time"] = s.nok_error_time;
    if (s.initial_carriers != defaults.initial_carriers) j["initial_carriers"] = s.initial_carriers;
    if (s.actionable_on_off) j["actionable_on_off"] = true;
    if (!s.initially_on) j["initially_on"] = false;
    return j;
}

StationSpec station_from_json(const json& j) {
    StationSpec s;
    s.name = j.at("name").get<std::string>();
    s.kind = station_kind_from_string(j.at("type").get<std::string>());
    if (j.contains("processing")) s.processing = j.at("processing").get<Distribution>();
    if (j.contains("performance_coefficient")) s.performance_coefficient = j.at("performance_coefficient").get<double>();
    if (j.contains("speed_window")) {
        const auto& w = j.at("speed_window");
        s.speed_window = SpeedWindow{w.at("start").get<double>(), w.at("end").get<double>(),
                                     w.at("factor").get<double>()};
    }
    s.waiting_time = j.value("waiting_time", s.waiting_time);
    s.actionable_waiting_time = j.value("actionable_waiting_time", s.actionable_waiting_time);
    s.waiting_time_max = j.value("waiting_time_max", s.waiting_time_max);
    if (j.contains("part_specs")) {
        for (const auto& pj : j.at("part_specs")) {
            PartSpec p;
            if (pj.contains("assembly_condition")) p.assembly_condition = pj.at("assembly_condition").get<double>();
            s.part_specs.push_back(p);
        }
    }
    s.carrier_capacity = j.value("carrier_capacity", s.carrier_capacity);
    s.rework_probability = j.value("rework_probability", s.rework_probability);
    s.nok_error_time = j.value("nok_error_time", s.nok_error_time);
    s.initial_carriers = j.value("initial_carriers", s.initial_carriers);
    s.actionable_on_off = j.value("actionable_on_off", s.actionable_on_off);
    s.initially_on = j.value("initially_on", s.initially_on);
    return s;
}

}  // namespace

void to_json(json& j, const LayoutSpec& spec) {
    j = json::object();
    j["version"] = spec.version;
    if (!spec.name.empty()) j["name"] = spec.name;
    j["stations"] = json::array();
    for (const auto& s : spec.stations) j["stations"].push_back(station_to_json(s));
    j["buffers"] = json::array();
    for (const auto& b : spec.buffers) {
        json bj{{"from", b.from}, {"to", b.to}, {"capacity", b.capacity}, {"traversal_time", b.traversal_time}};
        if (!b.name.empty()) bj["name"] = b.name;
        if (b.put_time != Distribution{}) bj["put_time"] = b.put_time;
        if (b.get_time != Distribution{}) bj["get_time"] = b.get_time;
        if (b.component) bj["component"] = true;
        j["buffers"].push_back(bj);
    }
    j["pools"] = json::array();
    for (const auto& p : spec.pools) {
        json pj{{"name", p.name}, {"stations", p.stations}, {"workers", p.workers},
                {"traversal_time", p.traversal_time}};
        if (!p.initial_assignment.empty()) pj["initial_assignment"] = p.initial_assignment;
        j["pools"].push_back(pj);
    }
}

void from_json(const json& j, LayoutSpec& spec) {
    if (!j.contains("version")) throw LayoutError("layout document has no version field");
    spec = LayoutSpec{};
    spec.version = j.at("version").get<int>();
    spec.name = j.value("name", std::string{});
    for (const auto& sj : j.value("stations", json::array())) spec.stations.push_back(station_from_json(sj));
    for (const auto& bj : j.value("buffers", json::array())) {
        BufferSpec b;
        b.from = bj.at("from").get<std::string>();
        b.to = bj.at("to").get<std::string>();
        b.name = bj.value("name", std::string{});
        b.capacity = bj.value("capacity", 1);
        b.traversal_time = bj.value("traversal_time", 0.0);
        if (bj.contains("put_time")) b.put_time = bj.at("put_time").get<Distribution>();
        if (bj.contains("get_time")) b.get_time = bj.at("get_time").get<Distribution>();
        b.component = bj.value("component", false);
        spec.buffers.push_back(b);
    }
    for (const auto& pj : j.value("pools", json::array())) {
        PoolSpec p;
        p.name = pj.at("name").get<std::string>();
        p.stations = pj.at("stations").get<std::vector<std::string>>();
        p.workers = pj.value("workers", 0);
        p.traversal_time = pj.value("traversal_time", 0.0);
        if (pj.contains("initial_assignment")) {
            p.initial_assignment = pj.at("initial_assignment").get<std::vector<std::string>>();
        }
        spec.pools.push_back(p);
    }
}

LayoutSpec parse_layout(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw LayoutError(std::string("malformed layout document: ") + e.what());
    }
    try {
        return j.get<LayoutSpec>();
    } catch (const json::exception& e) {
        throw LayoutError(std::string("invalid layout document: ") + e.what());
    }
}

std::string serialize_layout(const LayoutSpec& spec, int indent) {
    return json(spec).dump(indent);
}

}  // namespace flowline
