#pragma once

// Declarative description of a production line. A LayoutSpec is plain data:
// it can be built by scenario factories, written to JSON and read back.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flowline/des.hpp"

namespace flowline {

inline constexpr int kLayoutVersion = 1;

enum class StationKind { source, process, assembly, sink, switch_, magazine };

std::string_view to_string(StationKind kind);
StationKind station_kind_from_string(std::string_view name);

struct PartSpec {
    std::optional<double> assembly_condition;  // T_AC; unset means parts never expire
    bool operator==(const PartSpec&) const = default;
};

/// Processing slowdown over a fixed time window: the minimum part of a cycle
/// advances at rate 1/factor while the clock is inside [start, end].
struct SpeedWindow {
    double start = 0.0;
    double end = 0.0;
    double factor = 1.0;
    bool operator==(const SpeedWindow&) const = default;
};

struct StationSpec {
    std::string name;
    StationKind kind = StationKind::process;
    Distribution processing;

    // Worker-modulated law T*exp(-c n) + Exp(S*T). When set, processing.exp_mean
    // is the relative spread S rather than an absolute mean.
    std::optional<double> performance_coefficient;
    std::optional<SpeedWindow> speed_window;

    // source
    double waiting_time = 0.0;
    bool actionable_waiting_time = false;
    double waiting_time_max = 100.0;
    std::vector<PartSpec> part_specs;  // one part per carrier when empty
    int carrier_capacity = 1;

    // process
    double rework_probability = 0.0;

    // assembly
    double nok_error_time = 0.0;

    // magazine
    int initial_carriers = 0;

    bool actionable_on_off = false;
    bool initially_on = true;

    bool operator==(const StationSpec&) const = default;
};

struct BufferSpec {
    std::string name;  // defaults to "Buffer_<from>_to_<to>"
    std::string from;
    std::string to;
    int capacity = 1;
    double traversal_time = 0.0;
    Distribution put_time;
    Distribution get_time;
    bool component = false;  // assembly component input (as opposed to the main track)

    bool operator==(const BufferSpec&) const = default;
};

struct PoolSpec {
    std::string name;
    std::vector<std::string> stations;  // eligible stations
    int workers = 0;
    double traversal_time = 0.0;
    // Initial station per worker; empty means round-robin over `stations`.
    std::vector<std::string> initial_assignment;

    bool operator==(const PoolSpec&) const = default;
};

struct LayoutSpec {
    int version = kLayoutVersion;
    std::string name;
    std::vector<StationSpec> stations;
    std::vector<BufferSpec> buffers;
    std::vector<PoolSpec> pools;

    bool operator==(const LayoutSpec&) const = default;
};

class LayoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string default_buffer_name(std::string_view from, std::string_view to);

/// Initial assignment expanded to one station name per worker.
std::vector<std::string> initial_assignment(const PoolSpec& pool);

/// Throws LayoutError describing the first structural problem found.
void validate(const LayoutSpec& spec);

void to_json(nlohmann::json& j, const Distribution& d);
void from_json(const nlohmann::json& j, Distribution& d);
void to_json(nlohmann::json& j, const LayoutSpec& spec);
void from_json(const nlohmann::json& j, LayoutSpec& spec);

LayoutSpec parse_layout(std::string_view text);
std::string serialize_layout(const LayoutSpec& spec, int indent = 2);

}  // namespace flowline
