#pragma once

// Runtime production line: stations, buffers, carriers, parts and workers
// driven by the discrete-event engine.
//
// Every station runs a repeating cycle expressed as a small state machine.
// A station either waits on a timer (processing, get/put handling, source
// waiting, scrap removal) or is blocked on exactly one buffer. Buffers have a
// single upstream and a single downstream station, so a buffer change wakes at
// most one station.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "flowline/des.hpp"
#include "flowline/layout.hpp"

namespace flowline {

/// Label-encoded in catalog order.
enum class Mode : int { working = 0, failing = 1, waiting = 2 };

std::string_view to_string(Mode mode);

struct Part {
    std::uint64_t id = 0;
    SimTime created_at = 0.0;
    std::optional<double> assembly_condition;
    std::uint32_t origin = 0;  // creating station
};

struct Carrier {
    std::uint64_t id = 0;
    int capacity = 1;
    std::vector<Part> parts;
};

struct BufferSlot {
    Carrier carrier;
    SimTime ready_at = 0.0;      // gettable once the traversal has elapsed
    std::uint64_t insertion = 0;  // per-buffer insertion stamp
};

struct Buffer {
    std::string name;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    int capacity = 1;
    double traversal_time = 0.0;
    Distribution put_time;
    Distribution get_time;
    bool component = false;

    std::deque<BufferSlot> queue;
    int reserved = 0;  // slots claimed by a put in progress
    std::uint64_t next_insertion = 0;

    [[nodiscard]] int occupancy() const { return static_cast<int>(queue.size()) + reserved; }
    [[nodiscard]] double fill() const { return static_cast<double>(occupancy()) / capacity; }
    [[nodiscard]] bool has_space() const { return occupancy() < capacity; }
    [[nodiscard]] bool head_ready(SimTime now) const { return !queue.empty() && queue.front().ready_at <= now; }
};

/// Where a station is inside its cycle.
enum class Stage {
    begin,
    get_main,
    got_main,
    get_component,
    got_component,
    process,
    processed,
    wait,
    waited,
    put,
    put_done,
};

enum class Block { none, get, put, off };

struct Station {
    StationSpec spec;
    std::uint32_t index = 0;

    std::vector<std::uint32_t> inputs;      // main-track inputs (switch: selectable)
    std::vector<std::uint32_t> components;  // assembly component inputs
    std::vector<std::uint32_t> outputs;
    std::optional<std::uint32_t> pool;

    // actionable state
    double waiting_time = 0.0;
    std::size_t in_index = 0;
    std::size_t out_index = 0;
    bool on = true;

    // observable state
    Mode mode = Mode::waiting;
    double last_processing_time = 0.0;  // lagged; 0 until the first cycle completes
    bool processing_time_valid = false;
    std::uint64_t n_ok = 0;
    std::uint64_t n_nok = 0;
    int workers_present = 0;
    int workers_assigned = 0;

    // cycle machinery
    Stage stage = Stage::begin;
    Stage after_timer = Stage::begin;
    bool timer_pending = false;
    Block block = Block::none;
    std::uint32_t blocked_on = 0;
    std::optional<Carrier> carrier;   // main carrier held by the station
    std::optional<Carrier> incoming;  // carrier taken by an in-progress get
    std::vector<Carrier> held_components;
    std::size_t component_slot = 0;
    std::uint32_t put_target = 0;
    double cycle_duration = 0.0;
    int magazine_stock = 0;
    std::vector<std::uint32_t> departing_workers;
    std::uint64_t parts_delivered = 0;  // sinks: parts removed from the line
    std::uint64_t cycles_started = 0;
};

enum class WorkerState { present, departing, in_transit };

struct Worker {
    std::string name;
    std::uint32_t pool = 0;
    std::uint32_t assigned = 0;  // station index
    std::uint32_t location = 0;  // station the worker is at (present/departing)
    WorkerState state = WorkerState::present;
    double traversal_time = 0.0;
    std::uint64_t token = 0;
};

struct WorkerPool {
    std::string name;
    std::vector<std::uint32_t> stations;
    std::vector<std::uint32_t> workers;
};

struct LoggedEvent {
    SimTime time = 0.0;
    std::string object;
    EventKind kind = EventKind::process_complete;
    nlohmann::json payload;
};

class Line {
public:
    /// Builds a runnable line. Throws LayoutError for malformed layouts.
    Line(LayoutSpec spec, std::uint64_t seed);

    [[nodiscard]] const LayoutSpec& spec() const { return spec_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] SimTime now() const { return engine_.now(); }

    /// Advances the simulation; stations start their cycles on the first call.
    void run_until(SimTime t_end);
    /// Places an agent-boundary marker in the calendar (logged, otherwise inert).
    void schedule_boundary(SimTime at, std::uint64_t step);

    [[nodiscard]] const std::vector<Station>& stations() const { return stations_; }
    [[nodiscard]] const std::vector<Buffer>& buffers() const { return buffers_; }
    [[nodiscard]] const std::vector<Worker>& workers() const { return workers_; }
    [[nodiscard]] const std::vector<WorkerPool>& pools() const { return pools_; }
    [[nodiscard]] const Station& station(std::string_view name) const;
    [[nodiscard]] std::optional<std::uint32_t> find_station(std::string_view name) const;
    [[nodiscard]] std::optional<std::uint32_t> find_buffer(std::string_view name) const;
    [[nodiscard]] std::optional<std::uint32_t> find_worker(std::string_view name) const;

    // Actuators. Range checks live in the observability layer; these throw
    // std::invalid_argument on misuse.
    void set_waiting_time(std::uint32_t station, double value);
    void set_in_index(std::uint32_t station, std::size_t index);
    void set_out_index(std::uint32_t station, std::size_t index);
    void set_on(std::uint32_t station, bool on);
    /// Worker finishes its current task, travels, then counts toward `station`.
    void reassign_worker(std::uint32_t worker, std::uint32_t station);

    /// True iff no simulation event is pending and every station is blocked
    /// on a buffer (starving or blocked).
    [[nodiscard]] bool detect_deadlock() const;

    // Counters
    [[nodiscard]] std::uint64_t parts_created() const { return parts_created_; }
    [[nodiscard]] std::uint64_t parts_delivered() const;
    [[nodiscard]] std::uint64_t parts_scrapped() const;
    [[nodiscard]] std::uint64_t parts_in_flight() const;
    [[nodiscard]] std::uint64_t products_completed() const;  // carriers finished at sinks
    [[nodiscard]] const std::vector<std::uint64_t>& nok_by_origin() const { return nok_by_origin_; }

    /// Violations of conservation, buffer and worker invariants (empty when sound).
    [[nodiscard]] std::vector<std::string> check_invariants() const;

    void enable_event_log(bool enabled) { log_enabled_ = enabled; }
    [[nodiscard]] const std::vector<LoggedEvent>& event_log() const { return log_; }
    void clear_event_log() { log_.clear(); }

private:
    void start();
    void dispatch(const Event& e);
    void drain_wakes();
    void wake(std::uint32_t station);
    void advance(std::uint32_t station);
    bool step(Station& st);
    bool try_get(Station& st, std::uint32_t buffer, Stage next);
    bool try_put(Station& st, std::uint32_t buffer, Stage next);
    void start_timer(Station& st, SimTime duration, Stage next);
    SimTime sample_cycle(Station& st);
    Carrier make_carrier(const Station& st);
    void add_parts(Station& st, Carrier& carrier);
    void release_departing(Station& st);
    void start_travel(Worker& w);
    void log(SimTime time, const std::string& object, EventKind kind, nlohmann::json payload);

    LayoutSpec spec_;
    std::uint64_t seed_ = 0;
    Engine engine_;
    std::vector<Station> stations_;
    std::vector<Buffer> buffers_;
    std::vector<Worker> workers_;
    std::vector<WorkerPool> pools_;
    std::vector<RandomStream> streams_;  // one per station
    std::unordered_map<std::string, std::uint32_t> station_index_;
    std::unordered_map<std::string, std::uint32_t> buffer_index_;
    std::unordered_map<std::string, std::uint32_t> worker_index_;

    std::deque<std::uint32_t> wakes_;
    std::vector<bool> wake_queued_;
    bool started_ = false;
    std::uint64_t next_carrier_id_ = 0;
    std::uint64_t next_part_id_ = 0;
    std::uint64_t parts_created_ = 0;
    std::vector<std::uint64_t> nok_by_origin_;
    std::uint64_t age_violations_ = 0;

    bool log_enabled_ = false;
    std::vector<LoggedEvent> log_;
};

/// Duration needed to complete `work` units starting at `now` when work
/// progresses at rate 1/factor inside the window and at rate 1 outside it.
SimTime warped_duration(SimTime now, double work, const SpeedWindow& window);

}  // namespace flowline
