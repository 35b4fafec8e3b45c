#include "flowline/line.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace flowline {

namespace {

constexpr std::uint32_t kNoBuffer = std::numeric_limits<std::uint32_t>::max();

const char* timer_label(Stage next) {
    switch (next) {
        case Stage::got_main: return "get-main";
        case Stage::got_component: return "get-component";
        case Stage::processed: return "process";
        case Stage::waited: return "wait";
        case Stage::get_component: return "scrap";
        case Stage::put_done: return "put";
        default: return "timer";
    }
}

std::uint64_t count_parts(const std::optional<Carrier>& c) {
    return c ? c->parts.size() : 0;
}

}  // namespace

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::working: return "working";
        case Mode::failing: return "failing";
        case Mode::waiting: return "waiting";
    }
    return "unknown";
}

SimTime warped_duration(SimTime now, double work, const SpeedWindow& window) {
    SimTime t = now;
    double remaining = work;
    if (t < window.start) {
        const double before = std::min(remaining, window.start - t);
        t += before;
        remaining -= before;
    }
    if (remaining > 0.0 && t < window.end) {
        const double capacity = (window.end - t) / window.factor;
        if (remaining <= capacity) {
            t += remaining * window.factor;
            remaining = 0.0;
        } else {
            t = window.end;
            remaining -= capacity;
        }
    }
    t += remaining;
    return t - now;
}

Line::Line(LayoutSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
    validate(spec_);
    for (const auto& s : spec_.stations) {
        if (s.kind == StationKind::source) {
            const std::size_t parts = std::max<std::size_t>(1, s.part_specs.size());
            if (static_cast<int>(parts) > s.carrier_capacity) {
                throw LayoutError("source '" + s.name + "' sets up more parts than its carriers hold");
            }
        }
        if (s.kind == StationKind::magazine && s.initial_carriers == 0) {
            bool has_input = std::any_of(spec_.buffers.begin(), spec_.buffers.end(),
                                         [&](const BufferSpec& b) { return b.to == s.name; });
            if (!has_input) throw LayoutError("magazine '" + s.name + "' has neither carriers nor a return input");
        }
    }

    stations_.reserve(spec_.stations.size());
    for (const auto& s : spec_.stations) {
        Station st;
        st.spec = s;
        st.index = static_cast<std::uint32_t>(stations_.size());
        st.waiting_time = s.waiting_time;
        st.on = s.initially_on;
        st.magazine_stock = s.initial_carriers;
        station_index_.emplace(s.name, st.index);
        streams_.emplace_back(seed, "station:" + s.name);
        stations_.push_back(std::move(st));
    }
    wake_queued_.assign(stations_.size(), false);
    nok_by_origin_.assign(stations_.size(), 0);

    for (const auto& b : spec_.buffers) {
        Buffer buf;
        buf.name = b.name.empty() ? default_buffer_name(b.from, b.to) : b.name;
        buf.from = station_index_.at(b.from);
        buf.to = station_index_.at(b.to);
        buf.capacity = b.capacity;
        buf.traversal_time = b.traversal_time;
        buf.put_time = b.put_time;
        buf.get_time = b.get_time;
        buf.component = b.component;
        const auto idx = static_cast<std::uint32_t>(buffers_.size());
        buffer_index_.emplace(buf.name, idx);
        stations_[buf.from].outputs.push_back(idx);
        if (buf.component) {
            stations_[buf.to].components.push_back(idx);
        } else {
            stations_[buf.to].inputs.push_back(idx);
        }
        buffers_.push_back(std::move(buf));
    }

    for (const auto& p : spec_.pools) {
        WorkerPool pool;
        pool.name = p.name;
        const auto pool_idx = static_cast<std::uint32_t>(pools_.size());
        for (const auto& s : p.stations) {
            const auto idx = station_index_.at(s);
            pool.stations.push_back(idx);
            stations_[idx].pool = pool_idx;
        }
        const auto assignment = initial_assignment(p);
        for (int i = 0; i < p.workers; ++i) {
            Worker w;
            w.name = p.name + "_W" + std::to_string(i);
            w.pool = pool_idx;
            w.assigned = station_index_.at(assignment[i]);
            w.location = w.assigned;
            w.traversal_time = p.traversal_time;
            ++stations_[w.assigned].workers_present;
            ++stations_[w.assigned].workers_assigned;
            const auto widx = static_cast<std::uint32_t>(workers_.size());
            worker_index_.emplace(w.name, widx);
            pool.workers.push_back(widx);
            workers_.push_back(std::move(w));
        }
        pools_.push_back(std::move(pool));
    }
}

const Station& Line::station(std::string_view name) const {
    auto idx = find_station(name);
    if (!idx) throw std::invalid_argument("unknown station '" + std::string(name) + "'");
    return stations_[*idx];
}

std::optional<std::uint32_t> Line::find_station(std::string_view name) const {
    auto it = station_index_.find(std::string(name));
    if (it == station_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Line::find_buffer(std::string_view name) const {
    auto it = buffer_index_.find(std::string(name));
    if (it == buffer_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Line::find_worker(std::string_view name) const {
    auto it = worker_index_.find(std::string(name));
    if (it == worker_index_.end()) return std::nullopt;
    return it->second;
}

void Line::start() {
    started_ = true;
    for (std::uint32_t i = 0; i < stations_.size(); ++i) advance(i);
    drain_wakes();
}

void Line::run_until(SimTime t_end) {
    if (!started_) start();
    engine_.run_until(t_end, [this](const Event& e) { dispatch(e); });
}

void Line::schedule_boundary(SimTime at, std::uint64_t step) {
    engine_.schedule_at(EventKind::agent_boundary, at, 0, step);
}

void Line::dispatch(const Event& e) {
    const SimTime now = engine_.now();
    switch (e.kind) {
        case EventKind::process_complete: {
            Station& st = stations_[e.target];
            if (log_enabled_) {
                nlohmann::json payload{{"stage", timer_label(st.after_timer)}};
                if (st.after_timer == Stage::processed) payload["duration"] = st.cycle_duration;
                log(now, st.spec.name, e.kind, std::move(payload));
            }
            st.timer_pending = false;
            st.stage = st.after_timer;
            advance(e.target);
            break;
        }
        case EventKind::transfer_complete: {
            const Buffer& buf = buffers_[e.target];
            if (log_enabled_) log(now, buf.name, e.kind, {{"occupancy", buf.occupancy()}});
            const Station& down = stations_[buf.to];
            if (down.block == Block::get && down.blocked_on == e.target && buf.head_ready(now)) wake(buf.to);
            break;
        }
        case EventKind::worker_arrival: {
            Worker& w = workers_[e.target];
            if (w.state != WorkerState::in_transit || e.token != w.token) break;  // superseded travel
            w.state = WorkerState::present;
            w.location = w.assigned;
            ++stations_[w.assigned].workers_present;
            if (log_enabled_) log(now, w.name, e.kind, {{"station", stations_[w.assigned].spec.name}});
            break;
        }
        case EventKind::agent_boundary:
            if (log_enabled_) log(now, "agent", e.kind, {{"step", e.token}});
            break;
    }
    drain_wakes();
}

void Line::wake(std::uint32_t station) {
    if (wake_queued_[station]) return;
    wake_queued_[station] = true;
    wakes_.push_back(station);
}

void Line::drain_wakes() {
    while (!wakes_.empty()) {
        const auto s = wakes_.front();
        wakes_.pop_front();
        wake_queued_[s] = false;
        Station& st = stations_[s];
        if (st.block != Block::none && !st.timer_pending) {
            st.block = Block::none;
            advance(s);
        }
    }
}

void Line::advance(std::uint32_t station) {
    while (step(stations_[station])) {
    }
}

bool Line::step(Station& st) {
    const SimTime now = engine_.now();
    const StationKind kind = st.spec.kind;
    switch (st.stage) {
        case Stage::begin: {
            if (!st.on) {
                st.block = Block::off;
                st.mode = Mode::waiting;
                return false;
            }
            st.block = Block::none;
            ++st.cycles_started;
            if (kind == StationKind::source) {
                st.stage = Stage::wait;
            } else if (kind == StationKind::magazine) {
                if (st.magazine_stock > 0) {
                    --st.magazine_stock;
                    st.carrier = make_carrier(st);
                    st.stage = Stage::process;
                } else {
                    st.stage = Stage::get_main;
                }
            } else {
                st.stage = Stage::get_main;
            }
            return true;
        }
        case Stage::get_main: {
            if (st.inputs.empty()) {  // exhausted magazine
                st.block = Block::get;
                st.blocked_on = kNoBuffer;
                st.mode = Mode::waiting;
                return false;
            }
            const auto b = kind == StationKind::switch_ ? st.inputs[st.in_index] : st.inputs.front();
            return try_get(st, b, Stage::got_main);
        }
        case Stage::got_main: {
            st.carrier = std::move(st.incoming);
            st.incoming.reset();
            if (kind == StationKind::assembly) {
                st.component_slot = 0;
                st.held_components.clear();
                st.stage = Stage::get_component;
            } else {
                st.stage = Stage::process;
            }
            return true;
        }
        case Stage::get_component:
            return try_get(st, st.components[st.component_slot], Stage::got_component);
        case Stage::got_component: {
            Carrier component = std::move(*st.incoming);
            st.incoming.reset();
            bool expired = false;
            for (const auto& p : component.parts) {
                if (p.assembly_condition && now - p.created_at > *p.assembly_condition) expired = true;
            }
            if (expired) {
                for (const auto& p : component.parts) {
                    if (p.assembly_condition && !(now - p.created_at > *p.assembly_condition)) ++age_violations_;
                    ++st.n_nok;
                    ++nok_by_origin_[p.origin];
                }
                if (st.spec.nok_error_time > 0.0) {
                    st.mode = Mode::working;
                    start_timer(st, st.spec.nok_error_time, Stage::get_component);
                    return false;
                }
                st.stage = Stage::get_component;
                return true;
            }
            st.held_components.push_back(std::move(component));
            ++st.component_slot;
            st.stage = st.component_slot < st.components.size() ? Stage::get_component : Stage::process;
            return true;
        }
        case Stage::process: {
            st.cycle_duration = sample_cycle(st);
            st.mode = Mode::working;
            start_timer(st, st.cycle_duration, Stage::processed);
            return false;
        }
        case Stage::processed: {
            st.last_processing_time = st.cycle_duration;
            st.processing_time_valid = true;
            ++st.n_ok;
            release_departing(st);
            switch (kind) {
                case StationKind::source:
                    add_parts(st, *st.carrier);
                    st.stage = Stage::put;
                    return true;
                case StationKind::assembly:
                    for (auto& c : st.held_components) {
                        for (auto& p : c.parts) {
                            if (static_cast<int>(st.carrier->parts.size()) >= st.carrier->capacity) {
                                throw std::logic_error("carrier capacity exceeded at assembly '" + st.spec.name + "'");
                            }
                            st.carrier->parts.push_back(std::move(p));
                        }
                    }
                    st.held_components.clear();
                    st.stage = Stage::put;
                    return true;
                case StationKind::sink:
                    st.parts_delivered += st.carrier->parts.size();
                    st.carrier->parts.clear();
                    if (st.outputs.empty()) {
                        st.carrier.reset();
                        st.stage = Stage::begin;
                    } else {
                        st.stage = Stage::put;
                    }
                    return true;
                default:
                    st.stage = Stage::put;
                    return true;
            }
        }
        case Stage::wait: {
            const double w = st.waiting_time;
            if (w > 0.0) {
                st.mode = Mode::waiting;
                start_timer(st, w, Stage::waited);
                return false;
            }
            st.stage = Stage::waited;
            return true;
        }
        case Stage::waited: {
            if (st.inputs.empty()) {
                st.carrier = make_carrier(st);
                st.stage = Stage::process;
            } else {
                st.stage = Stage::get_main;
            }
            return true;
        }
        case Stage::put: {
            const auto b = kind == StationKind::switch_ ? st.outputs[st.out_index] : st.outputs.front();
            return try_put(st, b, Stage::put_done);
        }
        case Stage::put_done: {
            Buffer& buf = buffers_[st.put_target];
            --buf.reserved;
            buf.queue.push_back(BufferSlot{std::move(*st.carrier), now + buf.traversal_time, buf.next_insertion++});
            st.carrier.reset();
            engine_.schedule(EventKind::transfer_complete, buf.traversal_time, st.put_target);
            st.stage = Stage::begin;
            return true;
        }
    }
    return false;
}

bool Line::try_get(Station& st, std::uint32_t buffer, Stage next) {
    Buffer& buf = buffers_[buffer];
    const SimTime now = engine_.now();
    if (!buf.head_ready(now)) {
        st.block = Block::get;
        st.blocked_on = buffer;
        st.mode = Mode::waiting;
        return false;
    }
    st.block = Block::none;
    st.incoming = std::move(buf.queue.front().carrier);
    buf.queue.pop_front();
    const Station& up = stations_[buf.from];
    if (up.block == Block::put && up.blocked_on == buffer) wake(buf.from);
    const SimTime d = sample_time(buf.get_time, streams_[st.index]);
    if (d > 0.0) {
        st.mode = Mode::working;
        start_timer(st, d, next);
        return false;
    }
    st.stage = next;
    return true;
}

bool Line::try_put(Station& st, std::uint32_t buffer, Stage next) {
    Buffer& buf = buffers_[buffer];
    if (!buf.has_space()) {
        st.block = Block::put;
        st.blocked_on = buffer;
        st.mode = Mode::waiting;
        return false;
    }
    st.block = Block::none;
    ++buf.reserved;
    st.put_target = buffer;
    const SimTime d = sample_time(buf.put_time, streams_[st.index]);
    if (d > 0.0) {
        st.mode = Mode::working;
        start_timer(st, d, next);
        return false;
    }
    st.stage = next;
    return true;
}

void Line::start_timer(Station& st, SimTime duration, Stage next) {
    st.after_timer = next;
    st.timer_pending = true;
    engine_.schedule(EventKind::process_complete, duration, st.index);
}

SimTime Line::sample_cycle(Station& st) {
    RandomStream& stream = streams_[st.index];
    const Distribution& law = st.spec.processing;
    double minimum = law.minimum;
    double exp_mean = law.exp_mean;
    if (st.spec.performance_coefficient) {
        minimum = law.minimum * performance_coefficient(st.workers_present, *st.spec.performance_coefficient);
        exp_mean = law.exp_mean * law.minimum;
    }
    const double noise = stream.exponential(exp_mean);
    const double base = st.spec.speed_window ? warped_duration(engine_.now(), minimum, *st.spec.speed_window) : minimum;
    double duration = base + noise;
    if (st.spec.kind == StationKind::process && st.spec.rework_probability > 0.0 &&
        stream.uniform() < st.spec.rework_probability) {
        duration *= 2.0;
    }
    return duration;
}

Carrier Line::make_carrier(const Station& st) {
    return Carrier{next_carrier_id_++, st.spec.carrier_capacity, {}};
}

void Line::add_parts(Station& st, Carrier& carrier) {
    static const std::vector<PartSpec> single_part{PartSpec{}};
    const auto& specs = st.spec.part_specs.empty() ? single_part : st.spec.part_specs;
    for (const auto& ps : specs) {
        if (static_cast<int>(carrier.parts.size()) >= carrier.capacity) {
            throw std::logic_error("carrier capacity exceeded at source '" + st.spec.name + "'");
        }
        carrier.parts.push_back(Part{next_part_id_++, engine_.now(), ps.assembly_condition, st.index});
        ++parts_created_;
    }
}

void Line::release_departing(Station& st) {
    for (auto w : st.departing_workers) start_travel(workers_[w]);
    st.departing_workers.clear();
}

void Line::start_travel(Worker& w) {
    w.state = WorkerState::in_transit;
    ++w.token;
    const auto idx = static_cast<std::uint32_t>(&w - workers_.data());
    engine_.schedule(EventKind::worker_arrival, w.traversal_time, idx, w.token);
}

void Line::set_waiting_time(std::uint32_t station, double value) {
    if (value < 0.0) throw std::invalid_argument("negative waiting time");
    stations_.at(station).waiting_time = value;
}

void Line::set_in_index(std::uint32_t station, std::size_t index) {
    Station& st = stations_.at(station);
    if (index >= st.inputs.size()) throw std::invalid_argument("input index out of range at '" + st.spec.name + "'");
    st.in_index = index;
}

void Line::set_out_index(std::uint32_t station, std::size_t index) {
    Station& st = stations_.at(station);
    if (index >= st.outputs.size()) throw std::invalid_argument("output index out of range at '" + st.spec.name + "'");
    st.out_index = index;
}

void Line::set_on(std::uint32_t station, bool on) {
    Station& st = stations_.at(station);
    st.on = on;
    if (on && started_ && st.block == Block::off) {
        wake(station);
        drain_wakes();
    }
}

void Line::reassign_worker(std::uint32_t worker, std::uint32_t station) {
    Worker& w = workers_.at(worker);
    const WorkerPool& pool = pools_[w.pool];
    if (std::find(pool.stations.begin(), pool.stations.end(), station) == pool.stations.end()) {
        throw std::invalid_argument("station '" + stations_.at(station).spec.name + "' is not eligible for worker '" +
                                    w.name + "'");
    }
    if (w.assigned == station) return;
    --stations_[w.assigned].workers_assigned;
    ++stations_[station].workers_assigned;
    w.assigned = station;

    switch (w.state) {
        case WorkerState::present: {
            Station& origin = stations_[w.location];
            --origin.workers_present;
            if (origin.timer_pending && origin.after_timer == Stage::processed) {
                w.state = WorkerState::departing;
                origin.departing_workers.push_back(worker);
            } else {
                start_travel(w);
            }
            break;
        }
        case WorkerState::departing:
            if (station == w.location) {
                Station& origin = stations_[w.location];
                std::erase(origin.departing_workers, worker);
                ++origin.workers_present;
                w.state = WorkerState::present;
            }
            break;
        case WorkerState::in_transit:
            start_travel(w);
            break;
    }
}

bool Line::detect_deadlock() const {
    if (!started_ || !wakes_.empty()) return false;
    if (engine_.calendar().pending_simulation_events() != 0) return false;
    return std::all_of(stations_.begin(), stations_.end(), [](const Station& st) {
        return !st.timer_pending && (st.block == Block::get || st.block == Block::put);
    });
}

std::uint64_t Line::parts_delivered() const {
    std::uint64_t total = 0;
    for (const auto& st : stations_) total += st.parts_delivered;
    return total;
}

std::uint64_t Line::parts_scrapped() const {
    std::uint64_t total = 0;
    for (const auto& st : stations_) total += st.n_nok;
    return total;
}

std::uint64_t Line::products_completed() const {
    std::uint64_t total = 0;
    for (const auto& st : stations_) {
        if (st.spec.kind == StationKind::sink) total += st.n_ok;
    }
    return total;
}

std::uint64_t Line::parts_in_flight() const {
    std::uint64_t total = 0;
    for (const auto& buf : buffers_) {
        for (const auto& slot : buf.queue) total += slot.carrier.parts.size();
    }
    for (const auto& st : stations_) {
        total += count_parts(st.carrier) + count_parts(st.incoming);
        for (const auto& c : st.held_components) total += c.parts.size();
    }
    return total;
}

std::vector<std::string> Line::check_invariants() const {
    std::vector<std::string> violations;
    auto fail = [&](const std::string& what) { violations.push_back(what); };

    const auto in_flight = parts_in_flight();
    const auto delivered = parts_delivered();
    const auto scrapped = parts_scrapped();
    if (parts_created_ != in_flight + delivered + scrapped) {
        std::ostringstream msg;
        msg << "part conservation: created " << parts_created_ << " != in flight " << in_flight << " + delivered "
            << delivered << " + scrapped " << scrapped;
        fail(msg.str());
    }

    for (const auto& buf : buffers_) {
        if (buf.reserved < 0 || buf.occupancy() > buf.capacity) {
            fail("buffer '" + buf.name + "' occupancy " + std::to_string(buf.occupancy()) + " outside [0, " +
                 std::to_string(buf.capacity) + "]");
        }
        for (std::size_t i = 1; i < buf.queue.size(); ++i) {
            if (buf.queue[i].insertion <= buf.queue[i - 1].insertion ||
                buf.queue[i].ready_at < buf.queue[i - 1].ready_at) {
                fail("buffer '" + buf.name + "' lost FIFO order");
            }
        }
        for (const auto& slot : buf.queue) {
            if (static_cast<int>(slot.carrier.parts.size()) > slot.carrier.capacity) {
                fail("carrier " + std::to_string(slot.carrier.id) + " holds more parts than its capacity");
            }
        }
    }

    for (const auto& pool : pools_) {
        int present = 0;
        int assigned = 0;
        for (auto s : pool.stations) {
            present += stations_[s].workers_present;
            assigned += stations_[s].workers_assigned;
        }
        int moving = 0;
        for (auto w : pool.workers) {
            if (workers_[w].state != WorkerState::present) ++moving;
        }
        const int size = static_cast<int>(pool.workers.size());
        if (present + moving != size || assigned != size) {
            fail("worker conservation in pool '" + pool.name + "': present " + std::to_string(present) +
                 " + moving " + std::to_string(moving) + " (assigned " + std::to_string(assigned) + ") vs " +
                 std::to_string(size));
        }
    }

    if (age_violations_ != 0) fail("a component was scrapped without exceeding its assembly condition");
    return violations;
}

void Line::log(SimTime time, const std::string& object, EventKind kind, nlohmann::json payload) {
    log_.push_back(LoggedEvent{time, object, kind, std::move(payload)});
}

}  // namespace flowline
