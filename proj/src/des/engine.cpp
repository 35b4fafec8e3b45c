#include "flowline/des.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flowline {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::process_complete: return "process-complete";
        case EventKind::transfer_complete: return "buffer-transfer-complete";
        case EventKind::worker_arrival: return "worker-arrival";
        case EventKind::agent_boundary: return "agent-boundary";
    }
    return "unknown";
}

void EventCalendar::schedule(Event event, SimTime now) {
    if (!(event.fire_at >= now) || !std::isfinite(event.fire_at)) {
        std::ostringstream msg;
        msg << "event scheduled into the past: fire_at=" << event.fire_at << " now=" << now;
        throw std::logic_error(msg.str());
    }
    event.sequence = next_sequence_++;
    if (event.kind == EventKind::agent_boundary) ++boundary_count_;
    heap_.push(event);
}

Event EventCalendar::pop() {
    Event e = heap_.top();
    heap_.pop();
    if (e.kind == EventKind::agent_boundary) --boundary_count_;
    return e;
}

void Engine::schedule(EventKind kind, SimTime delay, std::uint32_t target, std::uint64_t token) {
    schedule_at(kind, clock_ + delay, target, token);
}

void Engine::schedule_at(EventKind kind, SimTime fire_at, std::uint32_t target, std::uint64_t token) {
    calendar_.schedule(Event{fire_at, 0, target, kind, token}, clock_);
}

void Engine::run_until(SimTime t_end, const Handler& handler) {
    if (t_end < clock_) {
        std::ostringstream msg;
        msg << "run_until(" << t_end << ") is before the clock " << clock_;
        throw std::logic_error(msg.str());
    }
    while (!calendar_.empty() && calendar_.top().fire_at <= t_end) {
        Event e = calendar_.pop();
        clock_ = e.fire_at;
        handler(e);
    }
    clock_ = t_end;
}

}  // namespace flowline
