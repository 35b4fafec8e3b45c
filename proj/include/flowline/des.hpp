#pragma once

// Discrete-event kernel: clock, event calendar, seeded random streams and
// the processing-time laws sampled by stations.

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string_view>
#include <vector>

namespace flowline {

/// Abstract simulation time units. Always non-negative.
using SimTime = double;

enum class EventKind : std::uint8_t {
    process_complete,
    transfer_complete,
    worker_arrival,
    agent_boundary,
};

std::string_view to_string(EventKind kind);

struct Event {
    SimTime fire_at = 0.0;
    std::uint64_t sequence = 0;  // assigned by the calendar
    std::uint32_t target = 0;    // station, buffer or worker index depending on kind
    EventKind kind = EventKind::process_complete;
    std::uint64_t token = 0;     // kind-specific payload (e.g. worker travel token)
};

/// Min-heap on (fire_at, sequence). Sequence numbers are global insertion
/// order, so dispatch order is a total order.
class EventCalendar {
public:
    /// Throws std::logic_error if `event.fire_at` lies before `now`.
    void schedule(Event event, SimTime now);

    [[nodiscard]] bool empty() const { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const { return heap_.size(); }
    [[nodiscard]] const Event& top() const { return heap_.top(); }
    Event pop();

    /// Number of pending events that are not agent boundaries.
    [[nodiscard]] std::size_t pending_simulation_events() const { return heap_.size() - boundary_count_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.sequence > b.sequence;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
    std::size_t boundary_count_ = 0;
};

/// Clock plus calendar. Events are handed to a dispatch callback; the engine
/// knows nothing about what they mean.
class Engine {
public:
    using Handler = std::function<void(const Event&)>;

    [[nodiscard]] SimTime now() const { return clock_; }

    void schedule(EventKind kind, SimTime delay, std::uint32_t target, std::uint64_t token = 0);
    void schedule_at(EventKind kind, SimTime fire_at, std::uint32_t target, std::uint64_t token = 0);

    /// Dispatches every event with fire_at <= t_end in (time, sequence) order,
    /// then sets the clock to t_end. Throws if t_end < now().
    void run_until(SimTime t_end, const Handler& handler);

    [[nodiscard]] const EventCalendar& calendar() const { return calendar_; }

private:
    SimTime clock_ = 0.0;
    EventCalendar calendar_;
};

/// A named, independently seeded random stream. The sample sequence depends
/// only on (seed, stream_id).
class RandomStream {
public:
    RandomStream() : RandomStream(0, "") {}
    RandomStream(std::uint64_t seed, std::string_view stream_id);

    double uniform();                          // [0, 1)
    double uniform(double low, double high);   // [low, high)
    double exponential(double mean);           // mean 0 yields 0
    std::size_t index(std::size_t n);          // uniform in [0, n)

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Derives a 64-bit seed from a base seed and a label (splitmix64 over FNV-1a).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// Shifted exponential law: minimum + Exp(mean = exp_mean).
struct Distribution {
    double minimum = 0.0;
    double exp_mean = 0.0;

    [[nodiscard]] double mean() const { return minimum + exp_mean; }
    [[nodiscard]] double variance() const { return exp_mean * exp_mean; }
    bool operator==(const Distribution&) const = default;
};

SimTime sample_time(const Distribution& dist, RandomStream& stream);

/// Performance coefficient exp(-c n).
double performance_coefficient(int workers, double c);

/// Worker-modulated law: T * exp(-c n) + Exp(mean = S * T).
SimTime sample_worker_time(double minimum, double relative_spread, int workers, double c, RandomStream& stream);

}  // namespace flowline
