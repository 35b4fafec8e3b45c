#pragma once

// Agent-in-the-loop interface: at every boundary an agent receives the
// observation (plus the raw counters) and returns an action command.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "flowline/observe.hpp"

namespace flowline {

/// Raw counters handed out next to every observation.
struct StepInfo {
    std::uint64_t step = 0;
    SimTime time = 0.0;
    std::uint64_t n_ok = 0;  // finished products
    std::uint64_t n_nok_total = 0;
    std::vector<std::uint64_t> station_n_ok;  // completed cycles per station
    std::vector<std::uint64_t> station_n_nok;
    std::uint64_t parts_created = 0;
    std::uint64_t parts_in_flight = 0;
    std::uint64_t parts_delivered = 0;
    std::uint64_t parts_scrapped = 0;
    double value = 0.0;  // C at this boundary
    bool deadlocked = false;
};

struct AgentInput {
    const Observation& observation;
    const SpaceDescriptors& spaces;
    const StepInfo& info;
};

class Agent {
public:
    virtual ~Agent() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    /// Called at the start of every episode.
    virtual void reset(std::uint64_t seed, const SpaceDescriptors& spaces) {
        (void)seed;
        (void)spaces;
    }
    virtual ActionCommand act(const AgentInput& input) = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

}  // namespace flowline
