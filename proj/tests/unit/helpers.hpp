#pragma once

#include <string>
#include <vector>

#include "flowline/layout.hpp"

namespace testing {

inline flowline::StationSpec station(std::string name, flowline::StationKind kind, double minimum,
                                     double exp_mean = 0.0) {
    flowline::StationSpec s;
    s.name = std::move(name);
    s.kind = kind;
    s.processing = {minimum, exp_mean};
    return s;
}

inline flowline::BufferSpec buffer(std::string from, std::string to, int capacity = 2, double traversal = 0.0,
                                   bool component = false) {
    flowline::BufferSpec b;
    b.from = std::move(from);
    b.to = std::move(to);
    b.capacity = capacity;
    b.traversal_time = traversal;
    b.component = component;
    return b;
}

/// Source -> Process -> Sink with deterministic times.
inline flowline::LayoutSpec chain(double source, double process, double sink, int capacity = 2) {
    using flowline::StationKind;
    flowline::LayoutSpec l;
    l.name = "chain";
    l.stations = {station("Source", StationKind::source, source), station("P", StationKind::process, process),
                  station("Sink", StationKind::sink, sink)};
    l.buffers = {buffer("Source", "P", capacity), buffer("P", "Sink", capacity)};
    return l;
}

}  // namespace testing
