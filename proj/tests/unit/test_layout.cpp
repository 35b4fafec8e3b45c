#include <doctest.h>

#include <string>

#include "flowline/line.hpp"
#include "flowline/scenarios.hpp"
#include "helpers.hpp"

using namespace flowline;
using testing::buffer;
using testing::station;

namespace {

std::string layout_error(const LayoutSpec& spec) {
    try {
        validate(spec);
    } catch (const LayoutError& e) {
        return e.what();
    }
    return "";
}

LayoutSpec showcase() {
    LayoutSpec l;
    l.name = "ShowCase";
    auto s1 = station("Source1", StationKind::source, 5.0);
    s1.carrier_capacity = 2;
    s1.actionable_waiting_time = true;
    auto s2 = station("Source2", StationKind::source, 5.0);
    s2.part_specs = {PartSpec{100.0}};
    s2.actionable_waiting_time = true;
    auto a = station("Assembly", StationKind::assembly, 40.0);
    a.nok_error_time = 5.0;
    l.stations = {s1,
                  s2,
                  a,
                  station("Process", StationKind::process, 15.0),
                  station("Switch", StationKind::switch_, 1.0),
                  station("Sink1", StationKind::sink, 70.0),
                  station("Sink2", StationKind::sink, 70.0)};
    l.buffers = {buffer("Source2", "Assembly", 2, 5.0, true), buffer("Source1", "Assembly", 3, 5.0),
                 buffer("Assembly", "Process", 2, 2.0),       buffer("Process", "Switch", 2, 2.0),
                 buffer("Switch", "Sink1", 3, 2.0),           buffer("Switch", "Sink2", 3, 2.0)};
    return l;
}

}  // namespace

TEST_CASE("showcase line builds") {
    const auto spec = showcase();
    CHECK(layout_error(spec).empty());
    Line line(spec, 0);
    CHECK(line.buffers().size() == 6);
    CHECK(line.find_buffer("Buffer_Switch_to_Sink1").has_value());
    CHECK(line.find_buffer("Buffer_Source2_to_Assembly").has_value());
    for (const auto& st : line.stations()) CHECK(st.mode == Mode::waiting);
    for (const auto& b : line.buffers()) CHECK(b.occupancy() == 0);
    line.run_until(500.0);
    CHECK(line.check_invariants().empty());
    CHECK(line.products_completed() > 0);
}

TEST_CASE("missing sink") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    spec.stations.pop_back();
    spec.buffers.pop_back();
    spec.stations[1].kind = StationKind::process;
    CHECK(layout_error(spec) == "no sink");
}

TEST_CASE("dangling buffer reference") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    spec.buffers.push_back(buffer("P", "Nowhere"));
    CHECK(layout_error(spec).find("dangling buffer reference") != std::string::npos);
    CHECK_THROWS_AS(Line(spec, 0), LayoutError);
}

TEST_CASE("assembly without component input") {
    LayoutSpec spec;
    spec.stations = {station("S", StationKind::source, 1.0), station("A", StationKind::assembly, 1.0),
                     station("Sink", StationKind::sink, 1.0)};
    spec.buffers = {buffer("S", "A"), buffer("A", "Sink")};
    CHECK(layout_error(spec).find("has no component input") != std::string::npos);
}

TEST_CASE("component buffer must feed an assembly") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    spec.buffers[0].component = true;
    CHECK(layout_error(spec).find("must feed an assembly") != std::string::npos);
}

TEST_CASE("pool naming an unknown station") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    PoolSpec pool;
    pool.name = "Pool";
    pool.stations = {"P", "Q"};
    pool.workers = 2;
    spec.pools.push_back(pool);
    CHECK_FALSE(layout_error(spec).empty());
}

TEST_CASE("duplicate names and bad numbers") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    spec.stations[1].name = "Source";
    CHECK(layout_error(spec).find("duplicate station name") != std::string::npos);

    spec = testing::chain(1.0, 1.0, 1.0);
    spec.buffers[0].capacity = 0;
    CHECK(layout_error(spec).find("positive capacity") != std::string::npos);

    spec = testing::chain(1.0, 1.0, 1.0);
    spec.stations[1].rework_probability = 1.5;
    CHECK_FALSE(layout_error(spec).empty());

    spec = testing::chain(1.0, 1.0, 1.0);
    spec.version = 99;
    CHECK(layout_error(spec).find("version") != std::string::npos);
}

TEST_CASE("process degree") {
    auto spec = testing::chain(1.0, 1.0, 1.0);
    spec.stations.push_back(station("Source2", StationKind::source, 1.0));
    spec.buffers.push_back(buffer("Source2", "P"));
    CHECK(layout_error(spec).find("process 'P'") != std::string::npos);
}

TEST_CASE("JSON round trip") {
    for (const auto& spec : {make_pd(3).layout, make_wt().layout, make_wtj(0.75, 3).layout, make_wa(4, 12).layout,
                             make_cl(3).layout, showcase()}) {
        const std::string text = serialize_layout(spec);
        const LayoutSpec back = parse_layout(text);
        CHECK(back == spec);
        CHECK(serialize_layout(back) == text);
    }
}

TEST_CASE("JSON errors surface as layout errors") {
    CHECK_THROWS_AS(parse_layout("{not json"), LayoutError);
    CHECK_THROWS_AS(parse_layout(R"({"name": "x"})"), LayoutError);
    CHECK_THROWS_AS(parse_layout(R"({"version": 1, "stations": [{"name": "a", "kind": "oven"}]})"), LayoutError);
}

TEST_CASE("default names") {
    CHECK(default_buffer_name("A", "B") == "Buffer_A_to_B");
    PoolSpec pool;
    pool.stations = {"P1", "P2"};
    pool.workers = 3;
    CHECK(initial_assignment(pool) == std::vector<std::string>{"P1", "P2", "P1"});
    CHECK(station_kind_from_string(to_string(StationKind::switch_)) == StationKind::switch_);
}
