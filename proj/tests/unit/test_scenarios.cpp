#include <doctest.h>

#include <cmath>

#include "flowline/line.hpp"
#include "flowline/scenarios.hpp"

using namespace flowline;

namespace {

const StationSpec& find(const LayoutSpec& l, const std::string& name) {
    for (const auto& s : l.stations) {
        if (s.name == name) return s;
    }
    throw std::invalid_argument(name);
}

}  // namespace

TEST_CASE("WT parameters") {
    const auto sc = make_wt();
    const auto& a = find(sc.layout, "A");
    CHECK(a.processing == Distribution{20.0, 2.0});
    const auto& s_c = find(sc.layout, "S_C");
    CHECK(s_c.processing == Distribution{5.0, 0.5});
    REQUIRE(s_c.part_specs.size() == 1);
    CHECK(s_c.part_specs[0].assembly_condition == 35.0);
    CHECK(s_c.actionable_waiting_time);
    CHECK(sc.scrap_weight == 1.0);
    CHECK(sc.costs.T_sim == 4000.0);
    CHECK_FALSE(sc.jump.has_value());
}

TEST_CASE("PD minima") {
    CHECK(pd_minima(3) == std::vector<double>{20.0, 30.0, 40.0});
    const auto sc = make_pd(3);
    CHECK(find(sc.layout, "P2").processing == Distribution{30.0, 3.0});
    CHECK(find(sc.layout, "SwitchIn").processing.minimum == 1.0);
    CHECK(sc.layout.stations.size() == 7);
    CHECK(sc.layout.buffers.size() == 8);
    CHECK_THROWS_AS(make_pd(1), std::invalid_argument);
}

TEST_CASE("WA minima and pool") {
    CHECK(wa_minima(3) == std::vector<double>{20.0, 24.0, 28.0});
    const auto sc = make_wa(3, 9);
    CHECK(find(sc.layout, "P3").performance_coefficient == 0.3);
    REQUIRE(sc.layout.pools.size() == 1);
    CHECK(sc.layout.pools[0].workers == 9);
    CHECK(make_wa(4, 0).layout.pools[0].workers == 12);
    CHECK(sc.costs.T_C == 28.0);

    WaParameters p;
    p.partition = {2, 3, 4};
    Line line(make_wa(3, 9, p).layout, 0);
    CHECK(line.station("P1").workers_present == 2);
    CHECK(line.station("P3").workers_present == 4);
    p.partition = {2, 3, 3};
    CHECK_THROWS_AS(make_wa(3, 9, p), std::invalid_argument);
}

TEST_CASE("CL layout") {
    const auto sc = make_cl(3);
    CHECK(sc.scrap_weight == doctest::Approx(1.0 / 3.0));
    Line line(sc.layout, 0);
    const auto& sw = line.station("Switch");
    CHECK(sw.outputs.size() == 3);
    CHECK(line.station("A2").components.size() == 1);
    CHECK(line.find_buffer("Buffer_A1_to_A2").has_value());
    CHECK(line.find_buffer("Buffer_A3_to_Sink").has_value());
    CHECK(line.workers().size() == 9);
}

TEST_CASE("scenario config dispatch") {
    ScenarioConfig c;
    c.kind = ScenarioKind::pd;
    c.k = 4;
    CHECK(make_scenario(c).layout.name == "PD_4");
    c.kind = ScenarioKind::cl;
    c.scrap_weight = 0.25;
    CHECK(make_scenario(c).scrap_weight == 0.25);
    CHECK(scenario_kind_from_string("wtj") == ScenarioKind::wtj);
    CHECK_THROWS_AS(scenario_kind_from_string("XY"), std::invalid_argument);
}

TEST_CASE("jump factor") {
    CHECK(jump_factor(1800.0, 0.75, 20.0, 2.0, 2.0, 4000.0) == doctest::Approx(2.5));
    // f puts the expected part count at R N
    for (double R : {0.6, 0.75, 0.9}) {
        for (double T_jump : {1700.0, 1850.0, 2000.0}) {
            const double f = jump_factor(T_jump, R, 20.0, 2.0, 2.0, 4000.0);
            const double parts = (4000.0 - T_jump) / 24.0 + T_jump / (f * 20.0 + 4.0);
            CHECK(parts == doctest::Approx(R * 4000.0 / 24.0));
        }
    }
    CHECK(jump_factor(1800.0, 1.0, 20.0, 2.0, 2.0, 4000.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(jump_factor(900.0, 0.75, 20.0, 2.0, 2.0, 4000.0), std::invalid_argument);
}

TEST_CASE("jump profile sampling") {
    bool differs = false;
    const auto first = sample_jump_profile(0.75, 0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = sample_jump_profile(0.75, seed);
        CHECK(p.T_trigger >= 500.0);
        CHECK(p.T_trigger < 1500.0);
        CHECK(p.T_jump >= 1600.0);
        CHECK(p.T_jump < 2000.0);
        CHECK(p.factor > 1.0);
        differs |= p.T_trigger != first.T_trigger;
    }
    CHECK(differs);
    CHECK(sample_jump_profile(0.75, 7).T_jump == sample_jump_profile(0.75, 7).T_jump);

    const auto sc = make_wtj(0.75, 7);
    REQUIRE(sc.jump.has_value());
    REQUIRE(find(sc.layout, "A").speed_window.has_value());
    CHECK(find(sc.layout, "A").speed_window->factor == sc.jump->factor);
    CHECK_THROWS_AS(make_wtj(0.4, 1), std::invalid_argument);
}

TEST_CASE("jumped processing time") {
    const JumpProfile p{1000.0, 1800.0, 2.5};
    const Distribution base{20.0, 2.0};
    CHECK(jumped_processing_time(p, base, 999.0) == base);
    CHECK(jumped_processing_time(p, base, 1000.0) == Distribution{50.0, 2.0});
    CHECK(jumped_processing_time(p, base, 2800.0) == Distribution{50.0, 2.0});
    CHECK(jumped_processing_time(p, base, 2801.0) == base);
}

TEST_CASE("handling time") {
    CHECK(wt_handling_time(WtParameters{}) == 2.0);
}
