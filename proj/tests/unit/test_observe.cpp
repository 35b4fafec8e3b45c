#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flowline/observe.hpp"
#include "flowline/scenarios.hpp"
#include "helpers.hpp"

using namespace flowline;

namespace {

ActionErrorKind error_kind(const SpaceDescriptors& spaces, const ActionCommand& cmd) {
    try {
        validate_command(spaces, cmd);
    } catch (const ActionError& e) {
        return e.kind();
    }
    FAIL("command was accepted");
    return ActionErrorKind::unknown_object;
}

}  // namespace

TEST_CASE("WT exposes one actionable numeric: the component source waiting time") {
    Line line(make_wt().layout, 0);
    const auto spaces = space_descriptors(line);
    REQUIRE(spaces.action.size() == 1);
    CHECK(spaces.action[0].full_name() == "S_C.waiting_time");
    CHECK(spaces.action[0].kind == StateKind::numeric);
    CHECK(spaces.action[0].upper == 100.0);
}

TEST_CASE("catalog of the WT line") {
    Line line(make_wt().layout, 0);
    const auto spaces = space_descriptors(line);
    std::vector<std::string> names;
    for (const auto& d : spaces.observation) names.push_back(d.full_name());
    const std::vector<std::string> expected{
        "S_M.mode",  "S_M.n_ok",           "S_M.processing_time", "S_M.waiting_time",
        "S_C.mode",  "S_C.n_ok",           "S_C.processing_time", "S_C.waiting_time",
        "A.mode",    "A.n_nok",            "A.n_ok",              "A.processing_time",
        "Sink.mode", "Sink.n_ok",          "Sink.processing_time", "Buffer_S_M_to_A.fill",
        "Buffer_S_C_to_A.fill", "Buffer_A_to_Sink.fill"};
    CHECK(names == expected);
}

TEST_CASE("switch exposes its buffer indices as actionable discretes") {
    Line line(make_pd(3).layout, 0);
    const auto spaces = space_descriptors(line);
    const auto* out = spaces.find("SwitchIn", "index_buffer_out");
    REQUIRE(out != nullptr);
    CHECK(out->actionable);
    CHECK(out->kind == StateKind::discrete);
    CHECK(out->labels == std::vector<std::string>{"Buffer_SwitchIn_to_P1", "Buffer_SwitchIn_to_P2",
                                                  "Buffer_SwitchIn_to_P3"});
    const auto* in = spaces.find("SwitchOut", "index_buffer_in");
    REQUIRE(in != nullptr);
    CHECK(in->labels.size() == 3);
    for (const auto& d : spaces.action) {
        CHECK((d.name == "index_buffer_in" || d.name == "index_buffer_out"));
    }
}

TEST_CASE("actionables are drawn from the allowed set") {
    for (const auto& sc : {make_wt(), make_pd(5), make_wa(4, 12), make_cl(3)}) {
        Line line(sc.layout, 0);
        for (const auto& d : space_descriptors(line).action) {
            const bool allowed = d.name == "waiting_time" || d.name == "station" || d.name == "index_buffer_in" ||
                                 d.name == "index_buffer_out" || d.name == "on";
            CHECK(allowed);
        }
    }
}

TEST_CASE("line without actionables") {
    Line line(testing::chain(1.0, 1.0, 1.0), 0);
    CHECK(space_descriptors(line).action.empty());
}

TEST_CASE("workers expose their station") {
    Line line(make_wa(3, 9).layout, 0);
    const auto spaces = space_descriptors(line);
    const auto* w = spaces.find("Pool_W0", "station");
    REQUIRE(w != nullptr);
    CHECK(w->labels == std::vector<std::string>{"P1", "P2", "P3"});
    CHECK(spaces.find("P2", "n_workers") != nullptr);
    const auto obs = snapshot(line, spaces);
    CHECK(obs.at("P1.n_workers") + obs.at("P2.n_workers") + obs.at("P3.n_workers") == 9.0);
}

TEST_CASE("fills and lagged processing times") {
    Line line(testing::chain(1.0, 1000.0, 1.0, 4), 0);
    const auto spaces = space_descriptors(line);
    auto obs = snapshot(line, spaces);
    CHECK(obs.at("P.processing_time") == 0.0);
    const auto pos = std::find(obs.names.begin(), obs.names.end(), "P.processing_time") - obs.names.begin();
    CHECK_FALSE(obs.valid[static_cast<std::size_t>(pos)]);

    line.run_until(3.5);
    obs = snapshot(line, spaces);
    CHECK(obs.at("Buffer_Source_to_P.fill") == 0.5);
    CHECK(obs.at("Source.processing_time") == 1.0);
    CHECK(obs.timestamp == 3.5);
    for (std::size_t i = 0; i < obs.values.size(); ++i) {
        if (obs.names[i].ends_with(".fill")) {
            CHECK(obs.values[i] >= 0.0);
            CHECK(obs.values[i] <= 1.0);
        }
    }
}

TEST_CASE("assembly processing time settles near its mean") {
    Line line(make_wt().layout, 2);
    const auto spaces = space_descriptors(line);
    double sum = 0.0;
    int n = 0;
    double last_count = 0.0;
    for (int t = 100; t <= 4000; ++t) {
        line.run_until(t);
        const auto obs = snapshot(line, spaces);
        if (obs.at("A.n_ok") > last_count) {
            last_count = obs.at("A.n_ok");
            sum += obs.at("A.processing_time");
            ++n;
        }
    }
    REQUIRE(n > 100);
    CHECK(sum / n == doctest::Approx(22.0).epsilon(0.05));
}

TEST_CASE("masked entries are absent") {
    Line line(make_wt().layout, 0);
    const auto full = space_descriptors(line);
    const auto masked = space_descriptors(line, {"A.processing_time", "Buffer_S_C_to_A.fill"});
    CHECK(masked.observation.size() + 2 == full.observation.size());
    CHECK(masked.states.size() == full.states.size());
    const auto obs = snapshot(line, masked);
    CHECK_FALSE(obs.find("A.processing_time").has_value());
    CHECK_THROWS_AS(static_cast<void>(obs.at("A.processing_time")), std::out_of_range);
}

TEST_CASE("ordering is stable across builds") {
    Line a(make_cl(3).layout, 1);
    Line b(make_cl(3).layout, 99);
    const auto sa = space_descriptors(a);
    const auto sb = space_descriptors(b);
    REQUIRE(sa.observation.size() == sb.observation.size());
    for (std::size_t i = 0; i < sa.observation.size(); ++i) {
        CHECK(sa.observation[i].full_name() == sb.observation[i].full_name());
    }
}

TEST_CASE("command errors") {
    Line line(make_pd(3).layout, 0);
    const auto spaces = space_descriptors(line);
    CHECK(error_kind(spaces, {{"Nope", {{"index_buffer_out", 0}}}}) == ActionErrorKind::unknown_object);
    CHECK(error_kind(spaces, {{"SwitchIn", {{"speed", 0}}}}) == ActionErrorKind::unknown_state);
    CHECK(error_kind(spaces, {{"P1", {{"n_ok", 3}}}}) == ActionErrorKind::not_actionable);
    CHECK(error_kind(spaces, {{"SwitchIn", {{"index_buffer_out", 3}}}}) == ActionErrorKind::out_of_range);
    CHECK(error_kind(spaces, {{"SwitchIn", {{"index_buffer_out", 0.5}}}}) == ActionErrorKind::out_of_range);
    CHECK(error_kind(spaces, {{"SwitchIn", {{"index_buffer_out", std::nan("")}}}}) == ActionErrorKind::out_of_range);

    Line wt(make_wt().layout, 0);
    const auto wt_spaces = space_descriptors(wt);
    CHECK(error_kind(wt_spaces, {{"S_C", {{"waiting_time", -1.0}}}}) == ActionErrorKind::out_of_range);
    CHECK(error_kind(wt_spaces, {{"S_C", {{"waiting_time", 100.5}}}}) == ActionErrorKind::out_of_range);
    CHECK(error_kind(wt_spaces, {{"S_M", {{"waiting_time", 1.0}}}}) == ActionErrorKind::not_actionable);
}

TEST_CASE("a rejected command changes nothing") {
    Line line(make_pd(3).layout, 0);
    const auto spaces = space_descriptors(line);
    const ActionCommand cmd{{"SwitchIn", {{"index_buffer_out", 2}}}, {"SwitchOut", {{"index_buffer_in", 7}}}};
    CHECK_THROWS_AS(apply(line, spaces, cmd), ActionError);
    CHECK(line.station("SwitchIn").out_index == 0);
}

TEST_CASE("apply reaches the line") {
    Line line(make_wa(3, 9).layout, 0);
    const auto spaces = space_descriptors(line);
    apply(line, spaces, {{"Pool_W0", {{"station", 2}}}});
    const auto* d = spaces.find("Pool_W0", "station");
    CHECK(current_value(line, *d) == 2.0);
    CHECK(line.station("P3").workers_assigned == 4);

    Line wt(make_wt().layout, 0);
    const auto wt_spaces = space_descriptors(wt);
    apply(wt, wt_spaces, {{"S_C", {{"waiting_time", 18.5}}}});
    CHECK(wt.station("S_C").waiting_time == 18.5);
}
