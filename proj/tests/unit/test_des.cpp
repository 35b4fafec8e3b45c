#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "flowline/des.hpp"

using namespace flowline;

TEST_CASE("calendar pops in (time, insertion) order") {
    RandomStream rng(7, "calendar");
    EventCalendar cal;
    std::vector<std::tuple<double, std::uint32_t>> expected;
    for (std::uint32_t i = 0; i < 500; ++i) {
        // coarse times force plenty of ties
        const double t = std::floor(rng.uniform(0.0, 50.0));
        cal.schedule(Event{t, 0, i, EventKind::process_complete, 0}, 0.0);
        expected.emplace_back(t, i);
    }
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    for (const auto& [t, target] : expected) {
        const Event e = cal.pop();
        CHECK(e.fire_at == t);
        CHECK(e.target == target);
    }
    CHECK(cal.empty());
}

TEST_CASE("calendar rejects events in the past") {
    EventCalendar cal;
    CHECK_THROWS_AS(cal.schedule(Event{1.0, 0, 0, EventKind::process_complete, 0}, 2.0), std::logic_error);
}

TEST_CASE("boundaries are not simulation events") {
    EventCalendar cal;
    cal.schedule(Event{1.0, 0, 0, EventKind::agent_boundary, 0}, 0.0);
    cal.schedule(Event{2.0, 0, 0, EventKind::process_complete, 0}, 0.0);
    CHECK(cal.size() == 2);
    CHECK(cal.pending_simulation_events() == 1);
    cal.pop();
    CHECK(cal.pending_simulation_events() == 1);
}

TEST_CASE("engine dispatches up to t_end and parks the clock there") {
    Engine engine;
    engine.schedule(EventKind::process_complete, 3.0, 1);
    engine.schedule(EventKind::process_complete, 1.0, 2);
    engine.schedule(EventKind::process_complete, 7.0, 3);
    std::vector<std::uint32_t> seen;
    engine.run_until(5.0, [&](const Event& e) {
        seen.push_back(e.target);
        if (e.target == 2) engine.schedule(EventKind::process_complete, 0.5, 4);
    });
    CHECK(seen == std::vector<std::uint32_t>{2, 4, 1});
    CHECK(engine.now() == 5.0);
    CHECK(engine.calendar().size() == 1);
    CHECK_THROWS(engine.run_until(4.0, [](const Event&) {}));
}

TEST_CASE("streams depend only on seed and label") {
    RandomStream a(42, "station:A");
    RandomStream b(42, "station:A");
    RandomStream c(42, "station:B");
    RandomStream d(43, "station:A");
    bool differs_label = false;
    bool differs_seed = false;
    for (int i = 0; i < 16; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        differs_label |= x != c.uniform();
        differs_seed |= x != d.uniform();
    }
    CHECK(differs_label);
    CHECK(differs_seed);
    CHECK(derive_seed(1, "x") == derive_seed(1, "x"));
    CHECK(derive_seed(1, "x") != derive_seed(1, "y"));
    CHECK(derive_seed(1, std::uint64_t{0}) != derive_seed(1, std::uint64_t{1}));
}

TEST_CASE("uniform draws stay in range") {
    RandomStream s(3, "u");
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform(2.0, 5.0);
        CHECK(u >= 2.0);
        CHECK(u < 5.0);
        CHECK(s.index(7) < 7);
    }
}

TEST_CASE("shifted exponential moments match Monte Carlo") {
    RandomStream s(11, "mc");
    const Distribution d{5.0, 0.5};
    const int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    double lowest = 1e9;
    for (int i = 0; i < n; ++i) {
        const double x = sample_time(d, s);
        sum += x;
        sq += x * x;
        lowest = std::min(lowest, x);
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(d.mean()).epsilon(0.002));
    CHECK(var == doctest::Approx(d.variance()).epsilon(0.03));
    CHECK(lowest >= 5.0);
    CHECK(s.exponential(0.0) == 0.0);
    CHECK(sample_time(Distribution{3.0, 0.0}, s) == 3.0);
}

TEST_CASE("worker law scales the minimum only") {
    CHECK(performance_coefficient(0, 0.3) == 1.0);
    CHECK(performance_coefficient(3, 0.3) == doctest::Approx(std::exp(-0.9)));
    RandomStream s(5, "workers");
    const int n = 100000;
    double sum = 0.0;
    double lowest = 1e9;
    for (int i = 0; i < n; ++i) {
        const double x = sample_worker_time(20.0, 0.1, 3, 0.3, s);
        sum += x;
        lowest = std::min(lowest, x);
    }
    const double floor = 20.0 * std::exp(-0.9);
    CHECK(lowest >= floor);
    CHECK(sum / n == doctest::Approx(floor + 2.0).epsilon(0.005));
}
