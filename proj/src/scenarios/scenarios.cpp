#include "flowline/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace flowline {

namespace {

StationSpec station(std::string name, StationKind kind, Distribution processing) {
    StationSpec s;
    s.name = std::move(name);
    s.kind = kind;
    s.processing = processing;
    return s;
}

BufferSpec buffer(std::string from, std::string to, int capacity, double traversal, double get_time = 0.0,
                  double put_time = 0.0, bool component = false) {
    BufferSpec b;
    b.from = std::move(from);
    b.to = std::move(to);
    b.capacity = capacity;
    b.traversal_time = traversal;
    b.get_time = Distribution{get_time, 0.0};
    b.put_time = Distribution{put_time, 0.0};
    b.component = component;
    return b;
}

void require_k(int k) {
    if (k < 2) throw std::invalid_argument("scenario needs k >= 2");
}

std::vector<std::string> expand_partition(const std::vector<int>& partition, const std::vector<std::string>& stations,
                                          int workers) {
    if (partition.empty()) return {};
    if (partition.size() != stations.size()) throw std::invalid_argument("partition length does not match k");
    int total = 0;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (partition[i] < 0) throw std::invalid_argument("partition entries must be non-negative");
        total += partition[i];
        for (int n = 0; n < partition[i]; ++n) out.push_back(stations[i]);
    }
    if (total != workers) throw std::invalid_argument("partition does not sum to the worker count");
    return out;
}

LayoutSpec wt_layout(const WtParameters& p, const std::string& name) {
    LayoutSpec layout;
    layout.name = name;

    auto s_m = station("S_M", StationKind::source, p.source_main);
    s_m.carrier_capacity = 2;

    auto s_c = station("S_C", StationKind::source, p.source_component);
    s_c.actionable_waiting_time = true;
    s_c.waiting_time = p.waiting_time;
    s_c.part_specs = {PartSpec{p.assembly_condition}};

    auto a = station("A", StationKind::assembly, p.assembly);
    a.nok_error_time = p.nok_error_time;

    layout.stations = {s_m, s_c, a, station("Sink", StationKind::sink, p.sink)};
    layout.buffers = {
        buffer("S_M", "A", p.capacity_main, p.traversal_main, p.get_time, p.put_time),
        buffer("S_C", "A", p.capacity_component, p.traversal_component, p.get_time, p.put_time, true),
        buffer("A", "Sink", p.capacity_out, p.traversal_out, p.get_time, p.put_time),
    };
    return layout;
}

Scenario finish(std::string name, ScenarioConfig config, LayoutSpec layout, double T_sim) {
    validate(layout);
    Scenario sc;
    sc.name = std::move(name);
    sc.config = std::move(config);
    sc.config.T_sim = T_sim;
    sc.costs = default_cost_model(layout, T_sim);
    sc.layout = std::move(layout);
    return sc;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::wt: return "WT";
        case ScenarioKind::wtj: return "WTJ";
        case ScenarioKind::pd: return "PD";
        case ScenarioKind::wa: return "WA";
        case ScenarioKind::cl: return "CL";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (auto kind : {ScenarioKind::wt, ScenarioKind::wtj, ScenarioKind::pd, ScenarioKind::wa, ScenarioKind::cl}) {
        if (to_string(kind) == upper) return kind;
    }
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

std::vector<double> pd_minima(int k) {
    std::vector<double> out;
    for (int i = 1; i <= k; ++i) out.push_back(10.0 * (i + 1));
    return out;
}

std::vector<double> wa_minima(int k) {
    std::vector<double> out;
    for (int i = 1; i <= k; ++i) out.push_back(16.0 + 4.0 * i);
    return out;
}

double wt_handling_time(const WtParameters& params) {
    return 2.0 * params.get_time + params.put_time;
}

double jump_factor(double T_jump, double R, double T, double S, double E, double T_sim) {
    const double denom = (R - 1.0) * T_sim + T_jump;
    if (denom <= 0.0) {
        throw std::invalid_argument("jump window too short for the requested R: (R - 1) T_sim + T_jump <= 0");
    }
    return (T_jump * (T + S + E) / denom - S - E) / T;
}

JumpProfile sample_jump_profile(double R, std::uint64_t seed, const WtParameters& params, double T_sim) {
    RandomStream stream(seed, "scenario");
    JumpProfile profile;
    profile.T_trigger = stream.uniform(500.0, 1500.0);
    profile.T_jump = stream.uniform(1600.0, 2000.0);
    if (profile.T_trigger + profile.T_jump > T_sim) {
        throw std::invalid_argument("jump window does not fit into the episode");
    }
    profile.factor = jump_factor(profile.T_jump, R, params.assembly.minimum, params.assembly.exp_mean,
                                 wt_handling_time(params), T_sim);
    return profile;
}

Distribution jumped_processing_time(const JumpProfile& profile, const Distribution& base, SimTime t) {
    if (t >= profile.T_trigger && t <= profile.T_trigger + profile.T_jump) {
        return Distribution{profile.factor * base.minimum, base.exp_mean};
    }
    return base;
}

Scenario make_wt(const WtParameters& params, double T_sim) {
    ScenarioConfig config;
    config.kind = ScenarioKind::wt;
    config.wt = params;
    return finish("WT", config, wt_layout(params, "WT"), T_sim);
}

Scenario make_wtj(double R, std::uint64_t seed, const WtParameters& params, double T_sim) {
    if (!(R > 0.5 && R < 1.0)) throw std::invalid_argument("WTJ needs 0.5 < R < 1");
    ScenarioConfig config;
    config.kind = ScenarioKind::wtj;
    config.R = R;
    config.wt = params;
    auto layout = wt_layout(params, "WTJ");
    const auto profile = sample_jump_profile(R, seed, params, T_sim);
    for (auto& s : layout.stations) {
        if (s.name == "A") s.speed_window = profile.window();
    }
    auto sc = finish("WTJ", config, std::move(layout), T_sim);
    sc.jump = profile;
    return sc;
}

Scenario make_pd(int k, const PdParameters& params, double T_sim) {
    require_k(k);
    ScenarioConfig config;
    config.kind = ScenarioKind::pd;
    config.k = k;
    config.pd = params;

    LayoutSpec layout;
    layout.name = "PD_" + std::to_string(k);
    layout.stations.push_back(station("Source", StationKind::source, params.source));
    layout.stations.push_back(station("SwitchIn", StationKind::switch_, params.switch_time));
    layout.buffers.push_back(buffer("Source", "SwitchIn", params.capacity, params.traversal_time));
    const auto minima = pd_minima(k);
    for (int i = 0; i < k; ++i) {
        const std::string name = "P" + std::to_string(i + 1);
        layout.stations.push_back(
            station(name, StationKind::process, Distribution{minima[i], params.relative_spread * minima[i]}));
        layout.buffers.push_back(buffer("SwitchIn", name, params.capacity, params.traversal_time));
    }
    layout.stations.push_back(station("SwitchOut", StationKind::switch_, params.switch_time));
    for (int i = 0; i < k; ++i) {
        layout.buffers.push_back(buffer("P" + std::to_string(i + 1), "SwitchOut", params.capacity, params.traversal_time));
    }
    layout.stations.push_back(station("Sink", StationKind::sink, params.sink));
    layout.buffers.push_back(buffer("SwitchOut", "Sink", params.capacity, params.traversal_time));
    return finish("PD", config, std::move(layout), T_sim);
}

Scenario make_wa(int k, int workers, const WaParameters& params, double T_sim) {
    require_k(k);
    if (workers <= 0) workers = 3 * k;
    ScenarioConfig config;
    config.kind = ScenarioKind::wa;
    config.k = k;
    config.workers = workers;
    config.wa = params;

    LayoutSpec layout;
    layout.name = "WA_" + std::to_string(k) + "_" + std::to_string(workers);
    layout.stations.push_back(station("Source", StationKind::source, params.source));
    std::string previous = "Source";
    std::vector<std::string> names;
    const auto minima = wa_minima(k);
    for (int i = 0; i < k; ++i) {
        const std::string name = "P" + std::to_string(i + 1);
        auto s = station(name, StationKind::process, Distribution{minima[i], params.relative_spread});
        s.performance_coefficient = params.performance_coefficient;
        layout.stations.push_back(s);
        layout.buffers.push_back(buffer(previous, name, params.capacity, params.traversal_time));
        names.push_back(name);
        previous = name;
    }
    layout.stations.push_back(station("Sink", StationKind::sink, params.sink));
    layout.buffers.push_back(buffer(previous, "Sink", params.capacity, params.traversal_time));

    PoolSpec pool;
    pool.name = "Pool";
    pool.stations = names;
    pool.workers = workers;
    pool.traversal_time = params.worker_traversal_time;
    pool.initial_assignment = expand_partition(params.partition, names, workers);
    layout.pools.push_back(pool);

    auto sc = finish("WA", config, std::move(layout), T_sim);
    // The line cannot beat its slowest station when every worker is there.
    sc.costs.T_C = *std::max_element(minima.begin(), minima.end());
    return sc;
}

Scenario make_cl(int k, const ClParameters& params, int workers, double T_sim) {
    require_k(k);
    if (workers <= 0) workers = 3 * k;
    ScenarioConfig config;
    config.kind = ScenarioKind::cl;
    config.k = k;
    config.workers = workers;
    config.cl = params;

    LayoutSpec layout;
    layout.name = "CL_" + std::to_string(k);
    auto s_m = station("S_M", StationKind::source, params.source_main);
    s_m.carrier_capacity = k + 1;
    auto s_c = station("S_C", StationKind::source, params.source_component);
    s_c.actionable_waiting_time = true;
    s_c.waiting_time = params.waiting_time;
    s_c.part_specs = {PartSpec{params.assembly_condition}};
    layout.stations = {s_m, s_c, station("Switch", StationKind::switch_, params.switch_time)};
    layout.buffers.push_back(buffer("S_C", "Switch", params.capacity_component, params.traversal_time,
                                    params.get_time, params.put_time));

    std::vector<std::string> names;
    std::string previous = "S_M";
    for (int i = 0; i < k; ++i) {
        const std::string name = "A" + std::to_string(i + 1);
        auto a = station(name, StationKind::assembly,
                         Distribution{params.assembly_minimum, params.relative_spread});
        a.performance_coefficient = params.performance_coefficient;
        a.nok_error_time = params.nok_error_time;
        layout.stations.push_back(a);
        layout.buffers.push_back(buffer(previous, name, params.capacity_main, params.traversal_time,
                                        params.get_time, params.put_time));
        layout.buffers.push_back(buffer("Switch", name, params.capacity_component, params.traversal_time,
                                        params.get_time, params.put_time, true));
        names.push_back(name);
        previous = name;
    }
    layout.stations.push_back(station("Sink", StationKind::sink, params.sink));
    layout.buffers.push_back(
        buffer(previous, "Sink", params.capacity_main, params.traversal_time, params.get_time, params.put_time));

    PoolSpec pool;
    pool.name = "Pool";
    pool.stations = names;
    pool.workers = workers;
    pool.traversal_time = params.worker_traversal_time;
    pool.initial_assignment = expand_partition(params.partition, names, workers);
    layout.pools.push_back(pool);

    auto sc = finish("CL", config, std::move(layout), T_sim);
    sc.scrap_weight = 1.0 / k;
    return sc;
}

Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    Scenario sc;
    switch (config.kind) {
        case ScenarioKind::wt: sc = make_wt(config.wt, config.T_sim); break;
        case ScenarioKind::wtj: sc = make_wtj(config.R, seed, config.wt, config.T_sim); break;
        case ScenarioKind::pd: sc = make_pd(config.k, config.pd, config.T_sim); break;
        case ScenarioKind::wa: sc = make_wa(config.k, config.workers, config.wa, config.T_sim); break;
        case ScenarioKind::cl: sc = make_cl(config.k, config.cl, config.workers, config.T_sim); break;
    }
    const double weight = sc.scrap_weight;
    sc.config = config;
    if (sc.config.workers <= 0 && (config.kind == ScenarioKind::wa || config.kind == ScenarioKind::cl)) {
        sc.config.workers = 3 * config.k;
    }
    sc.scrap_weight = config.scrap_weight.value_or(weight);
    return sc;
}

}  // namespace flowline
