#pragma once

// Benchmark scenario factories: WT, WTJ, PD_k, WA_{k,N} and CL_k.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowline/layout.hpp"
#include "flowline/scoring.hpp"

namespace flowline {

enum class ScenarioKind { wt, wtj, pd, wa, cl };

std::string_view to_string(ScenarioKind kind);
/// Accepts "WT", "WTJ", "PD", "WA", "CL" (case-insensitive).
ScenarioKind scenario_kind_from_string(std::string_view name);

struct WtParameters {
    Distribution assembly{20.0, 2.0};
    Distribution source_component{5.0, 0.5};
    Distribution source_main{5.0, 0.5};
    Distribution sink{1.0, 0.0};
    double get_time = 1.0;
    double put_time = 0.0;
    double traversal_component = 0.0;  // S_C -> A
    double traversal_main = 2.0;       // S_M -> A
    double traversal_out = 2.0;        // A -> sink
    int capacity_component = 2;
    int capacity_main = 2;
    int capacity_out = 3;
    std::optional<double> assembly_condition = 35.0;  // T_AC
    double nok_error_time = 5.0;
    double waiting_time = 0.0;  // initial waiting time at S_C
};

struct PdParameters {
    double relative_spread = 0.1;  // S_i
    Distribution source{1.0, 0.0};
    Distribution switch_time{1.0, 0.0};
    Distribution sink{1.0, 0.0};
    int capacity = 2;
    double traversal_time = 1.0;
};

struct WaParameters {
    double relative_spread = 0.1;  // S_i
    double performance_coefficient = 0.3;
    Distribution source{1.0, 0.0};
    Distribution sink{1.0, 0.0};
    int capacity = 2;
    double traversal_time = 1.0;
    double worker_traversal_time = 5.0;
    std::vector<int> partition;  // initial workers per station; empty means round-robin
};

struct ClParameters {
    double assembly_minimum = 20.0;
    double relative_spread = 0.1;
    double performance_coefficient = 0.3;
    Distribution source_component{1.0, 0.1};
    Distribution source_main{1.0, 0.1};
    Distribution switch_time{1.0, 0.0};
    Distribution sink{1.0, 0.0};
    double get_time = 1.0;
    double put_time = 0.0;
    double traversal_time = 2.0;
    int capacity_component = 2;  // switch -> assembly component buffers
    int capacity_main = 2;       // main track between assemblies
    std::optional<double> assembly_condition = 40.0;
    double nok_error_time = 5.0;
    double waiting_time = 0.0;
    double worker_traversal_time = 5.0;
    std::vector<int> partition;
};

struct JumpProfile {
    double T_trigger = 0.0;
    double T_jump = 0.0;
    double factor = 1.0;

    [[nodiscard]] SpeedWindow window() const { return {T_trigger, T_trigger + T_jump, factor}; }
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::wt;
    int k = 3;
    int workers = 0;  // WA/CL pool size; 0 means 3k
    double R = 0.75;  // WTJ
    double T_sim = 4000.0;
    double T_step = 1.0;
    std::optional<double> scrap_weight;  // defaults: 1 (CL: 1/k)

    WtParameters wt;
    PdParameters pd;
    WaParameters wa;
    ClParameters cl;
};

struct Scenario {
    std::string name;
    ScenarioConfig config;
    LayoutSpec layout;
    CostModel costs;
    double scrap_weight = 1.0;
    std::optional<JumpProfile> jump;
};

/// Builds the scenario; `seed` drives the scenario-level stream (WTJ window).
Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed = 0);

Scenario make_wt(const WtParameters& params = {}, double T_sim = 4000.0);
Scenario make_wtj(double R, std::uint64_t seed, const WtParameters& params = {}, double T_sim = 4000.0);
Scenario make_pd(int k, const PdParameters& params = {}, double T_sim = 4000.0);
Scenario make_wa(int k, int workers, const WaParameters& params = {}, double T_sim = 4000.0);
Scenario make_cl(int k, const ClParameters& params = {}, int workers = 0, double T_sim = 4000.0);

/// Minima of the k parallel processes in PD_k: 10 (i + 1), i = 1..k.
std::vector<double> pd_minima(int k);
/// Minima of the k stations in WA_{k,N}: 16 + 4 i, i = 1..k.
std::vector<double> wa_minima(int k);

/// E[2 T_g + T_p] for the WT assembly cycle.
double wt_handling_time(const WtParameters& params);

/// f such that the expected part count under the jump equals R N.
/// Throws std::invalid_argument when (R - 1) T_sim + T_jump <= 0.
double jump_factor(double T_jump, double R, double T, double S, double E, double T_sim);

/// Draws T_trigger ~ U[500, 1500], T_jump ~ U[1600, 2000] and computes f.
JumpProfile sample_jump_profile(double R, std::uint64_t seed, const WtParameters& params = {}, double T_sim = 4000.0);

/// (T, S) outside the window, (f T, S) inside.
Distribution jumped_processing_time(const JumpProfile& profile, const Distribution& base, SimTime t);

}  // namespace flowline
