#pragma once

// Cost model, aggregated production value and per-step rewards.

#include <cstdint>
#include <vector>

#include "flowline/line.hpp"

namespace flowline {

struct CostModel {
    std::vector<double> station_costs;  // c_i, indexed like the layout's stations
    double T_C = 1.0;                   // minimal time per part
    double T_sim = 4000.0;              // normalizer

    /// c = sum of c_i.
    [[nodiscard]] double part_value() const;
    /// Throws std::invalid_argument on negative costs or non-positive T_C / T_sim.
    void check() const;
};

/// c_i = 1 at sources, 0 elsewhere; T_C = largest processing minimum.
CostModel default_cost_model(const LayoutSpec& layout, double T_sim);

/// Slowest station's minimal cycle contribution.
double bottleneck_minimum(const LayoutSpec& layout);

/// C = (T_C / T_sim) * (c * n_ok - w * sum_i c_i * nok_by_origin[i]).
double aggregate_value(const CostModel& costs, std::uint64_t n_ok, const std::vector<std::uint64_t>& nok_by_origin,
                       double scrap_weight);

class RewardLedger {
public:
    RewardLedger(CostModel costs, std::size_t n_stations, double scrap_weight = 1.0);

    /// Pulls the line's counters; returns C(now) - C(previous boundary).
    double record(const Line& line);

    [[nodiscard]] double value() const;
    [[nodiscard]] std::uint64_t n_ok() const { return n_ok_; }
    [[nodiscard]] std::uint64_t n_nok_total() const;
    [[nodiscard]] const std::vector<std::uint64_t>& nok_by_origin() const { return nok_by_origin_; }
    [[nodiscard]] const std::vector<std::uint64_t>& nok_by_station() const { return nok_by_station_; }
    [[nodiscard]] const std::vector<double>& history() const { return history_; }
    [[nodiscard]] const CostModel& costs() const { return costs_; }
    [[nodiscard]] double scrap_weight() const { return scrap_weight_; }

private:
    CostModel costs_;
    double scrap_weight_;
    std::uint64_t n_ok_ = 0;
    std::vector<std::uint64_t> nok_by_origin_;
    std::vector<std::uint64_t> nok_by_station_;
    std::vector<double> history_;  // C at every recorded boundary, starting with C(0) = 0
};

/// R(t) = C(T_step (t+1)) - C(T_step t) for a recorded history.
double step_reward(const RewardLedger& ledger, std::size_t step);

/// Effective minimal cycle time: the minimum scaled by the best worker count
/// the station can ever see.
double effective_minimum(const Line& line, std::uint32_t station);

/// OEE_i(t) = (T_i / t) * n_ok(t, i) with T_i the effective minimum.
double oee(const Line& line, std::uint32_t station, SimTime t);

}  // namespace flowline
