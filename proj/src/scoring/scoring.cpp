#include "flowline/scoring.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace flowline {

double CostModel::part_value() const {
    return std::accumulate(station_costs.begin(), station_costs.end(), 0.0);
}

void CostModel::check() const {
    if (T_C <= 0.0) throw std::invalid_argument("T_C must be positive");
    if (T_sim <= 0.0) throw std::invalid_argument("T_sim must be positive");
    for (double c : station_costs) {
        if (c < 0.0) throw std::invalid_argument("station costs must be non-negative");
    }
}

double bottleneck_minimum(const LayoutSpec& layout) {
    double best = 0.0;
    for (const auto& s : layout.stations) best = std::max(best, s.processing.minimum);
    return best;
}

CostModel default_cost_model(const LayoutSpec& layout, double T_sim) {
    CostModel costs;
    for (const auto& s : layout.stations) costs.station_costs.push_back(s.kind == StationKind::source ? 1.0 : 0.0);
    costs.T_C = bottleneck_minimum(layout);
    if (costs.T_C <= 0.0) costs.T_C = 1.0;
    costs.T_sim = T_sim;
    return costs;
}

double aggregate_value(const CostModel& costs, std::uint64_t n_ok, const std::vector<std::uint64_t>& nok_by_origin,
                       double scrap_weight) {
    double scrap = 0.0;
    for (std::size_t i = 0; i < nok_by_origin.size() && i < costs.station_costs.size(); ++i) {
        scrap += costs.station_costs[i] * static_cast<double>(nok_by_origin[i]);
    }
    return (costs.T_C / costs.T_sim) * (costs.part_value() * static_cast<double>(n_ok) - scrap_weight * scrap);
}

RewardLedger::RewardLedger(CostModel costs, std::size_t n_stations, double scrap_weight)
    : costs_(std::move(costs)),
      scrap_weight_(scrap_weight),
      nok_by_origin_(n_stations, 0),
      nok_by_station_(n_stations, 0),
      history_{0.0} {
    costs_.check();
    if (costs_.station_costs.size() != n_stations) {
        throw std::invalid_argument("cost model does not match the number of stations");
    }
}

double RewardLedger::value() const {
    return aggregate_value(costs_, n_ok_, nok_by_origin_, scrap_weight_);
}

double RewardLedger::record(const Line& line) {
    n_ok_ = line.products_completed();
    nok_by_origin_ = line.nok_by_origin();
    for (std::size_t i = 0; i < nok_by_station_.size(); ++i) nok_by_station_[i] = line.stations()[i].n_nok;
    history_.push_back(value());
    return history_.back() - history_[history_.size() - 2];
}

std::uint64_t RewardLedger::n_nok_total() const {
    return std::accumulate(nok_by_station_.begin(), nok_by_station_.end(), std::uint64_t{0});
}

double step_reward(const RewardLedger& ledger, std::size_t step) {
    const auto& h = ledger.history();
    if (step + 1 >= h.size()) throw std::out_of_range("step boundary not reached yet");
    return h[step + 1] - h[step];
}

double effective_minimum(const Line& line, std::uint32_t station) {
    const Station& st = line.stations().at(station);
    double minimum = st.spec.processing.minimum;
    if (st.spec.performance_coefficient && st.pool) {
        const int n_max = static_cast<int>(line.pools()[*st.pool].workers.size());
        minimum *= performance_coefficient(n_max, *st.spec.performance_coefficient);
    }
    return minimum;
}

double oee(const Line& line, std::uint32_t station, SimTime t) {
    if (t <= 0.0) throw std::invalid_argument("OEE needs t > 0");
    return effective_minimum(line, station) / t * static_cast<double>(line.stations().at(station).n_ok);
}

}  // namespace flowline
