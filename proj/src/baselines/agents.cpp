#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "flowline/baselines.hpp"

namespace flowline {

namespace {

struct SwitchView {
    std::string owner;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

std::vector<SwitchView> switches(const SpaceDescriptors& spaces) {
    std::vector<SwitchView> out;
    for (const auto& d : spaces.action) {
        if (d.name == "index_buffer_out") {
            SwitchView v;
            v.owner = d.owner;
            v.outputs = d.labels;
            if (const auto* in = spaces.find(d.owner, "index_buffer_in")) v.inputs = in->labels;
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<double> fills(const Observation& obs, const std::vector<std::string>& buffers) {
    std::vector<double> out;
    for (const auto& b : buffers) out.push_back(obs.find(b + ".fill").value_or(0.0));
    return out;
}

std::size_t argmin_first(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::size_t argmax_first(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

double clamp_to(const SpaceDescriptors& spaces, const std::string& owner, const std::string& state, double value) {
    if (const auto* d = spaces.find(owner, state)) return std::clamp(value, d->lower, d->upper);
    return value;
}

}  // namespace

StaticWaitingAgent::StaticWaitingAgent(double waiting_time, std::string source)
    : waiting_(waiting_time), source_(std::move(source)) {}

ActionCommand StaticWaitingAgent::act(const AgentInput& input) {
    return {{source_, {{"waiting_time", clamp_to(input.spaces, source_, "waiting_time", waiting_)}}}};
}

RollingMeanAgent::RollingMeanAgent(int lookback, const WtParameters& params)
    : lookback_(lookback),
      offset_(2.0 * params.get_time - params.source_component.mean()),
      fallback_(optimal_waiting_time(params)) {
    if (lookback < 1) throw std::invalid_argument("look-back must be at least 1");
}

void RollingMeanAgent::reset(std::uint64_t, const SpaceDescriptors&) {
    window_.clear();
    last_count_ = 0.0;
    waiting_ = fallback_;
}

ActionCommand RollingMeanAgent::act(const AgentInput& input) {
    const auto count = input.observation.find("A.n_ok");
    const auto processing = input.observation.find("A.processing_time");
    if (count && processing && *count > last_count_) {
        last_count_ = *count;
        window_.push_back(*processing);
        if (static_cast<int>(window_.size()) > lookback_) window_.erase(window_.begin());
        const double mean = std::accumulate(window_.begin(), window_.end(), 0.0) / static_cast<double>(window_.size());
        waiting_ = mean + offset_;
    }
    return {{"S_C", {{"waiting_time", clamp_to(input.spaces, "S_C", "waiting_time", waiting_)}}}};
}

ActionCommand GreedySwitchAgent::act(const AgentInput& input) {
    ActionCommand cmd;
    for (const auto& sw : switches(input.spaces)) {
        if (sw.outputs.size() > 1) {
            cmd[sw.owner]["index_buffer_out"] = static_cast<double>(argmin_first(fills(input.observation, sw.outputs)));
        }
        if (sw.inputs.size() > 1) {
            cmd[sw.owner]["index_buffer_in"] = static_cast<double>(argmax_first(fills(input.observation, sw.inputs)));
        }
    }
    return cmd;
}

void RoundRobinAgent::reset(std::uint64_t, const SpaceDescriptors& spaces) {
    const auto n = switches(spaces).size();
    seen_.assign(n, 0);
    in_.assign(n, 0);
    out_.assign(n, 0);
}

ActionCommand RoundRobinAgent::act(const AgentInput& input) {
    ActionCommand cmd;
    const auto views = switches(input.spaces);
    for (std::size_t i = 0; i < views.size(); ++i) {
        const auto& sw = views[i];
        const auto* d = input.spaces.find(sw.owner, "index_buffer_out");
        const auto routed = input.info.station_n_ok.at(d->object_index);
        const auto advanced = routed - seen_[i];
        seen_[i] = routed;
        if (!sw.outputs.empty()) out_[i] = (out_[i] + advanced) % sw.outputs.size();
        if (!sw.inputs.empty()) in_[i] = (in_[i] + advanced) % sw.inputs.size();
        if (sw.outputs.size() > 1) cmd[sw.owner]["index_buffer_out"] = static_cast<double>(out_[i]);
        if (sw.inputs.size() > 1) cmd[sw.owner]["index_buffer_in"] = static_cast<double>(in_[i]);
    }
    return cmd;
}

void RandomAgent::reset(std::uint64_t seed, const SpaceDescriptors&) {
    stream_ = RandomStream(seed, "random-agent");
}

ActionCommand RandomAgent::act(const AgentInput& input) {
    ActionCommand cmd;
    for (const auto& d : input.spaces.action) {
        double value = 0.0;
        if (d.kind == StateKind::discrete) {
            if (d.labels.empty()) continue;
            value = static_cast<double>(stream_.index(d.labels.size()));
        } else {
            value = stream_.uniform(d.lower, d.upper);
        }
        cmd[d.owner][d.name] = value;
    }
    return cmd;
}

ActionCommand RouteFirstAgent::act(const AgentInput& input) {
    ActionCommand cmd;
    for (const auto& sw : switches(input.spaces)) {
        if (sw.outputs.size() > 1) cmd[sw.owner]["index_buffer_out"] = 0.0;
    }
    return cmd;
}

ActionCommand partition_command(const AgentInput& input, const Partition& partition) {
    ActionCommand cmd;
    std::vector<const StateDescriptor*> workers;
    for (const auto& d : input.spaces.action) {
        if (d.object == ObjectKind::worker && d.name == "station") workers.push_back(&d);
    }
    if (workers.empty() || partition.empty()) return cmd;
    const auto& stations = workers.front()->labels;
    if (partition.size() != stations.size()) throw std::invalid_argument("partition length does not match the pool");
    const int total = std::accumulate(partition.begin(), partition.end(), 0);
    std::erase_if(workers, [&](const StateDescriptor* d) { return d->labels != stations; });
    if (total != static_cast<int>(workers.size())) {
        throw std::invalid_argument("partition does not sum to the pool size");
    }

    std::vector<int> current(stations.size(), 0);
    std::vector<int> where(workers.size(), -1);
    for (std::size_t w = 0; w < workers.size(); ++w) {
        const auto v = input.observation.find(workers[w]->full_name());
        if (v) {
            where[w] = static_cast<int>(*v);
            ++current[where[w]];
        }
    }
    // keep workers where the station still needs them, move the rest
    std::vector<int> kept(stations.size(), 0);
    std::vector<std::size_t> movers;
    for (std::size_t w = 0; w < workers.size(); ++w) {
        if (where[w] >= 0 && kept[where[w]] < partition[where[w]]) {
            ++kept[where[w]];
        } else {
            movers.push_back(w);
        }
    }
    std::size_t station = 0;
    for (auto w : movers) {
        while (kept[station] >= partition[station]) ++station;
        ++kept[station];
        cmd[workers[w]->owner]["station"] = static_cast<double>(station);
    }
    return cmd;
}

FixedWorkersAgent::FixedWorkersAgent(Partition partition) : partition_(std::move(partition)) {}

void FixedWorkersAgent::reset(std::uint64_t, const SpaceDescriptors&) {
    placed_ = false;
}

ActionCommand FixedWorkersAgent::act(const AgentInput& input) {
    if (placed_) return {};
    placed_ = true;
    return partition_command(input, partition_);
}

ClHeuristicAgent::ClHeuristicAgent(double waiting_time, Partition partition, int buffer_capacity)
    : waiting_(waiting_time), partition_(std::move(partition)), slot_(1.0 / std::max(1, buffer_capacity)) {}

void ClHeuristicAgent::reset(std::uint64_t, const SpaceDescriptors&) {
    placed_ = false;
}

ActionCommand ClHeuristicAgent::act(const AgentInput& input) {
    ActionCommand cmd;
    if (!placed_) {
        placed_ = true;
        cmd = partition_command(input, partition_);
    }
    for (const auto& d : input.spaces.action) {
        if (d.name == "waiting_time") cmd[d.owner]["waiting_time"] = std::clamp(waiting_, d.lower, d.upper);
    }
    for (const auto& sw : switches(input.spaces)) {
        if (sw.outputs.size() < 2) continue;
        const auto f = fills(input.observation, sw.outputs);
        const double lowest = *std::min_element(f.begin(), f.end());
        std::size_t choice = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] < 1.0 - 1e-9 && f[i] - lowest <= slot_ + 1e-9) choice = i;
        }
        cmd[sw.owner]["index_buffer_out"] = static_cast<double>(choice);
    }
    return cmd;
}

ClHeuristicConfig default_cl_heuristic(int k) {
    ClHeuristicConfig c;
    c.waiting_time = 3.0;
    c.partition.assign(k, 3);
    return c;
}

std::vector<std::string> agent_names() {
    return {"none",   "optimal-wt",  "rolling-mean",  "greedy",     "round-robin",
            "cl-heuristic", "random", "route-first", "fixed-workers", "wa-optimal"};
}

AgentFactory make_agent_factory(const std::string& name, const ScenarioConfig& config, const AgentOptions& options) {
    if (name == "none") return [] { return std::make_unique<NoneAgent>(); };
    if (name == "optimal-wt") {
        const double w = options.waiting_time.value_or(optimal_waiting_time(config.wt));
        return [w] { return std::make_unique<StaticWaitingAgent>(w); };
    }
    if (name == "rolling-mean") {
        const int l = options.lookback;
        const WtParameters params = config.wt;
        return [l, params] { return std::make_unique<RollingMeanAgent>(l, params); };
    }
    if (name == "greedy") return [] { return std::make_unique<GreedySwitchAgent>(); };
    if (name == "round-robin") return [] { return std::make_unique<RoundRobinAgent>(); };
    if (name == "random") return [] { return std::make_unique<RandomAgent>(); };
    if (name == "route-first") return [] { return std::make_unique<RouteFirstAgent>(); };
    if (name == "cl-heuristic") {
        auto defaults = default_cl_heuristic(config.k);
        const double w = options.waiting_time.value_or(defaults.waiting_time);
        const Partition p = options.partition.empty() ? defaults.partition : options.partition;
        const int capacity = config.cl.capacity_component;
        return [w, p, capacity] { return std::make_unique<ClHeuristicAgent>(w, p, capacity); };
    }
    if (name == "fixed-workers") {
        if (options.partition.empty()) throw std::invalid_argument("fixed-workers needs a partition");
        const Partition p = options.partition;
        return [p] { return std::make_unique<FixedWorkersAgent>(p); };
    }
    if (name == "wa-optimal") {
        const auto T = wa_minima(config.k);
        const std::vector<double> S(T.size(), config.wa.relative_spread);
        const int N = config.workers > 0 ? config.workers : 3 * config.k;
        const Partition p = solve_worker_assignment(T, S, N, config.wa.performance_coefficient).partition;
        return [p] { return std::make_unique<FixedWorkersAgent>(p); };
    }
    throw std::invalid_argument("unknown agent '" + name + "'");
}

GridSearchResult grid_search_cl(const ScenarioConfig& config, const std::vector<double>& waiting_grid,
                                const std::vector<Partition>& partitions, const std::vector<std::uint64_t>& seeds,
                                int n_envs) {
    if (waiting_grid.empty() || partitions.empty() || seeds.empty()) {
        throw std::invalid_argument("grid search needs non-empty grids and seeds");
    }
    GridSearchResult result;
    bool first = true;
    const int capacity = config.cl.capacity_component;
    for (const auto& p : partitions) {
        for (double w : waiting_grid) {
            auto factory = [w, p, capacity] { return std::make_unique<ClHeuristicAgent>(w, p, capacity); };
            const auto episodes = vector_run(config, factory, n_envs, 1, seeds);
            GridPoint point;
            point.waiting_time = w;
            point.partition = p;
            for (const auto& e : episodes) {
                point.mean_reward += e.total_reward;
                point.deadlocked = point.deadlocked || e.deadlocked;
            }
            point.mean_reward /= static_cast<double>(episodes.size());
            if (first || point.mean_reward > result.best.mean_reward) {
                result.best = point;
                first = false;
            }
            result.points.push_back(point);
        }
    }
    return result;
}

}  // namespace flowline
