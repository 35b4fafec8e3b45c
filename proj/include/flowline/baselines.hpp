#pragma once

// Closed-form optima and scripted agents for the benchmark scenarios.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flowline/agent.hpp"
#include "flowline/env.hpp"
#include "flowline/scenarios.hpp"

namespace flowline {

using Partition = std::vector<int>;

// ---- closed forms --------------------------------------------------------

/// T_W* = E[T_A + 2 T_g - T_SC].
double optimal_waiting_time(const Distribution& assembly, const Distribution& get_time,
                            const Distribution& source_component);
double optimal_waiting_time(const WtParameters& params);

/// E[max(X, Y)] for independent shifted exponentials X, Y.
double expected_max(const Distribution& x, const Distribution& y);

/// (T_sim - T_->A - T_A->S - T_g - T_S) / E[T_A + 2 T_g + T_p], in expectation.
double expected_max_parts_wt(const WtParameters& params, double T_sim);

struct PartDistribution {
    std::vector<double> shares;  // rho_i
    double expected_total = 0.0;
};

/// rho_i = 1 / sum_j (T_i / T_j); E[N] = sum_i T_sim / ((1 + S_i) T_i).
/// With `closed_form` all S_i must be equal; otherwise rho_i = E[N_i] / E[N].
PartDistribution optimal_part_distribution(const std::vector<double>& T, const std::vector<double>& S,
                                           double T_sim = 4000.0, bool closed_form = true);

struct Assignment {
    Partition partition;
    double objective = 0.0;
};

/// max_i T_i (exp(-c n_i) + S_i).
double assignment_objective(const std::vector<double>& T, const std::vector<double>& S, const Partition& n, double c);

/// Every composition of N into k non-negative parts, in lexicographic order.
std::vector<Partition> enumerate_compositions(int N, int k);
/// Weakly increasing compositions of N into k parts.
std::vector<Partition> enumerate_monotone_partitions(int N, int k);

/// Exhaustive min-max over all compositions; ties go to the lexicographically
/// smallest partition.
Assignment solve_worker_assignment(const std::vector<double>& T, const std::vector<double>& S, int N, double c);

// ---- agents ----------------------------------------------------------------

class NoneAgent : public Agent {
public:
    std::string name() const override { return "none"; }
    ActionCommand act(const AgentInput&) override { return {}; }
};

/// Holds one waiting time at S_C for the whole episode.
class StaticWaitingAgent : public Agent {
public:
    explicit StaticWaitingAgent(double waiting_time, std::string source = "S_C");
    std::string name() const override { return "static-waiting"; }
    ActionCommand act(const AgentInput& input) override;

private:
    double waiting_;
    std::string source_;
};

/// Waiting time = mean of the last l observed assembly processing times
/// + 2 E[T_g] - E[T_SC].
class RollingMeanAgent : public Agent {
public:
    RollingMeanAgent(int lookback, const WtParameters& params = {});
    std::string name() const override { return "rolling-mean"; }
    void reset(std::uint64_t seed, const SpaceDescriptors& spaces) override;
    ActionCommand act(const AgentInput& input) override;
    [[nodiscard]] double current_waiting_time() const { return waiting_; }

private:
    int lookback_;
    double offset_;  // 2 E[T_g] - E[T_SC]
    double fallback_;
    double waiting_ = 0.0;
    double last_count_ = 0.0;
    std::vector<double> window_;
};

/// Pushes to the emptiest output buffer and fetches from the fullest input
/// buffer; ties go to the lowest index.
class GreedySwitchAgent : public Agent {
public:
    std::string name() const override { return "greedy"; }
    ActionCommand act(const AgentInput& input) override;
};

/// Advances each switch's indices by the number of carriers it has routed.
class RoundRobinAgent : public Agent {
public:
    std::string name() const override { return "round-robin"; }
    void reset(std::uint64_t seed, const SpaceDescriptors& spaces) override;
    ActionCommand act(const AgentInput& input) override;

private:
    std::vector<std::uint64_t> seen_;
    std::vector<std::size_t> in_;
    std::vector<std::size_t> out_;
};

/// Uniformly random value for every actionable state at every step.
class RandomAgent : public Agent {
public:
    std::string name() const override { return "random"; }
    void reset(std::uint64_t seed, const SpaceDescriptors& spaces) override;
    ActionCommand act(const AgentInput& input) override;

private:
    RandomStream stream_;
};

/// Sends every carrier to the first output of each switch.
class RouteFirstAgent : public Agent {
public:
    std::string name() const override { return "route-first"; }
    ActionCommand act(const AgentInput& input) override;
};

/// Moves workers once, at the first step, to realize a partition over the
/// pool's stations (only the workers that have to move are reassigned).
ActionCommand partition_command(const AgentInput& input, const Partition& partition);

class FixedWorkersAgent : public Agent {
public:
    explicit FixedWorkersAgent(Partition partition);
    std::string name() const override { return "fixed-workers"; }
    void reset(std::uint64_t seed, const SpaceDescriptors& spaces) override;
    ActionCommand act(const AgentInput& input) override;

private:
    Partition partition_;
    bool placed_ = false;
};

/// Emptiest component buffer first; fills within one slot of the minimum
/// count as tied and the later assembly wins. Workers are placed once at
/// t = 0 and the source waiting time stays fixed.
class ClHeuristicAgent : public Agent {
public:
    ClHeuristicAgent(double waiting_time, Partition partition, int buffer_capacity);
    std::string name() const override { return "cl-heuristic"; }
    void reset(std::uint64_t seed, const SpaceDescriptors& spaces) override;
    ActionCommand act(const AgentInput& input) override;

private:
    double waiting_;
    Partition partition_;
    double slot_;
    bool placed_ = false;
};

/// Default CL heuristic configuration for k assemblies.
struct ClHeuristicConfig {
    double waiting_time = 0.0;
    Partition partition;
};
ClHeuristicConfig default_cl_heuristic(int k);

struct AgentOptions {
    int lookback = 1;
    std::optional<double> waiting_time;
    Partition partition;
};

/// Names: none, optimal-wt, rolling-mean, greedy, round-robin, cl-heuristic,
/// random, route-first, fixed-workers, wa-optimal.
AgentFactory make_agent_factory(const std::string& name, const ScenarioConfig& config,
                                const AgentOptions& options = {});

std::vector<std::string> agent_names();

// ---- CL grid search ----------------------------------------------------------

struct GridPoint {
    double waiting_time = 0.0;
    Partition partition;
    double mean_reward = 0.0;
    bool deadlocked = false;  // any evaluated episode deadlocked
};

struct GridSearchResult {
    GridPoint best;
    std::vector<GridPoint> points;
};

/// Evaluates every (waiting time, partition) pair on the given seeds and
/// returns the best mean reward (first one wins ties).
GridSearchResult grid_search_cl(const ScenarioConfig& config, const std::vector<double>& waiting_grid,
                                const std::vector<Partition>& partitions, const std::vector<std::uint64_t>& seeds,
                                int n_envs = 1);

}  // namespace flowline
