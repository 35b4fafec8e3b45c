#pragma once

// Episodic environment on the T_step grid, episode rollouts, vectorized
// execution, the 5x5 evaluation protocol and the scrap-weight curriculum.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowline/agent.hpp"
#include "flowline/scenarios.hpp"
#include "flowline/scoring.hpp"

namespace flowline {

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

class Environment {
public:
    explicit Environment(ScenarioConfig config, ObservationMask mask = {});

    /// Fresh line from the scenario factory; clock 0.
    Observation reset(std::uint64_t seed);
    /// Applies `cmd`, advances one T_step. Throws std::logic_error when the
    /// episode is over or reset() was never called.
    StepResult step(const ActionCommand& cmd = {});

    [[nodiscard]] const ScenarioConfig& config() const { return config_; }
    [[nodiscard]] const Scenario& scenario() const;
    [[nodiscard]] const Line& line() const;
    [[nodiscard]] Line& line();
    [[nodiscard]] const SpaceDescriptors& spaces() const { return spaces_; }
    [[nodiscard]] const RewardLedger& ledger() const;
    [[nodiscard]] StepInfo info() const;
    [[nodiscard]] Observation observe() const;

    [[nodiscard]] std::uint64_t steps_taken() const { return step_; }
    [[nodiscard]] std::uint64_t horizon() const { return horizon_; }
    [[nodiscard]] bool done() const { return step_ >= horizon_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    /// Takes effect at the next reset.
    void set_scrap_weight(double weight) { config_.scrap_weight = weight; }
    void enable_event_log(bool enabled) { log_events_ = enabled; }

private:
    ScenarioConfig config_;
    ObservationMask mask_;
    std::optional<Scenario> scenario_;
    std::unique_ptr<Line> line_;
    std::optional<RewardLedger> ledger_;
    SpaceDescriptors spaces_;
    std::uint64_t step_ = 0;
    std::uint64_t horizon_ = 0;
    std::uint64_t seed_ = 0;
    bool log_events_ = false;
};

struct EpisodeResult {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t episode = 0;
    double total_reward = 0.0;
    double final_value = 0.0;  // C(T_sim)
    std::uint64_t n_ok = 0;
    std::vector<std::uint64_t> n_nok;  // per station
    std::uint64_t n_nok_total = 0;
    std::vector<double> step_rewards;
    bool deadlocked = false;
    double wall_time = 0.0;  // seconds

    bool operator==(const EpisodeResult& other) const;  // ignores wall_time
};

using StepObserver = std::function<void(const Environment&, const StepResult&)>;

struct RolloutOptions {
    std::uint64_t episode = 0;
    std::optional<std::uint64_t> agent_seed;  // default: derived from the episode seed
    StepObserver observer;
};

/// Full rollout from reset(seed) to done.
EpisodeResult run_episode(Environment& env, Agent& agent, std::uint64_t seed, const RolloutOptions& options = {});

/// Simulation seed used for `episode` of base seed `seed`.
std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode);

/// Runs episodes 0..n_episodes-1 for every seed on n_envs threads. Results are
/// sorted by (seed, episode) and do not depend on n_envs.
std::vector<EpisodeResult> vector_run(const ScenarioConfig& config, const AgentFactory& make_agent, int n_envs,
                                      int n_episodes, const std::vector<std::uint64_t>& seeds);

struct Summary {
    double mean = 0.0;
    double std = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

struct EvaluationReport {
    std::vector<double> evaluation_means;  // one per evaluation round
    Summary summary;                       // over the evaluation means
    std::vector<EpisodeResult> episodes;
};

/// `rounds` evaluations, each the mean reward of `episodes_per_round` episodes.
EvaluationReport evaluate(const ScenarioConfig& config, const AgentFactory& make_agent, std::uint64_t seed,
                          int rounds = 5, int episodes_per_round = 5, int n_envs = 5);

struct CurriculumSchedule {
    double weight = 1.0;
    double factor = 2.0;
    double cap = 1.0;
    double threshold = 100.0;
    int required = 5;
    int streak = 0;
};

/// Starts at 0.018 / k and saturates at 1 / k.
CurriculumSchedule make_curriculum(int k, double factor = 2.0);

/// After `required` consecutive evaluations above the threshold the weight is
/// multiplied by the factor (capped) and the streak restarts.
double curriculum_tick(CurriculumSchedule& schedule, double eval_reward);

}  // namespace flowline
