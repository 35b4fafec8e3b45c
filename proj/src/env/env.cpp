#include "flowline/env.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace flowline {

Environment::Environment(ScenarioConfig config, ObservationMask mask)
    : config_(std::move(config)), mask_(std::move(mask)) {
    const double steps = config_.T_sim / config_.T_step;
    if (config_.T_step <= 0.0 || steps < 1.0 || std::abs(steps - std::round(steps)) > 1e-9) {
        throw std::invalid_argument("T_sim / T_step must be a positive integer");
    }
    horizon_ = static_cast<std::uint64_t>(std::llround(steps));
}

const Scenario& Environment::scenario() const {
    if (!scenario_) throw std::logic_error("environment has not been reset");
    return *scenario_;
}

const Line& Environment::line() const {
    if (!line_) throw std::logic_error("environment has not been reset");
    return *line_;
}

Line& Environment::line() {
    if (!line_) throw std::logic_error("environment has not been reset");
    return *line_;
}

const RewardLedger& Environment::ledger() const {
    if (!ledger_) throw std::logic_error("environment has not been reset");
    return *ledger_;
}

Observation Environment::reset(std::uint64_t seed) {
    seed_ = seed;
    scenario_ = make_scenario(config_, seed);
    line_ = std::make_unique<Line>(scenario_->layout, seed);
    line_->enable_event_log(log_events_);
    ledger_.emplace(scenario_->costs, line_->stations().size(), scenario_->scrap_weight);
    spaces_ = space_descriptors(*line_, mask_);
    step_ = 0;
    return snapshot(*line_, spaces_);
}

Observation Environment::observe() const {
    return snapshot(line(), spaces_);
}

StepInfo Environment::info() const {
    const Line& l = line();
    StepInfo info;
    info.step = step_;
    info.time = l.now();
    info.n_ok = ledger_->n_ok();
    info.n_nok_total = ledger_->n_nok_total();
    for (const auto& st : l.stations()) {
        info.station_n_ok.push_back(st.n_ok);
        info.station_n_nok.push_back(st.n_nok);
    }
    info.parts_created = l.parts_created();
    info.parts_in_flight = l.parts_in_flight();
    info.parts_delivered = l.parts_delivered();
    info.parts_scrapped = l.parts_scrapped();
    info.value = ledger_->value();
    info.deadlocked = l.detect_deadlock();
    return info;
}

StepResult Environment::step(const ActionCommand& cmd) {
    if (!line_) throw std::logic_error("environment has not been reset");
    if (done()) throw std::logic_error("episode is over; call reset()");
    apply(*line_, spaces_, cmd);
    const SimTime t_next = config_.T_step * static_cast<double>(step_ + 1);
    line_->schedule_boundary(t_next, step_ + 1);
    line_->run_until(t_next);
    ++step_;
    StepResult result;
    result.reward = ledger_->record(*line_);
    result.observation = snapshot(*line_, spaces_);
    result.done = done();
    result.info = info();
    return result;
}

bool EpisodeResult::operator==(const EpisodeResult& other) const {
    return scenario == other.scenario && seed == other.seed && episode == other.episode &&
           total_reward == other.total_reward && final_value == other.final_value && n_ok == other.n_ok &&
           n_nok == other.n_nok && n_nok_total == other.n_nok_total && step_rewards == other.step_rewards &&
           deadlocked == other.deadlocked;
}

EpisodeResult run_episode(Environment& env, Agent& agent, std::uint64_t seed, const RolloutOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    Observation obs = env.reset(seed);
    agent.reset(options.agent_seed.value_or(derive_seed(seed, "agent")), env.spaces());
    StepInfo info = env.info();

    EpisodeResult result;
    result.scenario = env.scenario().name;
    result.seed = seed;
    result.episode = options.episode;
    result.step_rewards.reserve(env.horizon());
    while (!env.done()) {
        const ActionCommand cmd = agent.act(AgentInput{obs, env.spaces(), info});
        StepResult step = env.step(cmd);
        result.step_rewards.push_back(step.reward);
        result.total_reward += step.reward;
        if (options.observer) options.observer(env, step);
        obs = std::move(step.observation);
        info = std::move(step.info);
    }
    const auto& ledger = env.ledger();
    result.final_value = ledger.value();
    result.n_ok = ledger.n_ok();
    result.n_nok = ledger.nok_by_station();
    result.n_nok_total = ledger.n_nok_total();
    result.deadlocked = info.deadlocked;
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode) {
    return derive_seed(seed, episode);
}

std::vector<EpisodeResult> vector_run(const ScenarioConfig& config, const AgentFactory& make_agent, int n_envs,
                                      int n_episodes, const std::vector<std::uint64_t>& seeds) {
    if (n_envs < 1) throw std::invalid_argument("n_envs must be at least 1");
    struct Task {
        std::uint64_t seed;
        std::uint64_t episode;
    };
    std::vector<Task> tasks;
    for (auto s : seeds) {
        for (int e = 0; e < n_episodes; ++e) tasks.push_back({s, static_cast<std::uint64_t>(e)});
    }
    std::vector<EpisodeResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&]() {
        Environment env(config);
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                auto agent = make_agent();
                RolloutOptions options;
                options.episode = tasks[i].episode;
                EpisodeResult r = run_episode(env, *agent, episode_seed(tasks[i].seed, tasks[i].episode), options);
                r.seed = tasks[i].seed;
                results[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = tasks.size();
                return;
            }
        }
    };

    const int threads = std::min<int>(n_envs, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    std::sort(results.begin(), results.end(), [](const EpisodeResult& a, const EpisodeResult& b) {
        return a.seed != b.seed ? a.seed < b.seed : a.episode < b.episode;
    });
    return results;
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    s.max = *std::max_element(values.begin(), values.end());
    return s;
}

EvaluationReport evaluate(const ScenarioConfig& config, const AgentFactory& make_agent, std::uint64_t seed,
                          int rounds, int episodes_per_round, int n_envs) {
    std::vector<std::uint64_t> round_seeds;
    for (int r = 0; r < rounds; ++r) round_seeds.push_back(derive_seed(seed, "evaluation-" + std::to_string(r)));
    EvaluationReport report;
    report.episodes = vector_run(config, make_agent, n_envs, episodes_per_round, round_seeds);
    for (auto s : round_seeds) {
        double sum = 0.0;
        int n = 0;
        for (const auto& e : report.episodes) {
            if (e.seed == s) {
                sum += e.total_reward;
                ++n;
            }
        }
        report.evaluation_means.push_back(n > 0 ? sum / n : 0.0);
    }
    report.summary = summarize(report.evaluation_means);
    return report;
}

CurriculumSchedule make_curriculum(int k, double factor) {
    if (k < 1) throw std::invalid_argument("curriculum needs k >= 1");
    CurriculumSchedule s;
    s.cap = 1.0 / k;
    s.weight = std::min(0.018 / k, s.cap);
    s.factor = factor;
    return s;
}

double curriculum_tick(CurriculumSchedule& schedule, double eval_reward) {
    if (eval_reward > schedule.threshold) {
        if (++schedule.streak >= schedule.required) {
            schedule.weight = std::min(schedule.weight * schedule.factor, schedule.cap);
            schedule.streak = 0;
        }
    } else {
        schedule.streak = 0;
    }
    return schedule.weight;
}

}  // namespace flowline
