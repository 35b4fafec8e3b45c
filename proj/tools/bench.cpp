// bench: run scenarios with scripted agents, sweep parameters, solve WA.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowline/baselines.hpp"
#include "flowline/env.hpp"

using namespace flowline;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots != std::string::npos) {
            const auto lo = std::stoull(item.substr(0, dots));
            const auto hi = std::stoull(item.substr(dots + 2));
            if (hi < lo) throw std::invalid_argument("empty seed range '" + item + "'");
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        } else if (!item.empty()) {
            out.push_back(std::stoull(item));
        }
    }
    if (out.empty()) throw std::invalid_argument("no seeds given");
    return out;
}

Partition parse_partition(const std::string& text) {
    Partition out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

std::vector<Partition> parse_partitions(const std::string& text) {
    std::vector<Partition> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (!item.empty()) out.push_back(parse_partition(item));
    }
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

struct Common {
    std::string scenario = "WT";
    int k = 3;
    int workers = 0;
    double R = 0.75;
    double T_sim = 4000.0;
    double T_step = 1.0;
    std::string assembly_condition;
    std::optional<double> scrap_weight;
    std::string seeds = "0";
    int n_envs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--scenario", c.scenario, "WT, WTJ, PD, WA or CL")->capture_default_str();
    cmd->add_option("--k", c.k, "stations / processes / assemblies")->capture_default_str();
    cmd->add_option("--workers", c.workers, "worker pool size (0: 3k)")->capture_default_str();
    cmd->add_option("--R", c.R, "WTJ part ratio")->capture_default_str();
    cmd->add_option("--t-sim", c.T_sim, "episode length")->capture_default_str();
    cmd->add_option("--t-step", c.T_step, "agent step")->capture_default_str();
    cmd->add_option("--assembly-condition", c.assembly_condition, "T_AC override ('none' disables)");
    cmd->add_option("--scrap-weight", c.scrap_weight, "scrap weight override");
    cmd->add_option("--seeds,--seed", c.seeds, "seeds, e.g. 0..4 or 1,5,9")->capture_default_str();
    cmd->add_option("--n-envs", c.n_envs, "parallel environments")->capture_default_str();
}

ScenarioConfig make_config(const Common& c) {
    ScenarioConfig config;
    config.kind = scenario_kind_from_string(c.scenario);
    config.k = c.k;
    config.workers = c.workers;
    config.R = c.R;
    config.T_sim = c.T_sim;
    config.T_step = c.T_step;
    config.scrap_weight = c.scrap_weight;
    if (!c.assembly_condition.empty()) {
        std::optional<double> tac;
        if (c.assembly_condition != "none") tac = std::stod(c.assembly_condition);
        config.wt.assembly_condition = tac;
        config.cl.assembly_condition = tac;
    }
    return config;
}

int run_command(const Common& c, const std::string& agent_name, const AgentOptions& options, int episodes,
                const std::string& out_path, const std::string& events_path, const std::string& trajectory_path) {
    const ScenarioConfig config = make_config(c);
    const auto seeds = parse_seeds(c.seeds);
    const auto factory = make_agent_factory(agent_name, config, options);

    std::vector<EpisodeResult> results;
    if (events_path.empty() && trajectory_path.empty()) {
        results = vector_run(config, factory, c.n_envs, episodes, seeds);
    } else {
        std::ofstream events;
        std::ofstream trajectory;
        if (!events_path.empty()) events.open(events_path);
        if (!trajectory_path.empty()) trajectory.open(trajectory_path);
        bool header = false;
        Environment env(config);
        env.enable_event_log(!events_path.empty());
        for (auto s : seeds) {
            for (int e = 0; e < episodes; ++e) {
                auto agent = factory();
                RolloutOptions options_run;
                options_run.episode = static_cast<std::uint64_t>(e);
                options_run.observer = [&](const Environment& en, const StepResult& step) {
                    if (events.is_open()) {
                        for (const auto& ev : en.line().event_log()) {
                            nlohmann::json j{{"seed", s},          {"episode", e},
                                             {"time", ev.time},    {"object", ev.object},
                                             {"kind", std::string(to_string(ev.kind))},
                                             {"payload", ev.payload}};
                            events << j.dump() << '\n';
                        }
                        const_cast<Line&>(en.line()).clear_event_log();
                    }
                    if (trajectory.is_open()) {
                        if (!header) {
                            trajectory << "seed,episode,step";
                            for (const auto& n : step.observation.names) trajectory << ',' << n;
                            trajectory << ",reward\n";
                            header = true;
                        }
                        trajectory << s << ',' << e << ',' << step.info.step;
                        for (double v : step.observation.values) trajectory << ',' << v;
                        trajectory << ',' << std::setprecision(17) << step.reward << std::setprecision(6) << '\n';
                    }
                };
                auto r = run_episode(env, *agent, episode_seed(s, e), options_run);
                r.seed = s;
                results.push_back(std::move(r));
            }
        }
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        out = &file;
    }
    *out << "scenario,seed,episode,total_reward,n_ok,n_nok_total,deadlocked\n";
    std::vector<double> rewards;
    for (const auto& r : results) {
        *out << r.scenario << ',' << r.seed << ',' << r.episode << ',' << std::setprecision(10) << r.total_reward
             << ',' << r.n_ok << ',' << r.n_nok_total << ',' << (r.deadlocked ? 1 : 0) << '\n';
        rewards.push_back(r.total_reward);
    }
    const auto s = summarize(rewards);
    std::cerr << std::setprecision(6) << agent_name << " on " << c.scenario << ": reward " << s.mean << " ± " << s.std
              << " (" << s.max << ") over " << s.count << " episodes\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Production-line benchmark runner"};
    app.require_subcommand(1);

    Common run_common;
    std::string agent = "none";
    AgentOptions options;
    std::string waiting_text;
    std::string partition_text;
    int episodes = 1;
    std::string out_path;
    std::string events_path;
    std::string trajectory_path;
    auto* run = app.add_subcommand("run", "run episodes with a scripted agent");
    add_common(run, run_common);
    run->add_option("--agent", agent, "agent name")->capture_default_str();
    run->add_option("--episodes", episodes, "episodes per seed")->capture_default_str();
    run->add_option("--lookback", options.lookback, "rolling-mean look-back")->capture_default_str();
    run->add_option("--waiting", waiting_text, "waiting time for optimal-wt / cl-heuristic");
    run->add_option("--partition", partition_text, "worker partition, e.g. 2,3,4");
    run->add_option("--out", out_path, "results CSV (default: stdout)");
    run->add_option("--events", events_path, "JSON-lines event log");
    run->add_option("--trajectory", trajectory_path, "per-step trajectory CSV");

    Common sweep_common;
    double from = 0.0;
    double to = 30.0;
    double step = 0.5;
    std::string grid_text;
    std::string partitions_text;
    auto* sweep = app.add_subcommand("sweep", "waiting-time sweep (WT/WTJ) or CL grid search");
    add_common(sweep, sweep_common);
    sweep->add_option("--from", from, "first waiting time")->capture_default_str();
    sweep->add_option("--to", to, "last waiting time")->capture_default_str();
    sweep->add_option("--step", step, "grid step")->capture_default_str();
    sweep->add_option("--waiting", grid_text, "explicit waiting grid, e.g. 0,2,4 (CL)");
    sweep->add_option("--partitions", partitions_text, "CL partitions, e.g. '3,3,3;2,3,4'");

    int wa_k = 3;
    int wa_workers = 0;
    double wa_spread = WaParameters{}.relative_spread;
    double wa_c = WaParameters{}.performance_coefficient;
    auto* solve = app.add_subcommand("solve-wa", "optimal worker partition for WA_{k,N}");
    solve->add_option("--k", wa_k, "stations")->capture_default_str();
    solve->add_option("--workers", wa_workers, "workers (0: 3k)")->capture_default_str();
    solve->add_option("--spread", wa_spread, "relative spread S_i")->capture_default_str();
    solve->add_option("--c", wa_c, "performance coefficient")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (!waiting_text.empty()) options.waiting_time = std::stod(waiting_text);
            if (!partition_text.empty()) options.partition = parse_partition(partition_text);
            return run_command(run_common, agent, options, episodes, out_path, events_path, trajectory_path);
        }
        if (*sweep) {
            const ScenarioConfig config = make_config(sweep_common);
            const auto seeds = parse_seeds(sweep_common.seeds);
            if (config.kind == ScenarioKind::cl) {
                std::vector<double> grid = grid_text.empty() ? std::vector<double>{0.0} : parse_list(grid_text);
                std::vector<Partition> partitions = partitions_text.empty()
                                                        ? std::vector<Partition>{default_cl_heuristic(config.k).partition}
                                                        : parse_partitions(partitions_text);
                const auto result = grid_search_cl(config, grid, partitions, seeds, sweep_common.n_envs);
                std::cout << "waiting,partition,mean_reward,deadlocked\n";
                for (const auto& p : result.points) {
                    std::cout << p.waiting_time << ",\"";
                    for (std::size_t i = 0; i < p.partition.size(); ++i) std::cout << (i ? "," : "") << p.partition[i];
                    std::cout << "\"," << p.mean_reward << ',' << (p.deadlocked ? 1 : 0) << '\n';
                }
                std::cerr << "best: waiting " << result.best.waiting_time << " reward " << result.best.mean_reward
                          << '\n';
                return 0;
            }
            std::vector<double> grid;
            if (!grid_text.empty()) {
                grid = parse_list(grid_text);
            } else {
                for (double w = from; w <= to + 1e-9; w += step) grid.push_back(w);
            }
            std::cout << "waiting,mean_reward,mean_n_ok,mean_n_nok\n";
            for (double w : grid) {
                AgentOptions o;
                o.waiting_time = w;
                const auto results = vector_run(config, make_agent_factory("optimal-wt", config, o),
                                                sweep_common.n_envs, 1, seeds);
                double reward = 0.0;
                double ok = 0.0;
                double nok = 0.0;
                for (const auto& r : results) {
                    reward += r.total_reward;
                    ok += static_cast<double>(r.n_ok);
                    nok += static_cast<double>(r.n_nok_total);
                }
                const double n = static_cast<double>(results.size());
                std::cout << w << ',' << reward / n << ',' << ok / n << ',' << nok / n << '\n';
            }
            return 0;
        }
        if (*solve) {
            const int N = wa_workers > 0 ? wa_workers : 3 * wa_k;
            const auto T = wa_minima(wa_k);
            const std::vector<double> S(T.size(), wa_spread);
            const auto best = solve_worker_assignment(T, S, N, wa_c);
            std::cout << "partition: (";
            for (std::size_t i = 0; i < best.partition.size(); ++i) std::cout << (i ? ", " : "") << best.partition[i];
            std::cout << ")\nobjective: " << std::setprecision(10) << best.objective << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
