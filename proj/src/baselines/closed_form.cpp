#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "flowline/baselines.hpp"

namespace flowline {

double optimal_waiting_time(const Distribution& assembly, const Distribution& get_time,
                            const Distribution& source_component) {
    return assembly.mean() + 2.0 * get_time.mean() - source_component.mean();
}

double optimal_waiting_time(const WtParameters& params) {
    return optimal_waiting_time(params.assembly, Distribution{params.get_time, 0.0}, params.source_component);
}

double expected_max(const Distribution& x, const Distribution& y) {
    auto cdf = [](const Distribution& d, double t) {
        if (t < d.minimum) return 0.0;
        if (d.exp_mean <= 0.0) return 1.0;
        return 1.0 - std::exp(-(t - d.minimum) / d.exp_mean);
    };
    const double lo = std::min(x.minimum, y.minimum);
    const double hi = std::max(x.minimum, y.minimum) + 60.0 * std::max({x.exp_mean, y.exp_mean, 1e-9});
    // E[max] = lo + integral over [lo, inf) of 1 - F_X F_Y
    const int n = 200000;
    const double h = (hi - lo) / n;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = lo + (i + 0.5) * h;
        integral += 1.0 - cdf(x, t) * cdf(y, t);
    }
    return lo + integral * h;
}

double expected_max_parts_wt(const WtParameters& p, double T_sim) {
    const Distribution to_a_component{p.source_component.minimum + p.put_time + p.traversal_component,
                                      p.source_component.exp_mean};
    const Distribution to_a_main{p.source_main.minimum + p.put_time + p.traversal_main, p.source_main.exp_mean};
    const double ramp = expected_max(to_a_component, to_a_main);
    const double numerator = T_sim - ramp - p.traversal_out - p.get_time - p.sink.mean();
    const double denominator = p.assembly.mean() + 2.0 * p.get_time + p.put_time;
    if (denominator <= 0.0) throw std::invalid_argument("assembly cycle must take time");
    return std::max(0.0, numerator / denominator);
}

PartDistribution optimal_part_distribution(const std::vector<double>& T, const std::vector<double>& S, double T_sim,
                                           bool closed_form) {
    if (T.empty() || T.size() != S.size()) throw std::invalid_argument("T and S must be non-empty and equally long");
    for (double t : T) {
        if (t <= 0.0) throw std::invalid_argument("processing minima must be positive");
    }
    PartDistribution out;
    std::vector<double> expected(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) {
        expected[i] = T_sim / ((1.0 + S[i]) * T[i]);
        out.expected_total += expected[i];
    }
    if (closed_form) {
        if (!std::all_of(S.begin(), S.end(), [&](double s) { return s == S.front(); })) {
            throw std::invalid_argument(
                "closed-form shares need equal S_i; use the general ratio E[N_i] / E[N] instead");
        }
        for (std::size_t i = 0; i < T.size(); ++i) {
            double denom = 0.0;
            for (double tj : T) denom += T[i] / tj;
            out.shares.push_back(1.0 / denom);
        }
    } else {
        for (double e : expected) out.shares.push_back(e / out.expected_total);
    }
    return out;
}

double assignment_objective(const std::vector<double>& T, const std::vector<double>& S, const Partition& n, double c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        worst = std::max(worst, T[i] * (performance_coefficient(n[i], c) + S[i]));
    }
    return worst;
}

std::vector<Partition> enumerate_compositions(int N, int k) {
    std::vector<Partition> out;
    if (k <= 0 || N < 0) return out;
    Partition current(k, 0);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == k - 1) {
            current[slot] = remaining;
            out.push_back(current);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[slot] = v;
            rec(slot + 1, remaining - v);
        }
    };
    rec(0, N);
    return out;
}

std::vector<Partition> enumerate_monotone_partitions(int N, int k) {
    std::vector<Partition> out;
    if (k <= 0 || N < 0) return out;
    Partition current(k, 0);
    std::function<void(int, int, int)> rec = [&](int slot, int remaining, int floor) {
        if (slot == k - 1) {
            if (remaining >= floor) {
                current[slot] = remaining;
                out.push_back(current);
            }
            return;
        }
        const int slots_left = k - slot;
        for (int v = floor; v * slots_left <= remaining; ++v) {
            current[slot] = v;
            rec(slot + 1, remaining - v, v);
        }
    };
    rec(0, N, 0);
    return out;
}

Assignment solve_worker_assignment(const std::vector<double>& T, const std::vector<double>& S, int N, double c) {
    if (T.empty() || T.size() != S.size()) throw std::invalid_argument("T and S must be non-empty and equally long");
    if (N < 0) throw std::invalid_argument("worker count must be non-negative");
    Assignment best;
    bool first = true;
    for (auto& p : enumerate_compositions(N, static_cast<int>(T.size()))) {
        const double value = assignment_objective(T, S, p, c);
        // compositions arrive in lexicographic order, so strict improvement keeps the smallest tie
        if (first || value < best.objective - 1e-12 * std::max(1.0, best.objective)) {
            best.partition = p;
            best.objective = value;
            first = false;
        }
    }
    return best;
}

}  // namespace flowline
