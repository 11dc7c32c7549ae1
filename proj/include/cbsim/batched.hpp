#pragma once
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cbsim/instance.hpp"
#include "cbsim/regret.hpp"
#include "cbsim/rng.hpp"
#include "cbsim/transcript.hpp"

namespace cbsim {

// How the total pull budget is accounted:
//  - global_cap: T is the total number of pulls across all arms; a batch that
//    would overshoot is truncated round-robin over the active arms.
//  - per_arm_grid: every active arm is pulled up to the grid value each batch,
//    reproducing the literal per-arm accounting of the batched algorithm.
enum class BudgetMode { global_cap, per_arm_grid };

struct BatchConfig {
    double lambda_grid = 2.0;
    long long horizon_T = 1;
    BudgetMode budget_mode = BudgetMode::global_cap;
    bool record_transcript = false;

    void validate() const {
        if (lambda_grid < 2.0)
            throw std::invalid_argument("lambda_grid must be >= 2");
        if (horizon_T < 1)
            throw std::invalid_argument("horizon_T must be >= 1");
    }
};

// ln(T^3 * N) in log form, safe for large T.
inline double log_t3n(long long T, std::size_t N) {
    return 3.0 * std::log(static_cast<double>(T)) + std::log(static_cast<double>(N));
}

inline double elimination_threshold(long long T, std::size_t N, long long t_r) {
    return 2.0 * std::sqrt(log_t3n(T, N) / static_cast<double>(t_r));
}

// Geometric grid T_i = ceil(lambda^i), clamped to T, duplicates removed.
inline std::vector<long long> batch_grid(const BatchConfig& config) {
    config.validate();
    const double lambda = config.lambda_grid;
    const long long T = config.horizon_T;
    std::vector<long long> grid;
    double p = 1.0;
    while (p < static_cast<double>(T)) {
        p *= lambda;
        long long v = static_cast<long long>(std::ceil(p - 1e-9));
        if (v > T) v = T;
        if (grid.empty() || v > grid.back()) grid.push_back(v);
        if (v == T) break;
    }
    if (grid.empty()) grid.push_back(T);
    return grid;
}

// Cumulative empirical means of the arms still active after batch `round`.
struct RoundTrace {
    int round = 0;            // 1-based batch index
    long long t_r = 0;        // per-arm pull count at this grid point
    std::vector<std::pair<std::uint32_t, double>> est_means;
    double est_max = 0.0;
    double threshold = 0.0;
};

struct EliminationCertificate {
    std::uint32_t arm = 0;
    int round = 0;
    double deficit = 0.0;     // est_max - est_mean at elimination
    double threshold = 0.0;
    int r_of_a = 0;           // analytic bound on the elimination round
};

struct BatchRun {
    std::vector<long long> grid;
    std::vector<std::vector<std::uint32_t>> active_sets;  // set entering each batch
    std::vector<RoundTrace> traces;                       // one per completed batch
    std::vector<long long> batch_sizes;                   // total pulls per round, incl. fill
    std::vector<long long> pulls_per_arm;
    int rounds_used = 0;
    long long total_pulls = 0;
    double total_regret = 0.0;
    bool star_eliminated = false;
    std::vector<int> elimination_round;                   // 0 = never eliminated
    std::vector<EliminationCertificate> certificates;
    bool truncated = false;
    Transcript transcript;                                // only when recorded
};

// Smallest 1-based round r with T_r > 64 ln(T^3 N) / gap^2; grid.size()+1 when
// no grid point qualifies.
inline int round_bound_for_gap(double gap, const std::vector<long long>& grid,
                               long long T, std::size_t N) {
    if (gap <= 0.0) return static_cast<int>(grid.size()) + 1;
    const double need = 64.0 * log_t3n(T, N) / (gap * gap);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (static_cast<double>(grid[i]) > need) return static_cast<int>(i) + 1;
    return static_cast<int>(grid.size()) + 1;
}

// Successive elimination on a geometric batch grid. Each batch pulls every
// active arm up to the next grid point; arms whose cumulative mean trails the
// best by at least 2*sqrt(ln(T^3 N)/T_r) are dropped. Once one arm remains,
// the rest of the budget goes to it as a final round.
inline BatchRun run_batched_mab(const Instance& instance, const BatchConfig& config,
                                const StreamKey& key) {
    config.validate();
    const std::size_t N = instance.size();
    if (N == 0) throw std::invalid_argument("empty instance");
    const long long T = config.horizon_T;
    const bool global_cap = config.budget_mode == BudgetMode::global_cap;

    BatchRun run;
    run.grid = batch_grid(config);
    run.pulls_per_arm.assign(N, 0);
    run.elimination_round.assign(N, 0);

    std::vector<RngStream> streams;
    streams.reserve(N);
    for (std::size_t a = 0; a < N; ++a) streams.push_back(key.arm_stream(a));

    std::vector<double> reward_sum(N, 0.0);
    std::vector<std::uint32_t> active(N);
    for (std::size_t a = 0; a < N; ++a) active[a] = static_cast<std::uint32_t>(a);

    long long budget_left = T;

    auto pull = [&](std::uint32_t a, int round) {
        double r = sample_reward(instance.arms[a], streams[a]);
        reward_sum[a] += r;
        run.pulls_per_arm[a] += 1;
        run.total_pulls += 1;
        run.total_regret += instance.gaps[a];
        if (config.record_transcript)
            run.transcript.append(a, r, 0, static_cast<std::uint32_t>(round));
    };

    const int m = static_cast<int>(run.grid.size());
    int r = 0;  // completed batches
    while (r < m && active.size() > 1) {
        const long long t_r = run.grid[r];
        const long long t_prev = (r == 0) ? 0 : run.grid[r - 1];
        const long long need = t_r - t_prev;
        const long long total_need = need * static_cast<long long>(active.size());

        if (global_cap && total_need > budget_left) {
            // Partial round: spread what is left round-robin over the active set.
            run.active_sets.push_back(active);
            long long z = budget_left;
            std::size_t idx = 0;
            while (z > 0) {
                pull(active[idx], r + 1);
                idx = (idx + 1) % active.size();
                --z;
            }
            run.batch_sizes.push_back(budget_left);
            budget_left = 0;
            run.truncated = true;
            run.rounds_used = r + 1;
            return run;
        }

        run.active_sets.push_back(active);
        for (std::uint32_t a : active)
            for (long long i = 0; i < need; ++i) pull(a, r + 1);
        if (global_cap) budget_left -= total_need;
        run.batch_sizes.push_back(total_need);

        RoundTrace trace;
        trace.round = r + 1;
        trace.t_r = t_r;
        trace.threshold = elimination_threshold(T, N, t_r);
        double best = -1.0;
        for (std::uint32_t a : active) {
            double mu_hat = reward_sum[a] / static_cast<double>(run.pulls_per_arm[a]);
            trace.est_means.emplace_back(a, mu_hat);
            best = std::max(best, mu_hat);
        }
        trace.est_max = best;
        run.traces.push_back(trace);

        std::vector<std::uint32_t> survivors;
        for (const auto& [a, mu_hat] : trace.est_means) {
            const double deficit = best - mu_hat;
            if (deficit < trace.threshold) {
                survivors.push_back(a);
            } else {
                run.elimination_round[a] = r + 1;
                if (a == instance.star_index) run.star_eliminated = true;
                run.certificates.push_back(
                    {a, r + 1, deficit, trace.threshold,
                     round_bound_for_gap(instance.gaps[a], run.grid, T, N)});
            }
        }
        active = std::move(survivors);
        ++r;
        run.rounds_used = r;
    }

    // Single survivor: give it the rest of the budget as one final round.
    if (active.size() == 1) {
        const std::uint32_t a = active[0];
        long long fill = global_cap ? budget_left : (T - run.pulls_per_arm[a]);
        if (fill > 0) {
            run.active_sets.push_back(active);
            for (long long i = 0; i < fill; ++i) pull(a, r + 1);
            run.batch_sizes.push_back(fill);
            run.rounds_used = r + 1;
        }
    }
    return run;
}

inline int ceil_log(double base, double x) {
    if (x <= 1.0) return 0;
    return static_cast<int>(std::ceil(std::log(x) / std::log(base) - 1e-9));
}

// min{ ceil(log_lambda(64 ln(T^3 N)/gap^2)) + 1, ceil(log_lambda T) };
// only the worst-case branch when all means are equal.
inline int analytic_round_bound(const Instance& instance, const BatchConfig& config) {
    config.validate();
    const int worst = ceil_log(config.lambda_grid, static_cast<double>(config.horizon_T));
    if (instance.min_gap <= 0.0) return worst;
    const double need =
        64.0 * log_t3n(config.horizon_T, instance.size()) / (instance.min_gap * instance.min_gap);
    return std::min(ceil_log(config.lambda_grid, need) + 1, worst);
}

// Sum over suboptimal arms of 200 * lambda * ln(T N) / gap; infinite when a
// suboptimal arm has zero gap.
inline double analytic_regret_bound(const Instance& instance, const BatchConfig& config) {
    config.validate();
    const double log_tn = std::log(static_cast<double>(config.horizon_T) *
                                   static_cast<double>(instance.size()));
    double total = 0.0;
    for (std::size_t a = 0; a < instance.size(); ++a) {
        if (a == instance.star_index) continue;
        if (instance.gaps[a] <= 0.0) return std::numeric_limits<double>::infinity();
        total += 200.0 * config.lambda_grid * log_tn / instance.gaps[a];
    }
    return total;
}

// Per-trial check of the clean event: every recorded cumulative mean within
// sqrt(ln(T^3 N)/T_r) of the true mean.
inline bool e2_holds(const Instance& instance, const BatchRun& run, const BatchConfig& config) {
    const double log_tn = log_t3n(config.horizon_T, instance.size());
    for (const auto& trace : run.traces) {
        const double tol = std::sqrt(log_tn / static_cast<double>(trace.t_r));
        for (const auto& [a, mu_hat] : trace.est_means)
            if (std::abs(mu_hat - instance.arms[a].mean) > tol) return false;
    }
    return true;
}

// Every suboptimal arm gone by its analytic round r(a). Arms that survived are
// a violation only if a full batch with index >= r(a) was completed.
inline bool elimination_schedule_holds(const Instance& instance, const BatchRun& run, const BatchConfig& config) {
    const int completed = static_cast<int>(run.traces.size());
    for (std::size_t a = 0; a < instance.size(); ++a) {
        if (a == instance.star_index || instance.gaps[a] <= 0.0) continue;
        const int r_of_a =
            round_bound_for_gap(instance.gaps[a], run.grid, config.horizon_T, instance.size());
        const int elim = run.elimination_round[a];
        if (elim == 0) {
            if (completed >= r_of_a) return false;
        } else if (elim > r_of_a) {
            return false;
        }
    }
    return true;
}

} // namespace cbsim
