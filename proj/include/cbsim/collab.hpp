#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cbsim/batched.hpp"
#include "cbsim/instance.hpp"
#include "cbsim/rng.hpp"
#include "cbsim/transcript.hpp"

namespace cbsim {

struct CollabConfig {
    int K = 1;
    long long horizon_T = 1;   // per-agent time
    int rounds_R = 0;          // optional cap, 0 = none
    BatchConfig inner;

    void validate() const {
        if (K < 1) throw std::invalid_argument("K must be >= 1");
        if (horizon_T < 1) throw std::invalid_argument("horizon_T must be >= 1");
        if (rounds_R < 0) throw std::invalid_argument("rounds_R must be >= 1 when present");
    }
};

struct CollabRun {
    int K = 1;
    std::vector<Transcript> per_agent;
    std::vector<long long> round_boundaries;  // t_1..t_R, per-agent time steps
    int comm_steps = 0;
    double total_regret = 0.0;
    std::vector<long long> pulls_per_arm_total;
    BatchRun batched;  // underlying run, when produced by the reduction

    int rounds() const { return static_cast<int>(round_boundaries.size()); }
};

// Batched-to-collaborative reduction: run the batched algorithm with total budget K*T,
// then deal each batch's pulls to the K agents (remainder to the lowest
// agent indices). Pull counts and regret are exactly those of the batched run.
inline CollabRun reduce_batched_to_collab(const Instance& instance, const CollabConfig& config,
                                          const StreamKey& key) {
    config.validate();
    BatchConfig inner = config.inner;
    inner.horizon_T = static_cast<long long>(config.K) * config.horizon_T;
    inner.record_transcript = true;

    CollabRun run;
    run.K = config.K;
    run.batched = run_batched_mab(instance, inner, key);
    run.total_regret = run.batched.total_regret;
    run.pulls_per_arm_total = run.batched.pulls_per_arm;
    run.per_agent.resize(config.K);

    // Each batch maps to one collaborative round; an optional cap merges the
    // tail batches into the last permitted round.
    std::vector<long long> round_sizes = run.batched.batch_sizes;
    if (config.rounds_R > 0 && static_cast<int>(round_sizes.size()) > config.rounds_R) {
        for (std::size_t i = config.rounds_R; i < round_sizes.size(); ++i)
            round_sizes[config.rounds_R - 1] += round_sizes[i];
        round_sizes.resize(config.rounds_R);
    }

    const auto& entries = run.batched.transcript.entries;
    std::size_t pos = 0;
    long long cumulative = 0;
    for (std::size_t r = 0; r < round_sizes.size(); ++r) {
        const long long z = round_sizes[r];
        cumulative += z;
        const long long base = z / config.K;
        const long long rem = z % config.K;
        for (int k = 0; k < config.K; ++k) {
            const long long take = base + (k < rem ? 1 : 0);
            for (long long i = 0; i < take; ++i, ++pos)
                run.per_agent[k].append(entries[pos].arm, entries[pos].reward,
                                        static_cast<std::uint32_t>(k),
                                        static_cast<std::uint32_t>(r + 1));
        }
        run.round_boundaries.push_back(
            (cumulative + config.K - 1) / config.K);  // ceil(cum / K)
    }
    run.comm_steps = run.rounds() - 1;
    return run;
}

// K independent single-agent batched runs with horizon T each; no rounds are
// shared, so the run is reported as a single round with zero communication.
inline CollabRun run_no_comm_baseline(const Instance& instance, const CollabConfig& config,
                                      const StreamKey& key) {
    config.validate();
    BatchConfig inner = config.inner;
    inner.horizon_T = config.horizon_T;
    inner.record_transcript = true;

    CollabRun run;
    run.K = config.K;
    run.per_agent.resize(config.K);
    run.pulls_per_arm_total.assign(instance.size(), 0);
    for (int k = 0; k < config.K; ++k) {
        StreamKey agent_key{key.master_seed, key.trial, static_cast<std::uint64_t>(k)};
        BatchRun br = run_batched_mab(instance, inner, agent_key);
        run.total_regret += br.total_regret;
        for (std::size_t a = 0; a < instance.size(); ++a)
            run.pulls_per_arm_total[a] += br.pulls_per_arm[a];
        for (auto& e : br.transcript.entries) e.agent = static_cast<std::uint32_t>(k);
        run.per_agent[k] = std::move(br.transcript);
        if (k == 0) run.batched = std::move(br);
    }
    run.round_boundaries = {config.horizon_T};
    run.comm_steps = 0;
    return run;
}

struct RoundRatioCertificate {
    int r = 0;          // first round attaining the maximum boundary ratio
    double ratio = 0.0;
    bool meets_threshold = false;  // ratio >= (K * t_R)^(1/R), exact arithmetic
};

// Boundary-ratio pigeonhole with the t_0 = 1/K convention, kept exact by
// comparing fractions in integer arithmetic.
inline RoundRatioCertificate round_ratio_certificate(int K,
                                                     const std::vector<long long>& boundaries) {
    if (K < 1 || boundaries.empty())
        throw std::invalid_argument("round_ratio_certificate needs K >= 1 and R >= 1");
    using boost::multiprecision::cpp_int;
    const int R = static_cast<int>(boundaries.size());

    // Ratio of round r as a fraction num/den; r = 1 uses t_0 = 1/K.
    auto ratio_parts = [&](int r) -> std::pair<cpp_int, cpp_int> {
        if (r == 1) return {cpp_int(K) * boundaries[0], cpp_int(1)};
        return {cpp_int(boundaries[r - 1]), cpp_int(boundaries[r - 2])};
    };

    int best_r = 1;
    auto [best_num, best_den] = ratio_parts(1);
    for (int r = 2; r <= R; ++r) {
        auto [num, den] = ratio_parts(r);
        if (num * best_den > best_num * den) {
            best_r = r;
            best_num = num;
            best_den = den;
        }
    }

    RoundRatioCertificate cert;
    cert.r = best_r;
    cert.ratio = static_cast<double>(best_num) / static_cast<double>(best_den);
    // (num/den)^R >= K * t_R  <=>  num^R >= K * t_R * den^R
    cpp_int lhs = boost::multiprecision::pow(best_num, R);
    cpp_int rhs = cpp_int(K) * boundaries.back() * boost::multiprecision::pow(best_den, R);
    cert.meets_threshold = lhs >= rhs;
    return cert;
}

inline RoundRatioCertificate round_ratio_certificate(const CollabRun& run) {
    return round_ratio_certificate(run.K, run.round_boundaries);
}

} // namespace cbsim
