#pragma once
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cbsim/collab.hpp"
#include "cbsim/events.hpp"
#include "cbsim/hard_family.hpp"
#include "cbsim/regret.hpp"

namespace cbsim {

// Single-agent projection of a collaborative transcript: round-robin
// interleaving of all K agents' entries through round tau-1, then agent k's
// first zeta entries of round tau. `last` is just that final segment.
struct Projection {
    Transcript proj;
    Transcript last;
    int tau = 0;
    long long zeta_len = 0;       // floor(zeta), the slice length
    bool zeta_collapsed = false;  // zeta < 1 after rounding
    bool tau_exact = true;
};

inline Projection project_transcript(const CollabRun& run, int k, int ell,
                                     const HardFamily& family, int R) {
    if (k < 0 || k >= run.K) throw std::out_of_range("agent index out of range");
    if (ell < 1 || ell > family.L) throw std::out_of_range("level out of range");

    Projection out;
    auto [tau, exact] = tau_for_level(run, family, ell);
    out.tau = tau;
    out.tau_exact = exact;
    const double zeta = zeta_of(family, ell, R);
    out.zeta_len = static_cast<long long>(std::floor(zeta));
    if (out.zeta_len < 1) {
        out.zeta_len = 0;
        out.zeta_collapsed = true;
    }

    // Per-agent entries of a given round, in each agent's own order.
    auto round_entries = [&](int agent, int round) {
        std::vector<const PullRecord*> es;
        for (const auto& e : run.per_agent[agent].entries)
            if (static_cast<int>(e.round) == round) es.push_back(&e);
        return es;
    };

    for (int r = 1; r < tau; ++r) {
        std::vector<std::vector<const PullRecord*>> per_agent;
        std::size_t longest = 0;
        for (int a = 0; a < run.K; ++a) {
            per_agent.push_back(round_entries(a, r));
            longest = std::max(longest, per_agent.back().size());
        }
        for (std::size_t t = 0; t < longest; ++t)
            for (int a = 0; a < run.K; ++a)
                if (t < per_agent[a].size())
                    out.proj.entries.push_back(*per_agent[a][t]);
    }

    auto tail = round_entries(k, tau);
    const std::size_t take =
        std::min<std::size_t>(tail.size(), static_cast<std::size_t>(out.zeta_len));
    for (std::size_t t = 0; t < take; ++t) {
        out.proj.entries.push_back(*tail[t]);
        out.last.entries.push_back(*tail[t]);
    }
    return out;
}

// Paired regret of the Last_k segments under the +/- instances of one level.
// With full-length segments every pull contributes the gap to exactly one of
// U, V, so U + V >= K * gap * zeta; truncated segments get the per-pull form.
struct PairedRegret {
    double U = 0.0;
    double V = 0.0;
    double bound = 0.0;
    bool meets_bound = false;
};

inline PairedRegret paired_regret_lower(std::span<const Transcript> last_segments,
                                        const HardFamily& family, int ell,
                                        long long zeta_len) {
    PairedRegret out;
    const Instance& plus = family.input(ell, +1);
    const Instance& minus = family.input(ell, -1);
    long long total_len = 0;
    bool all_full = true;
    for (const auto& seg : last_segments) {
        out.U += regret_of_transcript(plus, seg);
        out.V += regret_of_transcript(minus, seg);
        total_len += static_cast<long long>(seg.size());
        all_full = all_full && static_cast<long long>(seg.size()) == zeta_len;
    }
    const double gap = family.gap(ell);
    out.bound = all_full
                    ? gap * static_cast<double>(zeta_len) *
                          static_cast<double>(last_segments.size())
                    : gap * static_cast<double>(total_len);
    out.meets_bound = out.U + out.V >= out.bound - 1e-9;
    return out;
}

} // namespace cbsim
