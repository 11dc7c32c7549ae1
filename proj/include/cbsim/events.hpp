#pragma once
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "cbsim/collab.hpp"
#include "cbsim/hard_family.hpp"
#include "cbsim/transcript.hpp"

namespace cbsim {

// Indistinguishability event: for every level l whose length threshold
// lambda_lb * beta^{2l} / log2(L) admits this transcript, all ordered pairs
// (A, B) from the level-l suffix satisfy ln g_A - ln g_B <= 2 eps.
struct EventEResult {
    bool pass = true;
    bool degenerate_family = false;  // L <= 1 makes the level condition vacuous
    struct Witness {
        int ell = 0;
        int a_level = 0, a_sigma = 0;
        int b_level = 0, b_sigma = 0;
        double llr = 0.0;
    };
    std::optional<Witness> witness;
};

inline EventEResult event_E_check(const HardFamily& family, const Transcript& transcript) {
    EventEResult result;
    if (family.degenerate()) {
        result.degenerate_family = true;
        return result;
    }
    // Two-arm Bernoulli inputs: the log-likelihood is a function of the four
    // (arm, outcome) counts, so each pair check is O(1).
    std::array<std::array<long long, 2>, 2> counts{{{0, 0}, {0, 0}}};
    for (const auto& e : transcript.entries) {
        if (e.arm > 1 || (e.reward != 0.0 && e.reward != 1.0))
            throw std::invalid_argument("event_E_check expects a two-arm 0/1 transcript");
        counts[e.arm][e.reward == 1.0 ? 1 : 0] += 1;
    }
    auto log_g = [&](const Instance& inst) {
        double v = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double mu = inst.arms[a].mean;
            v += static_cast<double>(counts[a][1]) * std::log(mu) +
                 static_cast<double>(counts[a][0]) * std::log(1.0 - mu);
        }
        return v;
    };

    const double n = static_cast<double>(transcript.size());
    const double log_L = std::log2(static_cast<double>(family.L));
    for (int ell = 1; ell <= family.L; ++ell) {
        if (family.lambda_lb * std::pow(family.beta, 2 * ell) / log_L < n) continue;
        const auto members = family.suffix_members(ell);
        for (const auto& [la, sa] : members) {
            const double ga = log_g(family.input(la, sa));
            for (const auto& [lb, sb] : members) {
                if (la == lb && sa == sb) continue;
                const double llr = ga - log_g(family.input(lb, sb));
                if (llr > 2.0 * family.eps) {
                    result.pass = false;
                    result.witness = {ell, la, sa, lb, sb, llr};
                    return result;
                }
            }
        }
    }
    return result;
}

// Largest transcript length for which at least one level still qualifies for
// the event-E check.
inline long long max_qualifying_length(const HardFamily& family) {
    if (family.degenerate()) return 0;
    const double log_L = std::log2(static_cast<double>(family.L));
    return static_cast<long long>(
        std::floor(family.lambda_lb * std::pow(family.beta, 2 * family.L) / log_L));
}

// Round partition and level indices of a collaborative transcript.
struct RoundIndexReport {
    int r = 0;           // the unique round with F_r
    int ell_raw = 0;     // level index before clamping
    int ell = 0;         // clamped to [1, L]
    bool clamped = false;
    int tau = 0;         // round whose start falls in the level-ell window
    bool tau_exact = true;
    double zeta = 0.0;
    long long m_r = 0;   // length of round r
    double threshold = 0.0;  // (K T)^{1/R}
};

// Level window check: beta^{2(l-1)} <= alpha K t < beta^{2l}, with t possibly
// the fractional t_0 = 1/K.
inline int level_of_boundary(double alpha_k_t, double beta, int clamp_max) {
    if (alpha_k_t <= 0.0) return 1;
    int ell = static_cast<int>(std::floor(std::log(alpha_k_t) / (2.0 * std::log(beta)))) + 1;
    // guard against floating-point edge placement
    while (ell > 1 && std::pow(beta, 2 * (ell - 1)) > alpha_k_t) --ell;
    while (std::pow(beta, 2 * ell) <= alpha_k_t && ell < clamp_max + 64) ++ell;
    return ell;
}

inline double zeta_of(const HardFamily& family, int ell, int R) {
    if (family.alpha <= 0.0) return 0.0;
    const long double b = family.beta;
    const long double z =
        powl(b, 2.0L * ell) / static_cast<long double>(family.alpha) *
        powl(b, 2.0L * (static_cast<long double>(family.L) / R - 1.0L)) /
        (8.0L * static_cast<long double>(family.K));
    return static_cast<double>(z);
}

inline RoundIndexReport round_index_report(const CollabRun& run, const HardFamily& family,
                                           int R) {
    if (run.round_boundaries.empty())
        throw std::invalid_argument("round_index_report: run has no round boundaries");
    const auto& t = run.round_boundaries;
    const int rounds = static_cast<int>(t.size());
    const double K = static_cast<double>(run.K);
    const double horizon = static_cast<double>(t.back());

    RoundIndexReport report;
    report.threshold = std::pow(K * horizon, 1.0 / R);

    // F_r: first round whose boundary ratio reaches the threshold, exact via
    // the certificate arithmetic on prefixes.
    report.r = rounds;
    for (int r = 1; r <= rounds; ++r) {
        using boost::multiprecision::cpp_int;
        cpp_int num = (r == 1) ? cpp_int(run.K) * t[0] : cpp_int(t[r - 1]);
        cpp_int den = (r == 1) ? cpp_int(1) : cpp_int(t[r - 2]);
        // num/den >= (K t_R)^{1/R}  <=>  num^R >= K t_R den^R
        if (boost::multiprecision::pow(num, R) >=
            cpp_int(run.K) * t.back() * boost::multiprecision::pow(den, R)) {
            report.r = r;
            break;
        }
    }

    const double t_prev = (report.r == 1) ? 1.0 / K : static_cast<double>(t[report.r - 2]);
    report.m_r = t[report.r - 1] - (report.r == 1 ? 0 : t[report.r - 2]);

    if (family.alpha > 0.0) {
        report.ell_raw = level_of_boundary(family.alpha * K * t_prev, family.beta, family.L);
        report.ell = std::min(std::max(report.ell_raw, 1), family.L);
        report.clamped = report.ell != report.ell_raw;
        report.zeta = zeta_of(family, report.ell, R);
        // tau: the round whose preceding boundary lands in the level window
        report.tau = 0;
        for (int r = 1; r <= rounds; ++r) {
            const double tp = (r == 1) ? 1.0 / K : static_cast<double>(t[r - 2]);
            if (level_of_boundary(family.alpha * K * tp, family.beta, family.L) == report.ell) {
                report.tau = r;
                break;
            }
        }
        if (report.tau == 0) {
            // no round starts inside the window; fall back to the F_r round
            report.tau = report.r;
            report.tau_exact = false;
        }
    } else {
        report.ell_raw = report.ell = 1;
        report.clamped = true;
        report.tau = report.r;
        report.tau_exact = false;
    }
    return report;
}

// tau for a caller-chosen level, independent of the F_r round.
inline std::pair<int, bool> tau_for_level(const CollabRun& run, const HardFamily& family,
                                          int ell) {
    const auto& t = run.round_boundaries;
    const double K = static_cast<double>(run.K);
    for (int r = 1; r <= static_cast<int>(t.size()); ++r) {
        const double tp = (r == 1) ? 1.0 / K : static_cast<double>(t[r - 2]);
        const double x = family.alpha * K * tp;
        if (std::pow(family.beta, 2 * (ell - 1)) <= x && x < std::pow(family.beta, 2 * ell))
            return {r, true};
    }
    // fall back to the last round starting below the window's upper edge
    int best = 1;
    for (int r = 1; r <= static_cast<int>(t.size()); ++r) {
        const double tp = (r == 1) ? 1.0 / K : static_cast<double>(t[r - 2]);
        if (family.alpha * K * tp < std::pow(family.beta, 2 * ell)) best = r;
    }
    return {best, false};
}

} // namespace cbsim
