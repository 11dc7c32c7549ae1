#pragma once
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cbsim/instance.hpp"
#include "cbsim/transcript.hpp"

namespace cbsim {

struct LogLikelihood {
    double log_value = 0.0;  // meaningless when zero
    bool zero = false;       // some reward was off the support
};

// ln of the probability that the instance produces the observed reward
// sequence along the pulled index sequence. Kept in log space; the product
// underflows double well before 10^4 steps.
inline LogLikelihood transcript_log_likelihood(const Instance& instance,
                                               const Transcript& transcript) {
    transcript.check_indices(instance);
    LogLikelihood out;
    for (const auto& e : transcript.entries) {
        const double p = instance.arms[e.arm].prob_of(e.reward);
        if (p <= 0.0) {
            out.zero = true;
            return out;
        }
        out.log_value += std::log(p);
    }
    return out;
}

inline double transcript_likelihood(const Instance& instance, const Transcript& transcript) {
    const LogLikelihood ll = transcript_log_likelihood(instance, transcript);
    return ll.zero ? 0.0 : std::exp(ll.log_value);
}

// Per-step log-likelihood ratio between two inputs along a transcript, with
// the compensated supermartingale values Z_t = llr_t - (11/beta^{2l}) t.
struct LikelihoodTrace {
    std::vector<double> steps;  // per-step llr increments, length |gamma|
    std::vector<double> llr;    // cumulative, length |gamma| + 1, llr[0] = 0
    std::vector<double> z;      // Z_t, same indexing
    double step_bound = 0.0;    // 5 / beta^l
    bool step_bound_ok = true;
};

inline LikelihoodTrace llr_trace(const Instance& A, const Instance& B,
                                 const Transcript& transcript, int ell, double beta = 4.0) {
    transcript.check_indices(A);
    transcript.check_indices(B);
    LikelihoodTrace trace;
    trace.step_bound = 5.0 / std::pow(beta, ell);
    const double drift = 11.0 / std::pow(beta, 2 * ell);
    trace.llr.push_back(0.0);
    trace.z.push_back(0.0);
    double cum = 0.0;
    std::size_t t = 0;
    for (const auto& e : transcript.entries) {
        const double pa = A.arms[e.arm].prob_of(e.reward);
        const double pb = B.arms[e.arm].prob_of(e.reward);
        if (pa <= 0.0 || pb <= 0.0)
            throw std::domain_error("llr_trace: zero likelihood step");
        const double step = std::log(pa) - std::log(pb);
        if (std::abs(step) > trace.step_bound) trace.step_bound_ok = false;
        cum += step;
        ++t;
        trace.steps.push_back(step);
        trace.llr.push_back(cum);
        trace.z.push_back(cum - drift * static_cast<double>(t));
    }
    return trace;
}

// Exact conditional expected llr step when the outcome is drawn from I:
//   (1/2 + dI) ln((1+2dA)/(1+2dB)) + (1/2 - dI) ln((1-2dA)/(1-2dB))
// per arm, checked against the 11/beta^{2l} drift bound.
struct DriftReport {
    struct PerArm {
        double drift = 0.0;
        double bound = 0.0;
        bool ok = true;
    };
    std::vector<PerArm> arms;
    bool all_ok = true;
};

inline DriftReport drift_bound_check(const Instance& A, const Instance& B, const Instance& I,
                                     int ell, double beta = 4.0) {
    const double radius = 1.0 / std::pow(beta, ell);
    for (const Instance* inst : {&A, &B, &I})
        for (const Arm& arm : inst->arms)
            if (std::abs(arm.mean - 0.5) > radius + kProbTolerance)
                throw std::invalid_argument("drift_bound_check: input not in the level-l suffix");

    DriftReport report;
    const double bound = 11.0 / std::pow(beta, 2 * ell);
    for (std::size_t j = 0; j < I.size(); ++j) {
        const double dA = A.arms[j].mean - 0.5;
        const double dB = B.arms[j].mean - 0.5;
        const double dI = I.arms[j].mean - 0.5;
        const double drift =
            (0.5 + dI) * std::log((1.0 + 2.0 * dA) / (1.0 + 2.0 * dB)) +
            (0.5 - dI) * std::log((1.0 - 2.0 * dA) / (1.0 - 2.0 * dB));
        const bool ok = drift <= bound;
        report.arms.push_back({drift, bound, ok});
        report.all_ok = report.all_ok && ok;
    }
    return report;
}

} // namespace cbsim
