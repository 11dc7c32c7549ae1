#pragma once
#include <cmath>
#include <span>
#include <stdexcept>

#include "cbsim/instance.hpp"
#include "cbsim/transcript.hpp"

namespace cbsim {

// Sum over pulls of (mu_star - mu_pulled). Depends only on the multiset of
// pulled indices, never on the rewards.
inline double regret_of_transcript(const Instance& instance, const Transcript& transcript) {
    transcript.check_indices(instance);
    double total = 0.0;
    for (const auto& e : transcript.entries) total += instance.gaps[e.arm];
    return total;
}

struct RegretEstimate {
    double mean = 0.0;
    double halfwidth = 0.0;
    std::size_t runs = 0;
};

// Hoeffding halfwidth for a sample of values in [0, value_range] at the given
// two-sided confidence level.
inline double hoeffding_halfwidth(double value_range, std::size_t n, double confidence) {
    if (n == 0) throw std::invalid_argument("halfwidth of empty sample");
    const double delta = 1.0 - confidence;
    return value_range * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

inline RegretEstimate mean_with_hoeffding(std::span<const double> values, double value_range,
                                          double confidence = 0.99) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    RegretEstimate est;
    est.runs = values.size();
    est.mean = sum / static_cast<double>(values.size());
    est.halfwidth = hoeffding_halfwidth(value_range, values.size(), confidence);
    return est;
}

// Sample-mean regret across runs with a Hoeffding halfwidth. The per-trial
// range is the largest gap times the longest transcript seen.
inline RegretEstimate expected_regret(const Instance& instance,
                                      std::span<const Transcript> runs,
                                      double confidence = 0.99) {
    if (runs.empty()) throw std::invalid_argument("expected_regret needs at least one run");
    std::vector<double> regrets;
    regrets.reserve(runs.size());
    std::size_t max_len = 0;
    for (const auto& t : runs) {
        regrets.push_back(regret_of_transcript(instance, t));
        max_len = std::max(max_len, t.size());
    }
    double max_gap = 0.0;
    for (double g : instance.gaps) max_gap = std::max(max_gap, g);
    const double range = max_gap * static_cast<double>(max_len);
    return mean_with_hoeffding(regrets, range, confidence);
}

} // namespace cbsim
