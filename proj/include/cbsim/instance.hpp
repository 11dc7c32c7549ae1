#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cbsim/rng.hpp"

namespace cbsim {

inline constexpr double kProbTolerance = 1e-12;

enum class ArmKind { bernoulli, bounded_discrete };

// One reward distribution with support in [0, 1] and known true mean.
struct Arm {
    ArmKind kind = ArmKind::bernoulli;
    double mean = 0.0;
    // (value, probability) pairs; for bernoulli this is implied by the mean.
    std::vector<std::pair<double, double>> support;

    static Arm bernoulli(double mean) {
        Arm a;
        a.kind = ArmKind::bernoulli;
        a.mean = mean;
        a.support = {{0.0, 1.0 - mean}, {1.0, mean}};
        a.validate();
        return a;
    }

    static Arm bounded_discrete(std::vector<std::pair<double, double>> sup) {
        Arm a;
        a.kind = ArmKind::bounded_discrete;
        a.support = std::move(sup);
        double m = 0.0;
        for (const auto& [v, p] : a.support) m += v * p;
        a.mean = m;
        a.validate();
        return a;
    }

    void validate() const {
        double total = 0.0;
        for (const auto& [v, p] : support) {
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("arm support value outside [0,1]");
            if (p < 0.0 || p > 1.0 + kProbTolerance)
                throw std::invalid_argument("arm probability outside [0,1]");
            total += p;
        }
        if (std::abs(total - 1.0) > kProbTolerance)
            throw std::invalid_argument("arm probabilities do not sum to 1");
        if (mean < 0.0 || mean > 1.0)
            throw std::invalid_argument("arm mean outside [0,1]");
    }

    // Pr[reward == outcome]; 0 for outcomes off the support.
    double prob_of(double outcome) const {
        for (const auto& [v, p] : support)
            if (std::abs(v - outcome) <= kProbTolerance) return p;
        return 0.0;
    }
};

inline double sample_reward(const Arm& arm, RngStream& stream) {
    if (arm.kind == ArmKind::bernoulli)
        return stream.next_bernoulli(arm.mean) ? 1.0 : 0.0;
    double u = stream.next_double();
    double acc = 0.0;
    for (const auto& [v, p] : arm.support) {
        acc += p;
        if (u < acc) return v;
    }
    return arm.support.back().first;
}

// Ground-truth environment: ordered arms with gaps precomputed.
// Ties for the best mean break to the lowest index.
struct Instance {
    std::vector<Arm> arms;
    std::size_t star_index = 0;
    std::vector<double> gaps;     // mu_star - mu_a
    double min_gap = 0.0;         // min over suboptimal arms; 0 when all equal
    bool all_means_equal = false;
    std::string label;

    static Instance from_arms(std::vector<Arm> arms, std::string label = {}) {
        if (arms.empty()) throw std::invalid_argument("instance needs at least one arm");
        Instance inst;
        inst.arms = std::move(arms);
        inst.label = std::move(label);
        double best = inst.arms[0].mean;
        for (std::size_t i = 1; i < inst.arms.size(); ++i)
            if (inst.arms[i].mean > best) { best = inst.arms[i].mean; inst.star_index = i; }
        inst.gaps.resize(inst.arms.size());
        double mg = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < inst.arms.size(); ++i) {
            inst.gaps[i] = best - inst.arms[i].mean;
            if (i != inst.star_index) mg = std::min(mg, inst.gaps[i]);
        }
        // min_gap is only meaningful with >= 2 arms
        if (inst.arms.size() < 2) {
            inst.min_gap = 0.0;
            inst.all_means_equal = true;
        } else {
            inst.min_gap = mg;
            inst.all_means_equal = (mg == 0.0);
        }
        return inst;
    }

    static Instance bernoulli(const std::vector<double>& means, std::string label = {}) {
        std::vector<Arm> arms;
        arms.reserve(means.size());
        for (double m : means) arms.push_back(Arm::bernoulli(m));
        return from_arms(std::move(arms), std::move(label));
    }

    std::size_t size() const { return arms.size(); }
    double star_mean() const { return arms[star_index].mean; }
};

} // namespace cbsim
