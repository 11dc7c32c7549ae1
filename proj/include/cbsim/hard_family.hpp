#pragma once
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbsim/instance.hpp"

namespace cbsim {

// Two-arm Bernoulli family with geometrically shrinking gaps: level l has
// means 1/2 +- sigma/beta^l, gap 2/beta^l. The analysis constants eps and
// lambda_lb default to the asymptotic-scale values; lambda_lb can be raised for
// desk-scale Monte Carlo ("scaled analysis mode").
struct HardFamily {
    int L = 1;
    double beta = 4.0;
    double eps = 0.1;
    double lambda_lb = 1e-6;
    double alpha = 0.0;  // log2(L) / (2 * lambda_lb); 0 for the degenerate L = 1
    long long K = 1;
    long long T = 1;
    // levels[l-1][0] = I_l^+, levels[l-1][1] = I_l^-
    std::vector<std::array<Instance, 2>> levels;

    bool degenerate() const { return L <= 1; }

    double gap(int ell) const { return 2.0 / std::pow(beta, ell); }

    const Instance& input(int ell, int sigma) const {
        if (ell < 1 || ell > L) throw std::out_of_range("hard-family level out of range");
        if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +-1");
        return levels[ell - 1][sigma == 1 ? 0 : 1];
    }

    // Members of the suffix set starting at level ell, as (level, sigma) pairs.
    std::vector<std::pair<int, int>> suffix_members(int ell) const {
        std::vector<std::pair<int, int>> out;
        for (int l = ell; l <= L; ++l) {
            out.emplace_back(l, +1);
            out.emplace_back(l, -1);
        }
        return out;
    }
};

inline HardFamily make_hard_family(long long K, long long T, double beta = 4.0,
                                   double eps = 0.1, double lambda_lb = 1e-6) {
    if (K < 1 || T < 1) throw std::invalid_argument("K and T must be >= 1");
    if (beta <= 1.0) throw std::invalid_argument("beta must be > 1");
    const double kt4 = 4.0 * static_cast<double>(K) * static_cast<double>(T);
    if (kt4 < 16.0) throw std::invalid_argument("need 4KT >= 16 so that L >= 1");

    HardFamily fam;
    fam.beta = beta;
    fam.eps = eps;
    fam.lambda_lb = lambda_lb;
    fam.K = K;
    fam.T = T;
    fam.L = std::max(1, static_cast<int>(std::floor(std::log2(kt4) / 4.0 + 1e-9)));
    fam.alpha = fam.L > 1 ? std::log2(static_cast<double>(fam.L)) / (2.0 * lambda_lb) : 0.0;

    for (int ell = 1; ell <= fam.L; ++ell) {
        const double offset = 1.0 / std::pow(beta, ell);
        if (offset >= 0.5)
            throw std::invalid_argument("arm means fall outside (0,1) at level 1");
        auto name = [&](char s) {
            return "I_" + std::to_string(ell) + "^" + s;
        };
        fam.levels.push_back(
            {Instance::bernoulli({0.5 + offset, 0.5 - offset}, name('+')),
             Instance::bernoulli({0.5 - offset, 0.5 + offset}, name('-'))});
    }
    return fam;
}

} // namespace cbsim
