#pragma once
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cbsim/instance.hpp"

namespace cbsim {

// One (arm, reward) observation with its attribution.
struct PullRecord {
    std::uint32_t arm = 0;
    double reward = 0.0;
    std::uint32_t agent = 0;
    std::uint32_t round = 0;
};

struct Transcript {
    std::vector<PullRecord> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    void append(std::uint32_t arm, double reward, std::uint32_t agent = 0,
                std::uint32_t round = 0) {
        entries.push_back({arm, reward, agent, round});
    }

    void check_indices(const Instance& instance) const {
        for (const auto& e : entries)
            if (e.arm >= instance.size())
                throw std::out_of_range("transcript arm index out of range");
    }
};

} // namespace cbsim
