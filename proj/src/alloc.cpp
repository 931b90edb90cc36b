// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "unicomp/core_math.hpp"

namespace unicomp {

std::size_t AllocationPlan::total_budget() const noexcept {
    return std::accumulate(budgets.begin(), budgets.end(), std::size_t{0});
}

std::vector<double> frame_uniqueness(std::span<const FeatureVector> representatives) {
    const std::size_t k = representatives.size();
    if (k == 0) {
        throw ConfigError("frame uniqueness needs at least one representative");
    }
    std::vector<double> out(k, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
        double sum = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            if (s != t) {
                sum += pairwise_uniqueness(std::span<const double>(representatives[t]),
                                           std::span<const double>(representatives[s]));
            } else {
                // Self term is 0, but a zero-norm representative must still be rejected.
                pairwise_uniqueness(std::span<const double>(representatives[t]),
                                    std::span<const double>(representatives[t]));
            }
        }
        out[t] = sum / static_cast<double>(k);
    }
    return out;
}

std::vector<double> normalize_uniqueness(std::span<const double> uniqueness) {
    if (uniqueness.empty()) {
        throw ConfigError("cannot normalize an empty uniqueness vector");
    }
    const double k = static_cast<double>(uniqueness.size());
    const double mean = std::accumulate(uniqueness.begin(), uniqueness.end(), 0.0) / k;
    const double scale = std::sqrt(k);
    std::vector<double> out(uniqueness.size());
    for (std::size_t i = 0; i < uniqueness.size(); ++i) {
        out[i] = (uniqueness[i] - mean) * scale;
    }
    return out;
}

std::size_t redistribute_evenly(std::vector<std::size_t>& budgets, const std::vector<bool>& eligible,
                                std::size_t amount, std::size_t cap, std::vector<std::size_t>* increments) {
    if (increments != nullptr) {
        increments->assign(budgets.size(), 0);
    }
    std::size_t placed = 0;
    std::vector<std::size_t> active;
    while (amount > 0) {
        active.clear();
        for (std::size_t g = 0; g < budgets.size(); ++g) {
            if (eligible[g] && budgets[g] < cap) {
                active.push_back(g);
            }
        }
        if (active.empty()) {
            break;
        }
        const std::size_t share = amount / active.size();
        const std::size_t remainder = amount % active.size();
        for (std::size_t r = 0; r < active.size(); ++r) {
            const std::size_t g = active[r];
            const std::size_t add = std::min(share + (r < remainder ? 1 : 0), cap - budgets[g]);
            budgets[g] += add;
            amount -= add;
            placed += add;
            if (increments != nullptr) {
                (*increments)[g] += add;
            }
        }
    }
    return placed;
}

namespace {

void check_budget(std::size_t group_count, std::size_t token_max, std::size_t per_frame_cap) {
    if (group_count == 0) {
        throw ConfigError("allocation needs at least one group");
    }
    if (per_frame_cap == 0) {
        throw ConfigError("per-frame token cap must be >= 1");
    }
    if (token_max < 2 * group_count) {
        throw ConfigError("budget cannot cover one token plus marker per group (token_max " +
                          std::to_string(token_max) + ", groups " + std::to_string(group_count) + ")");
    }
}

// Clamp to [1, cap], trim any excess over `effective` from the largest budget
// (ties: highest index), then spread the remaining slack evenly.
AllocationPlan settle(std::vector<std::size_t> budgets, std::size_t token_max, std::size_t per_frame_cap) {
    const std::size_t groups = budgets.size();
    const std::size_t effective = token_max - groups;
    for (std::size_t& b : budgets) {
        b = std::clamp<std::size_t>(b, 1, per_frame_cap);
    }
    std::size_t total = std::accumulate(budgets.begin(), budgets.end(), std::size_t{0});
    while (total > effective) {
        std::size_t largest = 0;
        for (std::size_t g = 1; g < groups; ++g) {
            if (budgets[g] >= budgets[largest]) {
                largest = g;
            }
        }
        --budgets[largest];
        --total;
    }

    AllocationPlan plan;
    plan.token_max = token_max;
    plan.boundary_overhead = groups;
    const std::size_t waste = effective - total;
    plan.waste_redistributed = redistribute_evenly(budgets, std::vector<bool>(groups, true), waste, per_frame_cap);
    plan.unallocated = waste - plan.waste_redistributed;
    plan.budgets = std::move(budgets);
    return plan;
}

}  // namespace

AllocationPlan allocate(std::span<const double> normalized_uniqueness, std::size_t token_max,
                        std::size_t per_frame_cap) {
    const std::size_t groups = normalized_uniqueness.size();
    check_budget(groups, token_max, per_frame_cap);
    const std::size_t effective = token_max - groups;

    const double peak = *std::max_element(normalized_uniqueness.begin(), normalized_uniqueness.end());
    std::vector<double> weights(groups);
    double total = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
        weights[g] = std::exp(normalized_uniqueness[g] - peak);
        total += weights[g];
    }
    std::vector<std::size_t> budgets(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        budgets[g] = static_cast<std::size_t>(std::floor(weights[g] / total * static_cast<double>(effective)));
    }
    return settle(std::move(budgets), token_max, per_frame_cap);
}

AllocationPlan allocate_uniform(std::size_t group_count, std::size_t token_max, std::size_t per_frame_cap) {
    check_budget(group_count, token_max, per_frame_cap);
    const std::size_t effective = token_max - group_count;
    std::vector<std::size_t> budgets(group_count, effective / group_count);
    for (std::size_t g = 0; g < effective % group_count; ++g) {
        ++budgets[g];
    }
    return settle(std::move(budgets), token_max, per_frame_cap);
}

}  // namespace unicomp
