// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unicomp/tensor.hpp"

namespace unicomp {

/**
 * @brief Per-group token budgets under a total token limit.
 *
 * One boundary marker per group is charged against token_max before any
 * tokens are split, so sum(budgets) + boundary_overhead <= token_max always
 * holds.
 */
struct AllocationPlan {
    std::vector<std::size_t> budgets;
    std::size_t token_max = 0;
    std::size_t boundary_overhead = 0;
    /// Tokens moved by the even-share redistribution (floor residue and cap overflow).
    std::size_t waste_redistributed = 0;
    /// Tokens that could not be placed because every group hit the cap.
    std::size_t unallocated = 0;

    std::size_t total_budget() const noexcept;
};

/// U_t = (1/K_f) sum_s (1 - cos(rep_t, rep_s)), self included.
std::vector<double> frame_uniqueness(std::span<const FeatureVector> representatives);

/// Mean-centres then scales by sqrt(K_f).
std::vector<double> normalize_uniqueness(std::span<const double> uniqueness);

/**
 * @brief Floor-softmax split of the budget left after boundary markers.
 *
 * Budgets are clamped to [1, per_frame_cap]; residue from flooring and from
 * the cap is handed out in even shares to uncapped groups (remainder to the
 * lowest indices) until nothing is left or every group is capped. Throws
 * ConfigError when token_max < 2 * K_f.
 */
AllocationPlan allocate(std::span<const double> normalized_uniqueness, std::size_t token_max,
                        std::size_t per_frame_cap);

/// Equal split ablation: same charging, clamping and redistribution as allocate().
AllocationPlan allocate_uniform(std::size_t group_count, std::size_t token_max, std::size_t per_frame_cap);

/**
 * @brief Hands `amount` tokens out in even rounds to groups flagged eligible and
 * below `cap`, remainder to the lowest indices. Returns the number placed;
 * `increments` receives the per-group additions.
 */
std::size_t redistribute_evenly(std::vector<std::size_t>& budgets, const std::vector<bool>& eligible,
                                std::size_t amount, std::size_t cap, std::vector<std::size_t>* increments = nullptr);

}  // namespace unicomp
