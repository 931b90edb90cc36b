// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "unicomp/tensor.hpp"

namespace unicomp {

/// Emission order of retained tokens.
enum class TokenOrder {
    ids,         ///< original token order
    uniqueness,  ///< selection order (descending uniqueness)
};

struct SdcOptions {
    double token_threshold = 0.2;  ///< U_c: tokens closer than this to a selected token are fused into it
    TokenOrder order = TokenOrder::ids;
    bool fuse = true;
};

/**
 * @brief Result of compressing one frame.
 *
 * retained_ids, every id in redundancy_map and dropped_unclaimed together
 * partition [0, N). redundancy_map[k] lists, in ascending order, the ids
 * fused into retained_ids[k].
 */
struct CompressedFrame {
    SelectionSet retained_ids;
    TokenMatrix retained_features;
    std::vector<std::vector<TokenId>> redundancy_map;
    std::vector<TokenId> dropped_unclaimed;

    std::size_t retained() const noexcept { return retained_ids.size(); }
    std::size_t fused() const noexcept;

    bool operator==(const CompressedFrame&) const = default;
};

/**
 * @brief Literal greedy loop: per-pair uniqueness, ordered id sets, one
 * candidate at a time.
 *
 * Ranks tokens by descending mean uniqueness (ties: lower id), walks the
 * ranking, skips ids already selected or fused, selects the next id, claims
 * every unclaimed j != i with u_ij < U_c as its neighbourhood and, with
 * fusion on, replaces x_i by (x_i + mean of the neighbours' original
 * features) / 2. Stops once k_budget tokens are selected or the ranking runs
 * out. The graph is built on key_frame when given, else on frame.
 */
CompressedFrame sdc_reference(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget,
                              const SdcOptions& options = {});

/**
 * @brief Matrix form of sdc_reference with identical output.
 *
 * Builds the whole uniqueness graph with the cached-norm kernel, ranks once,
 * and tracks claims in a flat mask so each selection is a single row scan.
 */
CompressedFrame sdc_parallel(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget,
                             const SdcOptions& options = {});

/// Keeps the k_budget highest-scoring tokens (ties: lower id), in original order, no fusion.
CompressedFrame attn_topk(const TokenMatrix& frame, std::span<const double> attention_scores, std::size_t k_budget);

namespace detail {

/// Ids sorted by descending score, ties broken by lower id.
std::vector<TokenId> rank_descending(std::span<const double> scores);

/// Builds a CompressedFrame for a plain top-k style selection (no fusion, no neighbours).
CompressedFrame plain_selection(const TokenMatrix& frame, std::vector<TokenId> selected, TokenOrder order);

}  // namespace detail

}  // namespace unicomp
