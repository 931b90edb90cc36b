// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "unicomp/core_math.hpp"

namespace unicomp {

namespace {

void check_budget(const TokenMatrix& frame, std::size_t k_budget) {
    check_token_matrix(frame, "frame");
    if (k_budget < 1 || k_budget > frame.rows()) {
        throw ConfigError("token budget " + std::to_string(k_budget) + " outside [1, " +
                          std::to_string(frame.rows()) + "]");
    }
}

}  // namespace

CompressedFrame random_select(const TokenMatrix& frame, std::size_t k_budget, std::uint64_t seed) {
    check_budget(frame, k_budget);
    std::mt19937_64 rng(seed);
    std::vector<TokenId> ids(frame.rows());
    std::iota(ids.begin(), ids.end(), TokenId{0});
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k_budget; ++i) {
        const std::size_t span = ids.size() - i;
        const std::size_t pick = i + static_cast<std::size_t>(rng() % span);
        std::swap(ids[i], ids[pick]);
    }
    ids.resize(k_budget);
    return detail::plain_selection(frame, std::move(ids), TokenOrder::ids);
}

CompressedFrame unique_topk(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget) {
    check_budget(frame, k_budget);
    const TokenMatrix& graph = key_frame != nullptr ? *key_frame : frame;
    if (graph.rows() != frame.rows()) {
        throw ConfigError("key frame token count differs from frame");
    }
    std::vector<TokenId> ranking = detail::rank_descending(token_uniqueness(graph));
    ranking.resize(k_budget);
    return detail::plain_selection(frame, std::move(ranking), TokenOrder::ids);
}

}  // namespace unicomp
