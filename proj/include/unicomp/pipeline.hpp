// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unicomp/alloc.hpp"
#include "unicomp/fgf.hpp"
#include "unicomp/sdc.hpp"

namespace unicomp {

enum class CompressionMode {
    budgeted,   ///< hard total token limit, from retain_ratio or token_max
    automatic,  ///< no limit; grouping and the token threshold decide the ratio
};

enum class AllocVariant { softmax, uniform };

/// Per-group token selector. Only `sdc` is meaningful in automatic mode.
enum class Selector { sdc, unique_topk, attn_topk, random };

struct CompressionConfig {
    double frame_threshold = 0.005;  ///< U_f
    double token_threshold = 0.2;    ///< U_c
    std::optional<double> retain_ratio;
    std::optional<std::size_t> token_max;
    CompressionMode mode = CompressionMode::budgeted;
    TokenOrder order = TokenOrder::ids;
    bool fuse = true;
    FgfVariant fgf_variant = FgfVariant::fusion;
    AllocVariant alloc_variant = AllocVariant::softmax;
    Selector selector = Selector::sdc;
    std::uint64_t seed = 0;         ///< random selector only
    unsigned max_threads = 0;       ///< 0: hardware concurrency; UNICOMP_THREADS caps either way

    /// Throws ConfigError on conflicting or out-of-range settings.
    void validate() const;
};

struct GroupReport {
    FrameRange range;
    std::size_t initial_budget = 0;  ///< from the allocation plan
    std::size_t budget = 0;          ///< after surplus re-allocation
    std::size_t retained = 0;
    std::size_t fused = 0;
    std::size_t dropped = 0;
    std::size_t reruns = 0;          ///< extra selector passes triggered by surplus
    double bound = 0.0;              ///< 2 sum_j min_{i in S} u_ij on the group representative
    double error = 0.0;              ///< nearest-scheme reconstruction error, same inputs

    bool operator==(const GroupReport&) const = default;
};

struct StageTimings {
    double fgf_ms = 0.0;
    double alloc_ms = 0.0;
    double sdc_ms = 0.0;
    double total_ms = 0.0;
};

/// Counts and diagnostics for one compression run; timings are the only nondeterministic fields.
struct CompressionReport {
    CompressionConfig config;
    std::size_t frames = 0;
    std::size_t tokens_per_frame = 0;
    std::size_t token_max = 0;  ///< 0 in automatic mode
    std::vector<GroupReport> groups;
    std::size_t retained = 0;
    std::size_t markers = 0;
    std::size_t emitted = 0;    ///< retained + markers
    double retained_ratio = 0.0;
    std::size_t waste_redistributed = 0;    ///< allocation-time residue moved between groups
    std::size_t surplus_redistributed = 0;  ///< selector surplus handed to other groups
    std::size_t surplus_unused = 0;         ///< surplus left over after the last round
    bool bypassed = false;                  ///< grouping alone met the budget
    bool bounds_renormalized = false;
    StageTimings timings;

    std::size_t original_tokens() const noexcept { return frames * tokens_per_frame; }
};

/**
 * @brief Output of compress(): one CompressedFrame per frame group, in group order.
 *
 * markers[g] is the position of the boundary marker that follows group g in
 * the emitted stream (tokens and markers interleaved).
 */
struct CompressedVideo {
    std::vector<CompressedFrame> frames;
    FrameGrouping grouping;
    AllocationPlan plan;
    std::vector<std::size_t> markers;
    CompressionReport report;
};

/// floor(retain_ratio * T * N), or the explicit token_max.
std::size_t resolve_token_max(const CompressionConfig& config, std::size_t frames, std::size_t tokens_per_frame);

/// Worker count for per-group selection.
unsigned worker_count(const CompressionConfig& config);

/**
 * @brief Frame grouping, token allocation and per-group selection.
 *
 * In budgeted mode, if the grouped video (K_f * N tokens plus K_f markers)
 * already fits token_max every group is emitted whole. Otherwise budgets come
 * from the allocation step, groups whose selector runs out of tokens return
 * the surplus, and it is handed to the other groups for at most three rounds.
 * `attention_scores` (one vector of N scores per original frame) is required
 * for Selector::attn_topk and ignored otherwise.
 */
CompressedVideo compress(const VideoTensor& video, const CompressionConfig& config,
                         std::span<const std::vector<double>> attention_scores = {});

/// Same computation as compress(), metrics only.
CompressionReport analyze(const VideoTensor& video, const CompressionConfig& config,
                          std::span<const std::vector<double>> attention_scores = {});

std::string to_string(CompressionMode mode);
std::string to_string(TokenOrder order);
std::string to_string(FgfVariant variant);
std::string to_string(AllocVariant variant);
std::string to_string(Selector selector);

}  // namespace unicomp
