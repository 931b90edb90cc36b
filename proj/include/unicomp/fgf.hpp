// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "unicomp/tensor.hpp"

namespace unicomp {

/// Half-open range [begin, end) of frame indices.
struct FrameRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const FrameRange&) const = default;
};

/**
 * @brief Contiguous partition of a video into frame groups with one fused
 * representative per group.
 *
 * representatives[k] is the token-wise mean of the member frames (or the first
 * member verbatim for the first-frame variant); representative_keys follows
 * the same rule when the video carries keys; global_features[k] is the mean of
 * the member frames' global features.
 */
struct FrameGrouping {
    std::vector<FrameRange> groups;
    std::vector<TokenMatrix> representatives;
    std::optional<std::vector<TokenMatrix>> representative_keys;
    std::vector<FeatureVector> global_features;

    std::size_t group_count() const noexcept { return groups.size(); }
};

enum class FgfVariant {
    fusion,       ///< token-wise mean of member frames
    first_frame,  ///< keep the first member frame, no fusion
};

/// Column mean over all tokens of a frame. Throws DegenerateError if the mean is the zero vector.
FeatureVector global_frame_feature(const TokenMatrix& frame);

/**
 * @brief Sequential scan that opens a new group when a frame's uniqueness against
 * the first frame of the current group reaches `frame_threshold`.
 *
 * `global_features`, when nonempty, replaces the mean-pooled per-frame features
 * (one vector per frame, e.g. from a classifier head); it must have one entry
 * per frame.
 */
FrameGrouping group_frames(const VideoTensor& video, double frame_threshold,
                           std::span<const FeatureVector> global_features = {},
                           FgfVariant variant = FgfVariant::fusion);

/// Same boundaries as group_frames; representatives are the first member frames.
FrameGrouping group_frames_first_only(const VideoTensor& video, double frame_threshold,
                                      std::span<const FeatureVector> global_features = {});

}  // namespace unicomp
