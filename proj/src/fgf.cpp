// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/fgf.hpp"

#include <string>

#include "unicomp/core_math.hpp"

namespace unicomp {

namespace {

TokenMatrix token_wise_mean(std::span<const TokenMatrix> frames) {
    const std::size_t n = frames.front().rows();
    const std::size_t d = frames.front().cols();
    std::vector<double> sum(n * d, 0.0);
    for (const TokenMatrix& f : frames) {
        const auto v = f.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum[i] += v[i];
        }
    }
    const double count = static_cast<double>(frames.size());
    TokenMatrix out(n, d);
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<float>(sum[i] / count);
    }
    return out;
}

FeatureVector mean_of(std::span<const FeatureVector> vectors) {
    FeatureVector out(vectors.front().size(), 0.0);
    for (const FeatureVector& v : vectors) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            out[k] += v[k];
        }
    }
    for (double& x : out) {
        x /= static_cast<double>(vectors.size());
    }
    return out;
}

}  // namespace

FeatureVector global_frame_feature(const TokenMatrix& frame) {
    check_token_matrix(frame, "frame");
    FeatureVector mean(frame.cols(), 0.0);
    for (std::size_t m = 0; m < frame.rows(); ++m) {
        const auto row = frame.row(m);
        for (std::size_t k = 0; k < frame.cols(); ++k) {
            mean[k] += row[k];
        }
    }
    bool nonzero = false;
    for (double& x : mean) {
        x /= static_cast<double>(frame.rows());
        nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) {
        throw DegenerateError("degenerate frame feature (all-zero mean)");
    }
    return mean;
}

FrameGrouping group_frames(const VideoTensor& video, double frame_threshold,
                           std::span<const FeatureVector> global_features, FgfVariant variant) {
    video.validate();
    if (!(frame_threshold >= 0.0)) {
        throw ConfigError("frame uniqueness threshold must be >= 0");
    }
    const std::size_t t_count = video.frame_count();

    std::vector<FeatureVector> globals;
    if (global_features.empty()) {
        globals.reserve(t_count);
        for (std::size_t t = 0; t < t_count; ++t) {
            try {
                globals.push_back(global_frame_feature(video.frames[t]));
            } catch (const DegenerateError&) {
                throw DegenerateError("degenerate frame feature at frame " + std::to_string(t));
            }
        }
    } else {
        if (global_features.size() != t_count) {
            throw ConfigError("expected " + std::to_string(t_count) + " external global features, got " +
                              std::to_string(global_features.size()));
        }
        globals.assign(global_features.begin(), global_features.end());
    }

    FrameGrouping out;
    std::size_t anchor = 0;
    for (std::size_t t = 1; t < t_count; ++t) {
        if (pairwise_uniqueness(std::span<const double>(globals[t]), std::span<const double>(globals[anchor])) >=
            frame_threshold) {
            out.groups.push_back({anchor, t});
            anchor = t;
        }
    }
    out.groups.push_back({anchor, t_count});

    const auto frames = std::span<const TokenMatrix>(video.frames);
    if (video.keys) {
        out.representative_keys.emplace();
    }
    for (const FrameRange& g : out.groups) {
        const auto members = frames.subspan(g.begin, g.size());
        const auto member_globals = std::span<const FeatureVector>(globals).subspan(g.begin, g.size());
        if (variant == FgfVariant::first_frame) {
            out.representatives.push_back(members.front());
            out.global_features.push_back(member_globals.front());
            if (video.keys) {
                out.representative_keys->push_back((*video.keys)[g.begin]);
            }
        } else {
            out.representatives.push_back(members.size() == 1 ? members.front() : token_wise_mean(members));
            out.global_features.push_back(mean_of(member_globals));
            if (video.keys) {
                const auto keys = std::span<const TokenMatrix>(*video.keys).subspan(g.begin, g.size());
                out.representative_keys->push_back(keys.size() == 1 ? keys.front() : token_wise_mean(keys));
            }
        }
    }
    return out;
}

FrameGrouping group_frames_first_only(const VideoTensor& video, double frame_threshold,
                                      std::span<const FeatureVector> global_features) {
    return group_frames(video, frame_threshold, global_features, FgfVariant::first_frame);
}

}  // namespace unicomp
