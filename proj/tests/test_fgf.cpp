// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "oracles.hpp"
#include "unicomp/fgf.hpp"
#include "unicomp/synthetic.hpp"

namespace unicomp {
namespace {

using synthetic::Rng;

VideoTensor alternating_video(std::size_t frames) {
    VideoTensor v;
    for (std::size_t t = 0; t < frames; ++t) {
        v.frames.push_back(t % 2 == 0 ? TokenMatrix{{1, 0}, {2, 0}} : TokenMatrix{{0, 1}, {0, 3}});
    }
    return v;
}

void expect_partition(const FrameGrouping& g, std::size_t frames) {
    ASSERT_FALSE(g.groups.empty());
    EXPECT_EQ(g.groups.front().begin, 0u);
    EXPECT_EQ(g.groups.back().end, frames);
    for (std::size_t k = 0; k < g.groups.size(); ++k) {
        EXPECT_LT(g.groups[k].begin, g.groups[k].end);
        if (k > 0) {
            EXPECT_EQ(g.groups[k].begin, g.groups[k - 1].end);
        }
    }
    EXPECT_EQ(g.representatives.size(), g.groups.size());
    EXPECT_EQ(g.global_features.size(), g.groups.size());
}

std::vector<std::size_t> starts(const FrameGrouping& g) {
    std::vector<std::size_t> out;
    for (const FrameRange& r : g.groups) {
        out.push_back(r.begin);
    }
    return out;
}

TEST(GlobalFrameFeature, TrivialCases) {
    EXPECT_EQ(global_frame_feature(TokenMatrix{{0.5f, -1}, {0.5f, -1}, {0.5f, -1}}), (FeatureVector{0.5, -1}));
    EXPECT_EQ(global_frame_feature(TokenMatrix{{1, 0}, {0, 1}}), (FeatureVector{0.5, 0.5}));
}

TEST(GlobalFrameFeature, MatchesColumnMean) {
    Rng rng(2);
    const TokenMatrix m = synthetic::gaussian_tokens(196, 4, rng);
    const FeatureVector got = global_frame_feature(m);
    const oracle::Vec want = oracle::column_mean(m);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(got[k], want[k], 1e-7);
    }
}

TEST(GlobalFrameFeature, ZeroMeanIsDegenerate) {
    try {
        global_frame_feature(TokenMatrix{{1, -1}, {-1, 1}});
        FAIL() << "expected DegenerateError";
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate frame feature"), std::string::npos);
    }
}

TEST(GroupFrames, IdenticalFramesFormOneGroup) {
    Rng rng(3);
    VideoTensor v;
    const TokenMatrix f = synthetic::gaussian_tokens(6, 3, rng);
    v.frames.assign(9, f);
    const FrameGrouping g = group_frames(v, 0.005);
    ASSERT_EQ(g.group_count(), 1u);
    EXPECT_EQ(g.groups[0], (FrameRange{0, 9}));
    // Mean of identical frames is that frame, exactly.
    EXPECT_EQ(g.representatives[0], f);
}

TEST(GroupFrames, ZeroThresholdGivesSingletons) {
    Rng rng(4);
    const VideoTensor v = synthetic::random_video(7, 5, 3, rng);
    const FrameGrouping g = group_frames(v, 0.0);
    ASSERT_EQ(g.group_count(), 7u);
    for (std::size_t t = 0; t < 7; ++t) {
        EXPECT_EQ(g.representatives[t], v.frames[t]);
    }
    // Identical frames too: u = 0 still reaches a zero threshold.
    VideoTensor same;
    same.frames.assign(4, v.frames[0]);
    EXPECT_EQ(group_frames(same, 0.0).group_count(), 4u);
}

TEST(GroupFrames, AlternatingOrthogonalFrames) {
    const VideoTensor v = alternating_video(6);
    EXPECT_EQ(group_frames(v, 0.005).group_count(), 6u);
    const FrameGrouping one = group_frames(v, 1.5);
    ASSERT_EQ(one.group_count(), 1u);
    // Token-wise mean of three (1,0),(2,0) frames and three (0,1),(0,3) frames.
    EXPECT_EQ(one.representatives[0], (TokenMatrix{{0.5f, 0.5f}, {1, 1.5f}}));
}

TEST(GroupFrames, MatchesHandScan) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const VideoTensor v = synthetic::scene_video(12, 1 + trial % 5, 4, 3, 0.3, rng);
        oracle::Rows features;
        for (const TokenMatrix& f : v.frames) {
            features.push_back(oracle::column_mean(f));
        }
        for (double uf : {0.0, 0.001, 0.005, 0.05, 0.3, 1.0}) {
            const FrameGrouping g = group_frames(v, uf);
            expect_partition(g, 12);
            EXPECT_EQ(starts(g), oracle::group_starts(features, uf)) << "uf=" << uf;
        }
    }
}

TEST(GroupFrames, RepresentativeIsTokenwiseMean) {
    Rng rng(6);
    const VideoTensor v = synthetic::scene_video(8, 2, 5, 4, 0.01, rng);
    const FrameGrouping g = group_frames(v, 0.005);
    for (std::size_t k = 0; k < g.group_count(); ++k) {
        const FrameRange r = g.groups[k];
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t c = 0; c < 4; ++c) {
                double sum = 0.0;
                for (std::size_t t = r.begin; t < r.end; ++t) {
                    sum += v.frames[t](i, c);
                }
                EXPECT_NEAR(g.representatives[k](i, c), sum / static_cast<double>(r.size()), 1e-6);
            }
        }
        // Global feature of the group is the mean of member global features.
        const oracle::Vec want = oracle::column_mean(g.representatives[k]);
        for (std::size_t c = 0; c < 4; ++c) {
            EXPECT_NEAR(g.global_features[k][c], want[c], 1e-6);
        }
    }
}

VideoTensor angle_video(std::initializer_list<double> degrees) {
    VideoTensor v;
    for (double deg : degrees) {
        const double rad = deg * 3.14159265358979323846 / 180.0;
        const float c = static_cast<float>(std::cos(rad));
        const float s = static_cast<float>(std::sin(rad));
        v.frames.push_back(TokenMatrix{{c, s}, {c, s}});
    }
    return v;
}

// Anchoring on the first frame of each group makes the group count
// non-monotone in U_f: a higher threshold keeps frame 1 in group 0, which
// moves the next anchor to 150 degrees, and frame 3 is far from it.
TEST(GroupFrames, GroupCountIsNotMonotoneInThreshold) {
    const VideoTensor v = angle_video({0.0, 80.0, 150.0, 50.0});
    EXPECT_EQ(group_frames(v, 0.7).group_count(), 2u);
    EXPECT_EQ(group_frames(v, 1.0).group_count(), 3u);
}

TEST(GroupFrames, ThresholdEndpointsAndFirstBoundary) {
    Rng rng(7);
    const std::vector<double> grid{0.0, 1e-4, 1e-3, 0.005, 0.01, 0.05, 0.1, 0.3, 0.7, 1.0, 1.5, 2.0, 2.5};
    for (int trial = 0; trial < 100; ++trial) {
        const VideoTensor v = trial % 2 == 0 ? synthetic::random_video(1 + trial % 17, 4, 3, rng)
                                             : synthetic::scene_video(16, 1 + trial % 6, 4, 3, 0.5, rng);
        EXPECT_EQ(group_frames(v, 0.0).group_count(), v.frame_count());
        EXPECT_EQ(group_frames(v, 2.5).group_count(), 1u);
        // The first opening decision compares against frame 0 for every
        // threshold, so the first group can only grow as U_f rises.
        std::size_t first_end = 0;
        for (double uf : grid) {
            const FrameGrouping g = group_frames(v, uf);
            expect_partition(g, v.frame_count());
            EXPECT_GE(g.groups.front().end, first_end) << "trial " << trial << " uf " << uf;
            first_end = g.groups.front().end;
        }
    }
}

TEST(GroupFrames, KeysFusedLikeFrames) {
    Rng rng(8);
    VideoTensor v = synthetic::random_video(4, 3, 2, rng, 5);
    VideoTensor same;
    same.frames.assign(4, v.frames[0]);
    same.keys = std::vector<TokenMatrix>{(*v.keys)[0], (*v.keys)[1], (*v.keys)[2], (*v.keys)[3]};
    const FrameGrouping g = group_frames(same, 0.005);
    ASSERT_EQ(g.group_count(), 1u);
    ASSERT_TRUE(g.representative_keys.has_value());
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t c = 0; c < 5; ++c) {
            double sum = 0.0;
            for (std::size_t t = 0; t < 4; ++t) {
                sum += (*v.keys)[t](i, c);
            }
            EXPECT_NEAR((*g.representative_keys)[0](i, c), sum / 4.0, 1e-6);
        }
    }
}

TEST(GroupFrames, ExternalGlobalFeaturesDriveTheScan) {
    Rng rng(9);
    const VideoTensor v = synthetic::random_video(5, 3, 2, rng);
    // All frames share one external feature: one group regardless of content.
    const std::vector<FeatureVector> flat(5, FeatureVector{1.0, 2.0, 3.0});
    EXPECT_EQ(group_frames(v, 0.005, flat).group_count(), 1u);
    const std::vector<FeatureVector> wrong(4, FeatureVector{1.0});
    EXPECT_THROW(group_frames(v, 0.005, wrong), ConfigError);
}

TEST(GroupFrames, NegativeThresholdRejected) {
    EXPECT_THROW(group_frames(alternating_video(2), -0.1), ConfigError);
}

TEST(GroupFramesFirstOnly, KeepsFirstMember) {
    Rng rng(10);
    VideoTensor v;
    const TokenMatrix base = synthetic::gaussian_tokens(4, 3, rng);
    for (int t = 0; t < 3; ++t) {
        TokenMatrix f = base;
        f(0, 0) += 1e-4f * static_cast<float>(t);
        v.frames.push_back(f);
    }
    const FrameGrouping g = group_frames_first_only(v, 0.005);
    ASSERT_EQ(g.group_count(), 1u);
    EXPECT_EQ(g.representatives[0], v.frames[0]);

    const FrameGrouping singles = group_frames_first_only(v, 0.0);
    ASSERT_EQ(singles.group_count(), 3u);
    for (std::size_t t = 0; t < 3; ++t) {
        EXPECT_EQ(singles.representatives[t], v.frames[t]);
    }
}

TEST(GroupFramesFirstOnly, SameBoundariesAsFusion) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const VideoTensor v = synthetic::scene_video(10, 3, 4, 3, 0.4, rng);
        for (double uf : {0.0, 0.005, 0.05, 0.5}) {
            EXPECT_EQ(group_frames_first_only(v, uf).groups, group_frames(v, uf).groups);
            EXPECT_EQ(group_frames(v, uf, {}, FgfVariant::first_frame).groups, group_frames(v, uf).groups);
        }
    }
}

}  // namespace
}  // namespace unicomp
