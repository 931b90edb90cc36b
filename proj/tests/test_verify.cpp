// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "unicomp/synthetic.hpp"
#include "unicomp/verify.hpp"

namespace unicomp::verify {
namespace {

TEST(BoundSuite, CleanOnRandomFrames) {
    BoundSuiteOptions options;
    options.trials = 300;
    const BoundSuiteResult r = run_bound_suite(options);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.nearest_identity.checks, 300u);
    EXPECT_EQ(r.step2_inequality.checks, 300u);
    EXPECT_EQ(r.monotone_bound.checks, 300u);
    EXPECT_LE(r.nearest_identity.worst, 1e-9);
    EXPECT_EQ(r.softmax_checks, 300u);
}

TEST(BoundSuite, TinyFramesStillExerciseEveryInvariant) {
    BoundSuiteOptions options;
    options.trials = 50;
    options.max_n = 2;
    const BoundSuiteResult r = run_bound_suite(options);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.nearest_identity.checks, 50u);
    EXPECT_EQ(r.step2_inequality.checks, 50u);
    EXPECT_EQ(r.monotone_bound.checks, 50u);
}

TEST(BoundSuite, ExtraFramesAreChecked) {
    synthetic::Rng rng(1);
    const std::vector<TokenMatrix> extra{synthetic::gaussian_tokens(10, 4, rng), synthetic::gaussian_tokens(3, 7, rng)};
    BoundSuiteOptions options;
    options.trials = 5;
    const BoundSuiteResult r = run_bound_suite(options, extra);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.nearest_identity.checks, 7u);
}

TEST(BoundSuite, Deterministic) {
    BoundSuiteOptions options;
    options.trials = 100;
    const BoundSuiteResult a = run_bound_suite(options);
    const BoundSuiteResult b = run_bound_suite(options);
    EXPECT_EQ(a.nearest_identity.worst, b.nearest_identity.worst);
    EXPECT_EQ(a.softmax_above_min_bound, b.softmax_above_min_bound);
}

TEST(BenchSdc, TinyCaseRunsBothPaths) {
    SdcBenchOptions options;
    options.tokens = 8;
    options.dims = 4;
    options.budget = 3;
    options.repeat = 5;
    const SdcBenchResult r = bench_sdc(options);
    EXPECT_EQ(r.mismatches, 0u);
    EXPECT_GT(r.reference_median_ms, 0.0);
    EXPECT_GT(r.parallel_median_ms, 0.0);
}

TEST(SameCompressedFrame, ToleranceOnFeaturesOnly) {
    CompressedFrame a;
    a.retained_ids = {0, 2};
    a.retained_features = TokenMatrix{{1.0f}, {2.0f}};
    a.redundancy_map = {{1}, {}};
    CompressedFrame b = a;
    b.retained_features(1, 0) = 2.0f + 5e-7f;
    EXPECT_TRUE(same_compressed_frame(a, b));
    b.retained_features(1, 0) = 2.001f;
    EXPECT_FALSE(same_compressed_frame(a, b));
    CompressedFrame c = a;
    c.redundancy_map = {{}, {1}};
    EXPECT_FALSE(same_compressed_frame(a, c));
}

}  // namespace
}  // namespace unicomp::verify
