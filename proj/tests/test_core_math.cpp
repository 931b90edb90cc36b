// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "unicomp/core_math.hpp"
#include "unicomp/synthetic.hpp"

namespace unicomp {
namespace {

using synthetic::Rng;

TEST(PairwiseUniqueness, TrivialAngles) {
    const std::vector<float> e0{1, 0};
    const std::vector<float> e1{0, 1};
    const std::vector<float> neg{-1, 0};
    EXPECT_DOUBLE_EQ(pairwise_uniqueness(e0, e0), 0.0);
    EXPECT_DOUBLE_EQ(pairwise_uniqueness(e0, e1), 1.0);
    EXPECT_DOUBLE_EQ(pairwise_uniqueness(e0, neg), 2.0);
}

TEST(PairwiseUniqueness, ZeroNormIsAnError) {
    const std::vector<float> zero{0, 0};
    const std::vector<float> e0{1, 0};
    EXPECT_THROW(pairwise_uniqueness(zero, e0), DegenerateError);
    try {
        pairwise_uniqueness(e0, zero);
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate feature vector"), std::string::npos);
    }
}

TEST(PairwiseUniqueness, RangeAndSymmetry) {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const TokenMatrix m = synthetic::gaussian_tokens(2, 1 + trial % 9, rng);
        const double a = pairwise_uniqueness(m.row(0), m.row(1));
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 2.0);
        EXPECT_EQ(a, pairwise_uniqueness(m.row(1), m.row(0)));
    }
}

TEST(UniquenessMatrix, SmallCases) {
    const TokenMatrix same{{0.3f, 0.4f}, {0.3f, 0.4f}};
    const UniquenessMatrix u_same = uniqueness_matrix(same);
    for (double v : u_same.values()) {
        EXPECT_DOUBLE_EQ(v, 0.0);
    }
    const UniquenessMatrix u = uniqueness_matrix(TokenMatrix{{1, 0}, {0, 1}});
    EXPECT_EQ(u, (UniquenessMatrix{{0, 1}, {1, 0}}));
}

TEST(UniquenessMatrix, MatchesBruteForce) {
    Rng rng(5);
    const TokenMatrix m = synthetic::unit_tokens(5, 7, rng);
    const UniquenessMatrix u = uniqueness_matrix(m);
    const oracle::Rows want = oracle::uniqueness_matrix(oracle::to_rows(m));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            EXPECT_NEAR(u(i, j), want[i][j], 1e-6);
        }
    }
}

TEST(UniquenessMatrix, BitwiseEqualToPairwiseForAnyShape) {
    Rng rng(17);
    for (std::size_t n : {1u, 2u, 3u, 7u, 8u, 9u, 17u, 33u}) {
        for (std::size_t d : {1u, 3u, 16u, 65u}) {
            const TokenMatrix m = synthetic::gaussian_tokens(n, d, rng);
            const UniquenessMatrix u = uniqueness_matrix(m);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_EQ(u(i, i), 0.0);
                for (std::size_t j = 0; j < n; ++j) {
                    if (i != j) {
                        ASSERT_EQ(u(i, j), pairwise_uniqueness(m.row(i), m.row(j))) << n << "x" << d;
                    }
                }
            }
        }
    }
}

TEST(UniquenessMatrix, NamesZeroRow) {
    const TokenMatrix m{{1, 0}, {0, 1}, {0, 0}};
    try {
        uniqueness_matrix(m);
        FAIL() << "expected DegenerateError";
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
}

TEST(TokenUniqueness, TrivialCases) {
    const UniquenessVector orth = token_uniqueness(TokenMatrix{{1, 0}, {0, 1}});
    EXPECT_DOUBLE_EQ(orth[0], 0.5);
    EXPECT_DOUBLE_EQ(orth[1], 0.5);
    const UniquenessVector same = token_uniqueness(TokenMatrix(4, 3, 0.25f));
    for (double v : same) {
        EXPECT_DOUBLE_EQ(v, 0.0);
    }
}

TEST(TokenUniqueness, MatchesNaiveSum) {
    Rng rng(8);
    const TokenMatrix m = synthetic::gaussian_tokens(8, 5, rng);
    const UniquenessVector got = token_uniqueness(m);
    const oracle::Vec want = oracle::token_uniqueness(oracle::to_rows(m));
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(got[i], want[i], 1e-6);
        EXPECT_LE(got[i], 2.0 * 7.0 / 8.0 + 1e-12);
    }
}

TEST(Reconstruction, NearestKeepsSelectedTokens) {
    Rng rng(3);
    const TokenMatrix m = synthetic::unit_tokens(6, 4, rng);
    const std::vector<TokenId> s{1, 4};
    const RealMatrix hat = reconstruction(m, s, ReconstructionScheme::nearest);
    const RealMatrix unit = normalize_rows(m);
    for (TokenId j : s) {
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_EQ(hat(j, k), unit(j, k));
        }
    }
}

TEST(Reconstruction, NearestTieGoesToLowestId) {
    // Token 2 is equally close to tokens 0 and 1.
    const TokenMatrix m{{1, 0}, {0, 1}, {1, 1}};
    const RealMatrix hat = reconstruction(m, std::vector<TokenId>{1, 0}, ReconstructionScheme::nearest);
    EXPECT_DOUBLE_EQ(hat(2, 0), 1.0);
    EXPECT_DOUBLE_EQ(hat(2, 1), 0.0);
}

TEST(Reconstruction, SoftmaxWeightColumnsSumToOne) {
    Rng rng(4);
    const TokenMatrix m = synthetic::unit_tokens(6, 3, rng);
    const RealMatrix w = softmax_weights(normalize_rows(m), std::vector<TokenId>{0, 5});
    ASSERT_EQ(w.rows(), 2u);
    for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(w(0, j) + w(1, j), 1.0, 1e-9);
    }
}

TEST(Reconstruction, EmptySelectionIsAnError) {
    const TokenMatrix m{{1, 0}, {0, 1}};
    EXPECT_THROW(reconstruction(m, {}, ReconstructionScheme::softmax), ConfigError);
    EXPECT_THROW(reconstruction_error(m, {}, ReconstructionScheme::nearest), ConfigError);
    EXPECT_THROW(uniqueness_bound(m, {}), ConfigError);
    EXPECT_THROW(step2_bound(m, {}), ConfigError);
    EXPECT_THROW(uniqueness_bound(m, std::vector<TokenId>{2}), ConfigError);
    EXPECT_THROW(uniqueness_bound(m, std::vector<TokenId>{0, 0}), ConfigError);
}

TEST(ReconstructionError, TrivialCases) {
    const TokenMatrix orth{{1, 0}, {0, 1}};
    EXPECT_DOUBLE_EQ(reconstruction_error(orth, std::vector<TokenId>{0}, ReconstructionScheme::nearest).value, 2.0);
    EXPECT_DOUBLE_EQ(uniqueness_bound(orth, std::vector<TokenId>{0}).value, 2.0);
    EXPECT_DOUBLE_EQ(reconstruction_error(orth, std::vector<TokenId>{0, 1}, ReconstructionScheme::nearest).value,
                     0.0);
    EXPECT_DOUBLE_EQ(uniqueness_bound(orth, std::vector<TokenId>{0, 1}).value, 0.0);

    const TokenMatrix single{{0.6f, 0.8f}};
    EXPECT_NEAR(step2_bound(single, std::vector<TokenId>{0}).value, 0.0, 1e-12);
    const TokenMatrix same(3, 2, 0.5f);
    EXPECT_NEAR(step2_bound(same, std::vector<TokenId>{0, 1, 2}).value, 0.0, 1e-12);
}

TEST(ReconstructionError, ExhaustiveTriplesMatchBruteForce) {
    Rng rng(10);
    const TokenMatrix m = synthetic::unit_tokens(10, 4, rng);
    std::size_t subsets = 0;
    for (TokenId a = 0; a < 10; ++a) {
        for (TokenId b = a + 1; b < 10; ++b) {
            for (TokenId c = b + 1; c < 10; ++c) {
                const std::vector<TokenId> s{a, b, c};
                EXPECT_NEAR(reconstruction_error(m, s, ReconstructionScheme::nearest).value,
                            oracle::nearest_error(m, s), 1e-6);
                EXPECT_NEAR(reconstruction_error(m, s, ReconstructionScheme::softmax).value,
                            oracle::softmax_error(m, s), 1e-6);
                ++subsets;
            }
        }
    }
    EXPECT_EQ(subsets, 120u);
}

TEST(Bounds, NearestIdentityAndStep2OnRandomSelections) {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng.index(1, 12);
        const TokenMatrix m = synthetic::unit_tokens(n, rng.index(1, 6), rng);
        const auto s = synthetic::random_subset(n, rng.index(1, n), rng);
        const double nearest = reconstruction_error(m, s, ReconstructionScheme::nearest).value;
        const double bound = uniqueness_bound(m, s).value;
        EXPECT_NEAR(nearest, bound, 1e-6);
        EXPECT_NEAR(bound, oracle::min_bound(m, s), 1e-6);
        EXPECT_LE(reconstruction_error(m, s, ReconstructionScheme::softmax).value, step2_bound(m, s).value + 1e-6);
    }
}

TEST(Bounds, AddingATokenNeverRaisesTheBound) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const TokenMatrix m = synthetic::unit_tokens(9, 3, rng);
        auto s = synthetic::random_subset(9, 4, rng);
        const double before = uniqueness_bound(m, s).value;
        for (TokenId extra = 0; extra < 9; ++extra) {
            if (std::find(s.begin(), s.end(), extra) == s.end()) {
                auto grown = s;
                grown.push_back(extra);
                EXPECT_LE(uniqueness_bound(m, grown).value, before + 1e-12);
            }
        }
    }
}

TEST(Bounds, RenormalizationIsFlagged) {
    const TokenMatrix unit{{1, 0}, {0, 1}};
    EXPECT_FALSE(uniqueness_bound(unit, std::vector<TokenId>{0}).renormalized);
    const TokenMatrix scaled{{3, 0}, {0, 1}};
    const BoundValue err = reconstruction_error(scaled, std::vector<TokenId>{0}, ReconstructionScheme::nearest);
    EXPECT_TRUE(err.renormalized);
    // Scale does not change the unit-sphere answer.
    EXPECT_DOUBLE_EQ(err.value, 2.0);
}

}  // namespace
}  // namespace unicomp
