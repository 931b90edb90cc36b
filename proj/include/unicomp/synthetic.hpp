// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "unicomp/tensor.hpp"

namespace unicomp::synthetic {

/// mt19937_64 with distribution code that does not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }
    /// Standard normal (Box-Muller).
    double normal();
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// i.i.d. standard normal entries.
TokenMatrix gaussian_tokens(std::size_t n, std::size_t d, Rng& rng);

/// Gaussian rows scaled to unit norm.
TokenMatrix unit_tokens(std::size_t n, std::size_t d, Rng& rng);

/// Uniformly random subset of [0, n) of the given size, ascending.
std::vector<TokenId> random_subset(std::size_t n, std::size_t size, Rng& rng);

struct ClusteredFrame {
    TokenMatrix tokens;
    std::vector<std::size_t> labels;  ///< cluster of each token
};

/**
 * @brief Tokens drawn around `clusters` mutually orthogonal unit centres.
 *
 * Each token is centre + spread * gaussian noise. With spread <= 0.05 and
 * d >= clusters, intra-cluster uniqueness stays well below 0.2 and
 * inter-cluster uniqueness near 1. Every cluster gets at least one token.
 */
ClusteredFrame clustered_frame(std::size_t clusters, std::size_t n, std::size_t d, double spread, Rng& rng);

/// Independent gaussian frames, optionally with gaussian keys of dim key_dim.
VideoTensor random_video(std::size_t frames, std::size_t n, std::size_t d, Rng& rng, std::size_t key_dim = 0);

/**
 * @brief Video made of `scenes` contiguous runs of near-identical frames.
 *
 * Each scene has its own base frame; member frames add `jitter` * gaussian
 * noise, so frame-to-frame uniqueness inside a scene is far below 0.005 for
 * small jitter while scene changes are large.
 */
VideoTensor scene_video(std::size_t frames, std::size_t scenes, std::size_t n, std::size_t d, double jitter,
                        Rng& rng);

}  // namespace unicomp::synthetic
