// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace unicomp::synthetic {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

TokenMatrix gaussian_tokens(std::size_t n, std::size_t d, Rng& rng) {
    TokenMatrix m(n, d);
    for (float& v : m.values()) {
        v = static_cast<float>(rng.normal());
    }
    return m;
}

TokenMatrix unit_tokens(std::size_t n, std::size_t d, Rng& rng) {
    TokenMatrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = m.row(i);
        double sq = 0.0;
        while (sq < 1e-12) {
            sq = 0.0;
            for (float& v : row) {
                v = static_cast<float>(rng.normal());
                sq += static_cast<double>(v) * v;
            }
        }
        const double norm = std::sqrt(sq);
        for (float& v : row) {
            v = static_cast<float>(v / norm);
        }
    }
    return m;
}

std::vector<TokenId> random_subset(std::size_t n, std::size_t size, Rng& rng) {
    std::vector<TokenId> ids(n);
    std::iota(ids.begin(), ids.end(), TokenId{0});
    for (std::size_t i = 0; i < size; ++i) {
        std::swap(ids[i], ids[rng.index(i, n - 1)]);
    }
    ids.resize(size);
    std::sort(ids.begin(), ids.end());
    return ids;
}

ClusteredFrame clustered_frame(std::size_t clusters, std::size_t n, std::size_t d, double spread, Rng& rng) {
    // Orthonormal centres by Gram-Schmidt on gaussian draws.
    std::vector<std::vector<double>> centres;
    while (centres.size() < clusters) {
        std::vector<double> c(d);
        for (double& v : c) {
            v = rng.normal();
        }
        for (const auto& prev : centres) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dot += c[k] * prev[k];
            }
            for (std::size_t k = 0; k < d; ++k) {
                c[k] -= dot * prev[k];
            }
        }
        double sq = 0.0;
        for (double v : c) {
            sq += v * v;
        }
        if (sq < 1e-6) {
            continue;
        }
        for (double& v : c) {
            v /= std::sqrt(sq);
        }
        centres.push_back(std::move(c));
    }

    ClusteredFrame out{TokenMatrix(n, d), std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t label = i < clusters ? i : rng.index(0, clusters - 1);
        out.labels[i] = label;
        for (std::size_t k = 0; k < d; ++k) {
            out.tokens(i, k) = static_cast<float>(centres[label][k] + spread * rng.normal());
        }
    }
    // Shuffle token positions so cluster seeds are not always ids 0..clusters-1.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.index(0, i - 1);
        if (j != i - 1) {
            std::swap(out.labels[i - 1], out.labels[j]);
            auto a = out.tokens.row(i - 1);
            auto b = out.tokens.row(j);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
    }
    return out;
}

VideoTensor random_video(std::size_t frames, std::size_t n, std::size_t d, Rng& rng, std::size_t key_dim) {
    VideoTensor video;
    for (std::size_t t = 0; t < frames; ++t) {
        video.frames.push_back(gaussian_tokens(n, d, rng));
    }
    if (key_dim > 0) {
        video.keys.emplace();
        for (std::size_t t = 0; t < frames; ++t) {
            video.keys->push_back(gaussian_tokens(n, key_dim, rng));
        }
    }
    return video;
}

VideoTensor scene_video(std::size_t frames, std::size_t scenes, std::size_t n, std::size_t d, double jitter,
                        Rng& rng) {
    scenes = std::clamp<std::size_t>(scenes, 1, frames);
    VideoTensor video;
    TokenMatrix base;
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t scene = t * scenes / frames;
        if (t == 0 || scene != (t - 1) * scenes / frames) {
            // A shifted mean keeps the pooled global feature well away from zero.
            base = gaussian_tokens(n, d, rng);
            for (std::size_t k = 0; k < d; ++k) {
                const float shift = static_cast<float>(2.0 * rng.normal());
                for (std::size_t i = 0; i < n; ++i) {
                    base(i, k) += shift;
                }
            }
        }
        TokenMatrix frame = base;
        for (float& v : frame.values()) {
            v += static_cast<float>(jitter * rng.normal());
        }
        video.frames.push_back(std::move(frame));
    }
    return video;
}

}  // namespace unicomp::synthetic
