// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace unicomp {

void check_selection(std::span<const TokenId> ids, std::size_t token_count, bool allow_empty) {
    if (ids.empty() && !allow_empty) {
        throw ConfigError("selection is empty");
    }
    std::vector<bool> seen(token_count, false);
    for (TokenId id : ids) {
        if (id >= token_count) {
            throw ConfigError("selected id " + std::to_string(id) + " out of range [0, " +
                              std::to_string(token_count) + ")");
        }
        if (seen[id]) {
            throw ConfigError("selected id " + std::to_string(id) + " appears twice");
        }
        seen[id] = true;
    }
}

void VideoTensor::validate() const {
    if (frames.empty()) {
        throw ConfigError("video has no frames");
    }
    const std::size_t n = frames.front().rows();
    const std::size_t d = frames.front().cols();
    for (std::size_t t = 0; t < frames.size(); ++t) {
        if (frames[t].rows() != n || frames[t].cols() != d) {
            throw ConfigError("frame " + std::to_string(t) + " shape differs from frame 0");
        }
        check_token_matrix(frames[t], "frame");
    }
    if (keys) {
        if (keys->size() != frames.size()) {
            throw ConfigError("keys have " + std::to_string(keys->size()) + " frames, video has " +
                              std::to_string(frames.size()));
        }
        const std::size_t dk = keys->front().cols();
        for (std::size_t t = 0; t < keys->size(); ++t) {
            if ((*keys)[t].rows() != n || (*keys)[t].cols() != dk) {
                throw ConfigError("key frame " + std::to_string(t) + " shape mismatch");
            }
            check_token_matrix((*keys)[t], "key frame");
        }
    }
}

namespace {

// Two f64 lanes; element-wise ops only, so per-lane rounding matches scalar code.
using Lanes = double __attribute__((vector_size(16)));

// 1 - dot / sqrt(xx * yy), clamped. Taking one root of the product (rather
// than multiplying two roots) makes identical vectors give exactly 0, since
// sqrt(fl(s * s)) == s.
inline double cosine_gap(double dot, double xx, double yy) {
    return std::clamp(1.0 - dot / std::sqrt(xx * yy), 0.0, 2.0);
}

template <typename T>
double pairwise_uniqueness_impl(std::span<const T> x, std::span<const T> y) {
    if (x.size() != y.size() || x.empty()) {
        throw ConfigError("feature vectors must share a nonzero dimension");
    }
    double dot = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double a = x[k];
        const double b = y[k];
        dot += a * b;
        xx += a * a;
        yy += b * b;
    }
    if (xx == 0.0 || yy == 0.0) {
        throw DegenerateError("degenerate feature vector (zero norm)");
    }
    return cosine_gap(dot, xx, yy);
}

// Cosine similarities between selected unit rows and every unit row: |S| x N.
RealMatrix selected_similarity(const RealMatrix& unit, std::span<const TokenId> selected) {
    const std::size_t n = unit.rows();
    const std::size_t d = unit.cols();
    RealMatrix s(selected.size(), n);
    for (std::size_t a = 0; a < selected.size(); ++a) {
        const auto xi = unit.row(selected[a]);
        for (std::size_t j = 0; j < n; ++j) {
            const auto xj = unit.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dot += xi[k] * xj[k];
            }
            s(a, j) = dot;
        }
    }
    return s;
}

RealMatrix weights_from_similarity(const RealMatrix& s) {
    RealMatrix w(s.rows(), s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j) {
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < s.rows(); ++a) {
            peak = std::max(peak, s(a, j));
        }
        double total = 0.0;
        for (std::size_t a = 0; a < s.rows(); ++a) {
            w(a, j) = std::exp(s(a, j) - peak);
            total += w(a, j);
        }
        for (std::size_t a = 0; a < s.rows(); ++a) {
            w(a, j) /= total;
        }
    }
    return w;
}

struct UnitSelection {
    RealMatrix unit;
    RealMatrix similarity;
    bool renormalized = false;
};

UnitSelection prepare(const TokenMatrix& tokens, std::span<const TokenId> selected) {
    check_token_matrix(tokens);
    check_selection(selected, tokens.rows());
    UnitSelection out;
    out.unit = normalize_rows(tokens, &out.renormalized);
    out.similarity = selected_similarity(out.unit, selected);
    return out;
}

}  // namespace

double pairwise_uniqueness(std::span<const float> x, std::span<const float> y) {
    return pairwise_uniqueness_impl(x, y);
}

double pairwise_uniqueness(std::span<const double> x, std::span<const double> y) {
    return pairwise_uniqueness_impl(x, y);
}

std::vector<double> row_norms(const TokenMatrix& tokens) {
    std::vector<double> norms(tokens.rows());
    for (std::size_t i = 0; i < tokens.rows(); ++i) {
        double sq = 0.0;
        for (float v : tokens.row(i)) {
            const double a = v;
            sq += a * a;
        }
        norms[i] = std::sqrt(sq);
    }
    return norms;
}

UniquenessMatrix uniqueness_matrix(const TokenMatrix& tokens) {
    check_token_matrix(tokens);
    const std::size_t n = tokens.rows();
    const std::size_t d = tokens.cols();
    std::vector<double> squares(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (float v : tokens.row(i)) {
            const double a = v;
            sq += a * a;
        }
        if (sq == 0.0) {
            throw DegenerateError("degenerate feature vector at row " + std::to_string(i));
        }
        squares[i] = sq;
    }

    // Dimension-major copy, zero-padded to whole column blocks, so a 2 x 8
    // block of dot products can live in registers. Each dot product still
    // accumulates in dimension order, which keeps entries bitwise equal to
    // pairwise_uniqueness().
    constexpr std::size_t kCols = 8;
    constexpr std::size_t kRows = 2;
    const std::size_t stride = (n + kCols - 1) / kCols * kCols;
    std::vector<double> transposed(d * stride, 0.0);
    std::vector<double> rows_f64(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            transposed[k * stride + i] = tokens(i, k);
            rows_f64[i * d + k] = tokens(i, k);
        }
    }
    const std::vector<double> zero_row(d, 0.0);

    UniquenessMatrix u(n, n, 0.0);
    for (std::size_t i0 = 0; i0 + 1 < n; i0 += kRows) {
        const double* const x0 = rows_f64.data() + i0 * d;
        const double* const x1 = i0 + 1 < n ? rows_f64.data() + (i0 + 1) * d : zero_row.data();
        for (std::size_t j0 = (i0 + 1) / kCols * kCols; j0 < n; j0 += kCols) {
            Lanes acc0[kCols / 2] = {};
            Lanes acc1[kCols / 2] = {};
            for (std::size_t k = 0; k < d; ++k) {
                const double* const col = transposed.data() + k * stride + j0;
                const Lanes a0 = {x0[k], x0[k]};
                const Lanes a1 = {x1[k], x1[k]};
                for (std::size_t b = 0; b < kCols / 2; ++b) {
                    Lanes c;
                    std::memcpy(&c, col + 2 * b, sizeof c);
                    acc0[b] += a0 * c;
                    acc1[b] += a1 * c;
                }
            }
            for (std::size_t r = 0; r < kRows && i0 + r < n; ++r) {
                const std::size_t i = i0 + r;
                const Lanes* const acc = r == 0 ? acc0 : acc1;
                for (std::size_t b = 0; b < kCols; ++b) {
                    const std::size_t j = j0 + b;
                    if (j > i && j < n) {
                        const double dot = acc[b / 2][b % 2];
                        const double value = cosine_gap(dot, squares[i], squares[j]);
                        u(i, j) = value;
                        u(j, i) = value;
                    }
                }
            }
        }
    }
    return u;
}

UniquenessVector row_means(const UniquenessMatrix& u) {
    const std::size_t n = u.rows();
    UniquenessVector means(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double v : u.row(i)) {
            sum += v;
        }
        means[i] = sum / static_cast<double>(n);
    }
    return means;
}

UniquenessVector token_uniqueness(const TokenMatrix& tokens) {
    return row_means(uniqueness_matrix(tokens));
}

RealMatrix normalize_rows(const TokenMatrix& tokens, bool* renormalized) {
    const std::vector<double> norms = row_norms(tokens);
    RealMatrix unit(tokens.rows(), tokens.cols());
    bool touched = false;
    for (std::size_t i = 0; i < tokens.rows(); ++i) {
        if (norms[i] == 0.0) {
            throw DegenerateError("degenerate feature vector at row " + std::to_string(i));
        }
        if (std::abs(norms[i] - 1.0) > 1e-6) {
            touched = true;
        }
        for (std::size_t k = 0; k < tokens.cols(); ++k) {
            unit(i, k) = tokens(i, k) / norms[i];
        }
    }
    if (renormalized != nullptr) {
        *renormalized = touched;
    }
    return unit;
}

RealMatrix softmax_weights(const RealMatrix& unit_tokens, std::span<const TokenId> selected) {
    check_selection(selected, unit_tokens.rows());
    return weights_from_similarity(selected_similarity(unit_tokens, selected));
}

RealMatrix reconstruction(const TokenMatrix& tokens, std::span<const TokenId> selected, ReconstructionScheme scheme) {
    const UnitSelection prep = prepare(tokens, selected);
    const std::size_t n = tokens.rows();
    const std::size_t d = tokens.cols();
    RealMatrix out(n, d, 0.0);

    if (scheme == ReconstructionScheme::nearest) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t best = 0;
            for (std::size_t a = 1; a < selected.size(); ++a) {
                const double s = prep.similarity(a, j);
                const double top = prep.similarity(best, j);
                if (s > top || (s == top && selected[a] < selected[best])) {
                    best = a;
                }
            }
            const auto src = prep.unit.row(selected[best]);
            std::copy(src.begin(), src.end(), out.row(j).begin());
        }
        return out;
    }

    const RealMatrix w = weights_from_similarity(prep.similarity);
    for (std::size_t j = 0; j < n; ++j) {
        auto dst = out.row(j);
        for (std::size_t a = 0; a < selected.size(); ++a) {
            const double weight = w(a, j);
            const auto src = prep.unit.row(selected[a]);
            for (std::size_t k = 0; k < d; ++k) {
                dst[k] += weight * src[k];
            }
        }
    }
    return out;
}

BoundValue reconstruction_error(const TokenMatrix& tokens, std::span<const TokenId> selected,
                                ReconstructionScheme scheme) {
    bool renormalized = false;
    const RealMatrix unit = normalize_rows(tokens, &renormalized);
    const RealMatrix rebuilt = reconstruction(tokens, selected, scheme);
    double total = 0.0;
    for (std::size_t j = 0; j < unit.rows(); ++j) {
        for (std::size_t k = 0; k < unit.cols(); ++k) {
            const double r = unit(j, k) - rebuilt(j, k);
            total += r * r;
        }
    }
    return {total, renormalized};
}

BoundValue uniqueness_bound(const TokenMatrix& tokens, std::span<const TokenId> selected) {
    const UnitSelection prep = prepare(tokens, selected);
    double total = 0.0;
    for (std::size_t j = 0; j < tokens.rows(); ++j) {
        double closest = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < selected.size(); ++a) {
#if defined(UNICOMP_MUTATE_SIGN_FLIP)
            const double u = 1.0 + prep.similarity(a, j);
#else
            const double u = 1.0 - prep.similarity(a, j);
#endif
            closest = std::min(closest, u);
        }
        total += closest;
    }
    return {2.0 * total, prep.renormalized};
}

BoundValue step2_bound(const TokenMatrix& tokens, std::span<const TokenId> selected) {
    const UnitSelection prep = prepare(tokens, selected);
    const RealMatrix w = weights_from_similarity(prep.similarity);
    double total = 0.0;
    for (std::size_t j = 0; j < tokens.rows(); ++j) {
        double expected_similarity = 0.0;
        for (std::size_t a = 0; a < selected.size(); ++a) {
            expected_similarity += w(a, j) * prep.similarity(a, j);
        }
        total += 2.0 * (1.0 - expected_similarity);
    }
    return {total, prep.renormalized};
}

}  // namespace unicomp
