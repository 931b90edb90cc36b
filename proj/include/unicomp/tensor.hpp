// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unicomp/error.hpp"

namespace unicomp {

using TokenId = std::size_t;

/**
 * @brief Dense row-major matrix.
 *
 * Rows are tokens, columns are feature dimensions. Storage is contiguous so a
 * frame can be handed to the codec or to a kernel without copying.
 */
template <typename T>
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw ConfigError("matrix storage has " + std::to_string(data_.size()) + " values, expected " +
                              std::to_string(rows_ * cols_));
        }
    }

    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw ConfigError("ragged matrix initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// One frame: N tokens x d feature dims, f32 storage.
using TokenMatrix = Matrix<float>;
/// f64 matrix used for similarity graphs and reconstructions.
using RealMatrix = Matrix<double>;
/// N x N pairwise uniqueness (1 - cosine), symmetric with zero diagonal.
using UniquenessMatrix = Matrix<double>;
/// Per-token mean uniqueness.
using UniquenessVector = std::vector<double>;
using FeatureVector = std::vector<double>;
/// Ordered list of distinct token ids.
using SelectionSet = std::vector<TokenId>;

/// Throws unless the frame has at least one row and column and only finite entries.
template <typename T>
void check_token_matrix(const Matrix<T>& m, const char* what = "token matrix") {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ConfigError(std::string(what) + " must have at least one token and one dimension");
    }
    for (std::size_t i = 0; i < m.values().size(); ++i) {
        if (!std::isfinite(m.values()[i])) {
            throw ConfigError(std::string(what) + " has non-finite value at row " + std::to_string(i / m.cols()) +
                              ", column " + std::to_string(i % m.cols()));
        }
    }
}

/// Throws unless ids are distinct, in range, and (optionally) nonempty.
void check_selection(std::span<const TokenId> ids, std::size_t token_count, bool allow_empty = false);

/**
 * @brief Ordered frames of one video, plus optional parallel key features.
 *
 * Every frame shares the same token count N and dim d. Keys, when present,
 * have the same T and N but may have a different dim d_k; they are what the
 * per-frame uniqueness graph is computed on.
 */
struct VideoTensor {
    std::vector<TokenMatrix> frames;
    std::optional<std::vector<TokenMatrix>> keys;

    std::size_t frame_count() const noexcept { return frames.size(); }
    std::size_t tokens_per_frame() const noexcept { return frames.empty() ? 0 : frames.front().rows(); }
    std::size_t dim() const noexcept { return frames.empty() ? 0 : frames.front().cols(); }
    std::size_t key_dim() const noexcept { return keys && !keys->empty() ? keys->front().cols() : 0; }

    /// Shape checks: T >= 1, uniform shapes, finite values, keys aligned with frames.
    void validate() const;
};

}  // namespace unicomp
