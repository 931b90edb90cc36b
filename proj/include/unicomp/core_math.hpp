// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "unicomp/tensor.hpp"

namespace unicomp {

/**
 * @brief Information uniqueness of two feature vectors, 1 - cos(x, y), in [0, 2].
 *
 * Dot products and norms accumulate in f64 in dimension order. The result is
 * clamped to [0, 2] to absorb rounding. Throws DegenerateError on a zero-norm input.
 */
double pairwise_uniqueness(std::span<const float> x, std::span<const float> y);
double pairwise_uniqueness(std::span<const double> x, std::span<const double> y);

/// Euclidean norm of each row, f64, accumulated in dimension order.
std::vector<double> row_norms(const TokenMatrix& tokens);

/**
 * @brief Full N x N uniqueness graph of one frame.
 *
 * Uses cached squared norms and a symmetric, dimension-major accumulation; every
 * entry is bitwise equal to pairwise_uniqueness(row i, row j) and the diagonal
 * is exactly 0. Throws DegenerateError naming the first zero-norm row.
 */
UniquenessMatrix uniqueness_matrix(const TokenMatrix& tokens);

/// Row means of a uniqueness graph (self term included).
UniquenessVector row_means(const UniquenessMatrix& u);

/// U_i = (1/N) sum_j u_ij over all N tokens, self included. Max attainable is 2(N-1)/N.
UniquenessVector token_uniqueness(const TokenMatrix& tokens);

enum class ReconstructionScheme { softmax, nearest };

/// Rows scaled to unit norm in f64. `renormalized` is set when any row was off unit norm by more than 1e-6.
RealMatrix normalize_rows(const TokenMatrix& tokens, bool* renormalized = nullptr);

/**
 * @brief Reconstructs every token from the selected subset, in unit-norm space.
 *
 * softmax: x_hat_j = sum_{i in S} w_ij x_i with w_ij = exp(s_ij) / sum_{i in S} exp(s_ij).
 * nearest: x_hat_j = x_{i*}, i* = argmax_{i in S} s_ij, ties to the lowest id.
 */
RealMatrix reconstruction(const TokenMatrix& tokens, std::span<const TokenId> selected, ReconstructionScheme scheme);

/// Softmax weights w_ij, |S| rows (selection order) x N columns; each column sums to 1.
RealMatrix softmax_weights(const RealMatrix& unit_tokens, std::span<const TokenId> selected);

/// A bound-side scalar plus whether inputs had to be rescaled to unit norm.
struct BoundValue {
    double value = 0.0;
    bool renormalized = false;
};

/// sum_j ||x_j - x_hat_j||^2 over all tokens, retained ones included.
BoundValue reconstruction_error(const TokenMatrix& tokens, std::span<const TokenId> selected,
                                ReconstructionScheme scheme);

/// 2 * sum_j min_{i in S} u_ij. Equal to the nearest-scheme reconstruction error for unit-norm rows.
BoundValue uniqueness_bound(const TokenMatrix& tokens, std::span<const TokenId> selected);

/// sum_j 2 (1 - sum_{i in S} w_ij s_ij) with softmax weights; an exact upper bound on the softmax error.
BoundValue step2_bound(const TokenMatrix& tokens, std::span<const TokenId> selected);

}  // namespace unicomp
