// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

// Naive reimplementations used as test oracles. Nothing here calls into the
// library's kernels; each function is the most literal loop that computes the
// quantity, written for clarity rather than speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "unicomp/tensor.hpp"

namespace oracle {

using unicomp::TokenId;
using unicomp::TokenMatrix;

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;

inline Rows to_rows(const TokenMatrix& m) {
    Rows out(m.rows(), Vec(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            out[i][k] = m(i, k);
        }
    }
    return out;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

inline double cosine(const Vec& a, const Vec& b) {
    return dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
}

inline double uniqueness(const Vec& a, const Vec& b) { return 1.0 - cosine(a, b); }

inline Rows uniqueness_matrix(const Rows& x) {
    Rows u(x.size(), Vec(x.size(), 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            u[i][j] = i == j ? 0.0 : uniqueness(x[i], x[j]);
        }
    }
    return u;
}

inline Vec token_uniqueness(const Rows& x) {
    const Rows u = uniqueness_matrix(x);
    Vec out(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            out[i] += u[i][j];
        }
        out[i] /= static_cast<double>(x.size());
    }
    return out;
}

inline Rows unit_rows(Rows x) {
    for (Vec& r : x) {
        const double n = std::sqrt(dot(r, r));
        for (double& v : r) {
            v /= n;
        }
    }
    return x;
}

inline double squared_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return s;
}

/// sum_j ||x_j - x_{nearest i in S}||^2 on unit rows, nearest by cosine, ties to the lowest id.
inline double nearest_error(const TokenMatrix& m, const std::vector<TokenId>& selected) {
    const Rows x = unit_rows(to_rows(m));
    std::vector<TokenId> sorted = selected;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        TokenId best = sorted.front();
        double best_cos = -std::numeric_limits<double>::infinity();
        for (TokenId i : sorted) {
            const double c = dot(x[i], x[j]);
            if (c > best_cos) {
                best_cos = c;
                best = i;
            }
        }
        total += squared_distance(x[j], x[best]);
    }
    return total;
}

/// sum_j ||x_j - sum_i w_ij x_i||^2 with column-wise softmax over s_ij, unit rows.
inline double softmax_error(const TokenMatrix& m, const std::vector<TokenId>& selected) {
    const Rows x = unit_rows(to_rows(m));
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double z = 0.0;
        for (TokenId i : selected) {
            z += std::exp(dot(x[i], x[j]));
        }
        Vec hat(x[j].size(), 0.0);
        for (TokenId i : selected) {
            const double w = std::exp(dot(x[i], x[j])) / z;
            for (std::size_t k = 0; k < hat.size(); ++k) {
                hat[k] += w * x[i][k];
            }
        }
        total += squared_distance(x[j], hat);
    }
    return total;
}

/// 2 sum_j min_{i in S} u_ij.
inline double min_bound(const TokenMatrix& m, const std::vector<TokenId>& selected) {
    const Rows x = to_rows(m);
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (TokenId i : selected) {
            best = std::min(best, i == j ? 0.0 : uniqueness(x[i], x[j]));
        }
        total += 2.0 * best;
    }
    return total;
}

inline Vec column_mean(const TokenMatrix& m) {
    Vec out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            out[k] += m(i, k);
        }
    }
    for (double& v : out) {
        v /= static_cast<double>(m.rows());
    }
    return out;
}

/// Group start indices from a first-frame-anchored scan over per-frame features.
inline std::vector<std::size_t> group_starts(const Rows& features, double threshold) {
    std::vector<std::size_t> starts{0};
    for (std::size_t t = 1; t < features.size(); ++t) {
        if (uniqueness(features[starts.back()], features[t]) >= threshold) {
            starts.push_back(t);
        }
    }
    return starts;
}

/// Ids of the k largest scores, ties to the lower id, returned ascending.
inline std::vector<TokenId> topk_ids(const Vec& scores, std::size_t k) {
    std::vector<TokenId> ids(scores.size());
    std::iota(ids.begin(), ids.end(), TokenId{0});
    std::sort(ids.begin(), ids.end(), [&](TokenId a, TokenId b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    ids.resize(std::min(k, ids.size()));
    std::sort(ids.begin(), ids.end());
    return ids;
}

struct GreedyResult {
    std::vector<TokenId> selected;  ///< selection order
    std::vector<std::vector<TokenId>> neighbours;
};

/// The selection loop written with plain flags and an O(N^2) scan per step.
inline GreedyResult greedy(const TokenMatrix& m, std::size_t k, double threshold) {
    const Rows x = to_rows(m);
    const Rows u = uniqueness_matrix(x);
    const Vec score = token_uniqueness(x);
    std::vector<bool> taken(x.size(), false);
    GreedyResult out;
    while (out.selected.size() < k) {
        // Highest remaining score, ties to the lowest id.
        std::size_t best = x.size();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!taken[i] && (best == x.size() || score[i] > score[best])) {
                best = i;
            }
        }
        if (best == x.size()) {
            break;
        }
        taken[best] = true;
        std::vector<TokenId> nb;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!taken[j] && u[best][j] < threshold) {
                nb.push_back(j);
            }
        }
        for (TokenId j : nb) {
            taken[j] = true;
        }
        out.selected.push_back(best);
        out.neighbours.push_back(nb);
    }
    return out;
}

}  // namespace oracle
