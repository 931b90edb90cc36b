// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/sdc.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>

#include "unicomp/core_math.hpp"

namespace unicomp {

std::size_t CompressedFrame::fused() const noexcept {
    std::size_t total = 0;
    for (const auto& group : redundancy_map) {
        total += group.size();
    }
    return total;
}

namespace {

const TokenMatrix& check_sdc_inputs(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget,
                                    const SdcOptions& options) {
    check_token_matrix(frame, "frame");
    if (key_frame != nullptr) {
        check_token_matrix(*key_frame, "key frame");
        if (key_frame->rows() != frame.rows()) {
            throw ConfigError("key frame has " + std::to_string(key_frame->rows()) + " tokens, frame has " +
                              std::to_string(frame.rows()));
        }
    }
    if (k_budget < 1 || k_budget > frame.rows()) {
        throw ConfigError("token budget " + std::to_string(k_budget) + " outside [1, " +
                          std::to_string(frame.rows()) + "]");
    }
    if (!(options.token_threshold >= 0.0 && options.token_threshold <= 2.0)) {
        throw ConfigError("token uniqueness threshold must lie in [0, 2]");
    }
    return key_frame != nullptr ? *key_frame : frame;
}

// x_i <- (x_i + mean_{j in N_i} x_j) / 2 over original features; unchanged when N_i is empty.
void write_fused_row(const TokenMatrix& frame, TokenId i, std::span<const TokenId> neighbours, bool fuse,
                     std::span<float> out, std::vector<double>& scratch) {
    const auto xi = frame.row(i);
    if (!fuse || neighbours.empty()) {
        std::copy(xi.begin(), xi.end(), out.begin());
        return;
    }
    scratch.assign(frame.cols(), 0.0);
    for (TokenId j : neighbours) {
        const auto xj = frame.row(j);
        for (std::size_t k = 0; k < scratch.size(); ++k) {
            scratch[k] += xj[k];
        }
    }
    const double count = static_cast<double>(neighbours.size());
    for (std::size_t k = 0; k < scratch.size(); ++k) {
        out[k] = static_cast<float>(0.5 * (static_cast<double>(xi[k]) + scratch[k] / count));
    }
}

struct Selection {
    std::vector<TokenId> ids;                       // selection order
    std::vector<std::vector<TokenId>> neighbours;   // ascending ids
};

CompressedFrame assemble(const TokenMatrix& frame, Selection selection, std::vector<TokenId> dropped, bool fuse,
                         TokenOrder order) {
    std::vector<std::size_t> perm(selection.ids.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (order == TokenOrder::ids) {
        std::sort(perm.begin(), perm.end(),
                  [&](std::size_t a, std::size_t b) { return selection.ids[a] < selection.ids[b]; });
    }

    CompressedFrame out;
    out.retained_features = TokenMatrix(perm.size(), frame.cols());
    out.retained_ids.reserve(perm.size());
    out.redundancy_map.reserve(perm.size());
    std::vector<double> scratch;
    for (std::size_t r = 0; r < perm.size(); ++r) {
        const std::size_t p = perm[r];
        write_fused_row(frame, selection.ids[p], selection.neighbours[p], fuse, out.retained_features.row(r),
                        scratch);
        out.retained_ids.push_back(selection.ids[p]);
        out.redundancy_map.push_back(std::move(selection.neighbours[p]));
    }
    out.dropped_unclaimed = std::move(dropped);
    return out;
}

}  // namespace

namespace detail {

std::vector<TokenId> rank_descending(std::span<const double> scores) {
    std::vector<TokenId> ids(scores.size());
    std::iota(ids.begin(), ids.end(), TokenId{0});
    std::sort(ids.begin(), ids.end(), [&](TokenId a, TokenId b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    return ids;
}

CompressedFrame plain_selection(const TokenMatrix& frame, std::vector<TokenId> selected, TokenOrder order) {
    std::vector<bool> kept(frame.rows(), false);
    for (TokenId id : selected) {
        kept[id] = true;
    }
    std::vector<TokenId> dropped;
    for (TokenId j = 0; j < frame.rows(); ++j) {
        if (!kept[j]) {
            dropped.push_back(j);
        }
    }
    Selection selection;
    selection.neighbours.resize(selected.size());
    selection.ids = std::move(selected);
    return assemble(frame, std::move(selection), std::move(dropped), false, order);
}

}  // namespace detail

CompressedFrame sdc_reference(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget,
                              const SdcOptions& options) {
    const TokenMatrix& graph = check_sdc_inputs(frame, key_frame, k_budget, options);
    const std::size_t n = graph.rows();

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = graph.row(i);
        if (std::all_of(row.begin(), row.end(), [](float v) { return v == 0.0f; })) {
            throw DegenerateError("degenerate feature vector at row " + std::to_string(i));
        }
    }

    // Uniqueness graph, one pair at a time.
    std::vector<std::vector<double>> u(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                u[i][j] = pairwise_uniqueness(graph.row(i), graph.row(j));
            }
        }
    }
    std::vector<double> uniqueness(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += u[i][j];
        }
        uniqueness[i] = sum / static_cast<double>(n);
    }

    std::vector<TokenId> sort_ids(n);
    std::iota(sort_ids.begin(), sort_ids.end(), TokenId{0});
    std::stable_sort(sort_ids.begin(), sort_ids.end(),
                     [&](TokenId a, TokenId b) { return uniqueness[a] > uniqueness[b]; });

    // Fusion reads the original features; fused rows are kept aside so later
    // neighbourhoods never see them.
    std::set<TokenId> selected;
    std::set<TokenId> redundant;
    std::vector<TokenId> order_of_selection;
    std::vector<std::set<TokenId>> neighbourhoods;
    std::vector<std::vector<float>> features;
    for (TokenId i : sort_ids) {
        if (selected.count(i) != 0 || redundant.count(i) != 0) {
            continue;
        }
        selected.insert(i);
        std::set<TokenId> neighbourhood;
        for (TokenId j = 0; j < n; ++j) {
            if (j != i && selected.count(j) == 0 && redundant.count(j) == 0 && u[i][j] < options.token_threshold) {
                neighbourhood.insert(j);
            }
        }
        std::vector<float> x(frame.row(i).begin(), frame.row(i).end());
        if (options.fuse && !neighbourhood.empty()) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                double sum = 0.0;
                for (TokenId j : neighbourhood) {
                    sum += frame(j, k);
                }
                const double mean = sum / static_cast<double>(neighbourhood.size());
                x[k] = static_cast<float>(0.5 * (static_cast<double>(frame(i, k)) + mean));
            }
        }
        redundant.insert(neighbourhood.begin(), neighbourhood.end());
        order_of_selection.push_back(i);
        neighbourhoods.push_back(std::move(neighbourhood));
        features.push_back(std::move(x));
        if (selected.size() >= k_budget) {
            break;
        }
    }

    std::vector<std::size_t> emit(order_of_selection.size());
    std::iota(emit.begin(), emit.end(), std::size_t{0});
    if (options.order == TokenOrder::ids) {
        std::sort(emit.begin(), emit.end(),
                  [&](std::size_t a, std::size_t b) { return order_of_selection[a] < order_of_selection[b]; });
    }
    CompressedFrame out;
    out.retained_features = TokenMatrix(emit.size(), frame.cols());
    for (std::size_t r = 0; r < emit.size(); ++r) {
        const std::size_t p = emit[r];
        out.retained_ids.push_back(order_of_selection[p]);
        out.redundancy_map.emplace_back(neighbourhoods[p].begin(), neighbourhoods[p].end());
        std::copy(features[p].begin(), features[p].end(), out.retained_features.row(r).begin());
    }
    for (TokenId j = 0; j < n; ++j) {
        if (selected.count(j) == 0 && redundant.count(j) == 0) {
            out.dropped_unclaimed.push_back(j);
        }
    }
    return out;
}

CompressedFrame sdc_parallel(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget,
                             const SdcOptions& options) {
    const TokenMatrix& graph = check_sdc_inputs(frame, key_frame, k_budget, options);
    const std::size_t n = graph.rows();

    const UniquenessMatrix u = uniqueness_matrix(graph);
    const UniquenessVector uniqueness = row_means(u);
    const std::vector<TokenId> ranking = detail::rank_descending(uniqueness);

    // 0 = free, 1 = selected, 2 = fused into a selected token.
    std::vector<std::uint8_t> state(n, 0);
    Selection selection;
    selection.ids.reserve(k_budget);
    selection.neighbours.reserve(k_budget);
    const double threshold = options.token_threshold;
    for (TokenId i : ranking) {
        if (state[i] != 0) {
            continue;
        }
        state[i] = 1;
        const auto row = u.row(i);
        std::vector<TokenId> neighbourhood;
        for (TokenId j = 0; j < n; ++j) {
            if (state[j] == 0 && row[j] < threshold) {
                state[j] = 2;
                neighbourhood.push_back(j);
            }
        }
        selection.ids.push_back(i);
        selection.neighbours.push_back(std::move(neighbourhood));
        if (selection.ids.size() >= k_budget) {
            break;
        }
    }

    std::vector<TokenId> dropped;
    for (TokenId j = 0; j < n; ++j) {
        if (state[j] == 0) {
            dropped.push_back(j);
        }
    }
    return assemble(frame, std::move(selection), std::move(dropped), options.fuse, options.order);
}

CompressedFrame attn_topk(const TokenMatrix& frame, std::span<const double> attention_scores, std::size_t k_budget) {
    check_token_matrix(frame, "frame");
    if (attention_scores.size() != frame.rows()) {
        throw ConfigError("attention scores have length " + std::to_string(attention_scores.size()) +
                          ", frame has " + std::to_string(frame.rows()) + " tokens");
    }
    if (k_budget < 1 || k_budget > frame.rows()) {
        throw ConfigError("token budget " + std::to_string(k_budget) + " outside [1, " +
                          std::to_string(frame.rows()) + "]");
    }
    std::vector<TokenId> ranking = detail::rank_descending(attention_scores);
    ranking.resize(k_budget);
    return detail::plain_selection(frame, std::move(ranking), TokenOrder::ids);
}

}  // namespace unicomp
