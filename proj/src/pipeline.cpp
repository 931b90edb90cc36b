// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "unicomp/baselines.hpp"
#include "unicomp/core_math.hpp"

namespace unicomp {

std::string to_string(CompressionMode mode) {
    return mode == CompressionMode::budgeted ? "budgeted" : "auto";
}

std::string to_string(TokenOrder order) {
    return order == TokenOrder::ids ? "ids" : "uniqueness";
}

std::string to_string(FgfVariant variant) {
    return variant == FgfVariant::fusion ? "fusion" : "first";
}

std::string to_string(AllocVariant variant) {
    return variant == AllocVariant::softmax ? "softmax" : "uniform";
}

std::string to_string(Selector selector) {
    switch (selector) {
        case Selector::sdc:
            return "sdc";
        case Selector::unique_topk:
            return "unique-topk";
        case Selector::attn_topk:
            return "attn-topk";
        case Selector::random:
            return "random";
    }
    return "sdc";
}

void CompressionConfig::validate() const {
    if (!(frame_threshold >= 0.0) || !std::isfinite(frame_threshold)) {
        throw ConfigError("frame uniqueness threshold must be a finite value >= 0");
    }
    if (!(token_threshold >= 0.0 && token_threshold <= 2.0)) {
        throw ConfigError("token uniqueness threshold must lie in [0, 2]");
    }
    if (mode == CompressionMode::budgeted) {
        if (retain_ratio.has_value() == token_max.has_value()) {
            throw ConfigError("budgeted mode needs exactly one of retain ratio or token max");
        }
        if (retain_ratio && !(*retain_ratio > 0.0 && *retain_ratio <= 1.0)) {
            throw ConfigError("retain ratio must lie in (0, 1]");
        }
        if (token_max && *token_max == 0) {
            throw ConfigError("token max must be positive");
        }
    } else {
        if (retain_ratio || token_max) {
            throw ConfigError("auto mode takes no retain ratio or token max");
        }
        if (selector != Selector::sdc) {
            throw ConfigError("auto mode requires the sdc selector");
        }
    }
}

std::size_t resolve_token_max(const CompressionConfig& config, std::size_t frames, std::size_t tokens_per_frame) {
    if (config.token_max) {
        return *config.token_max;
    }
    if (config.retain_ratio) {
        return static_cast<std::size_t>(
            std::floor(*config.retain_ratio * static_cast<double>(frames) * static_cast<double>(tokens_per_frame)));
    }
    return 0;
}

unsigned worker_count(const CompressionConfig& config) {
    unsigned workers = config.max_threads != 0 ? config.max_threads : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("UNICOMP_THREADS"); env != nullptr) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) {
            workers = std::min(workers, static_cast<unsigned>(cap));
        }
    }
    return std::max(1u, workers);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs task(i) for i in [0, count). Results must be written by index so the
// outcome does not depend on the number of workers.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<double> group_scores(std::span<const std::vector<double>> scores, const FrameRange& range,
                                 std::size_t tokens) {
    std::vector<double> mean(tokens, 0.0);
    for (std::size_t t = range.begin; t < range.end; ++t) {
        for (std::size_t i = 0; i < tokens; ++i) {
            mean[i] += scores[t][i];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(range.size());
    }
    return mean;
}

CompressedFrame whole_group(const TokenMatrix& representative) {
    CompressedFrame out;
    out.retained_ids.resize(representative.rows());
    for (TokenId i = 0; i < representative.rows(); ++i) {
        out.retained_ids[i] = i;
    }
    out.retained_features = representative;
    out.redundancy_map.assign(representative.rows(), {});
    return out;
}

class GroupSelector {
public:
    GroupSelector(const FrameGrouping& grouping, const CompressionConfig& config,
                  std::span<const std::vector<double>> attention_scores, std::size_t tokens)
        : grouping_(grouping), config_(config) {
        if (config.selector == Selector::attn_topk) {
            for (const FrameRange& range : grouping.groups) {
                scores_.push_back(group_scores(attention_scores, range, tokens));
            }
        }
    }

    CompressedFrame operator()(std::size_t g, std::size_t budget) const {
        const TokenMatrix& frame = grouping_.representatives[g];
        const TokenMatrix* keys =
            grouping_.representative_keys ? &(*grouping_.representative_keys)[g] : nullptr;
        switch (config_.selector) {
            case Selector::unique_topk:
                return unique_topk(frame, keys, budget);
            case Selector::attn_topk:
                return attn_topk(frame, scores_[g], budget);
            case Selector::random:
                return random_select(frame, budget, config_.seed + g);
            case Selector::sdc:
                break;
        }
        SdcOptions options;
        options.token_threshold = config_.token_threshold;
        options.order = config_.order;
        options.fuse = config_.fuse;
        return sdc_parallel(frame, keys, budget, options);
    }

private:
    const FrameGrouping& grouping_;
    const CompressionConfig& config_;
    std::vector<std::vector<double>> scores_;
};

void check_attention(const VideoTensor& video, const CompressionConfig& config,
                     std::span<const std::vector<double>> scores) {
    if (config.selector != Selector::attn_topk) {
        return;
    }
    if (scores.size() != video.frame_count()) {
        throw ConfigError("attn-topk needs one attention score vector per frame (" +
                          std::to_string(video.frame_count()) + "), got " + std::to_string(scores.size()));
    }
    for (const auto& s : scores) {
        if (s.size() != video.tokens_per_frame()) {
            throw ConfigError("attention score vector length " + std::to_string(s.size()) + " differs from " +
                              std::to_string(video.tokens_per_frame()) + " tokens per frame");
        }
    }
}

}  // namespace

CompressedVideo compress(const VideoTensor& video, const CompressionConfig& config,
                         std::span<const std::vector<double>> attention_scores) {
    const auto start = Clock::now();
    config.validate();
    video.validate();
    check_attention(video, config, attention_scores);

    const std::size_t tokens = video.tokens_per_frame();
    const bool budgeted = config.mode == CompressionMode::budgeted;
    const std::size_t token_max = budgeted ? resolve_token_max(config, video.frame_count(), tokens) : 0;
    const unsigned workers = worker_count(config);

    CompressedVideo out;
    CompressionReport& report = out.report;
    report.config = config;
    report.frames = video.frame_count();
    report.tokens_per_frame = tokens;
    report.token_max = token_max;

    auto stage = Clock::now();
    out.grouping = group_frames(video, config.frame_threshold, {}, config.fgf_variant);
    report.timings.fgf_ms = elapsed_ms(stage);
    const std::size_t groups = out.grouping.group_count();

    stage = Clock::now();
    report.bypassed = budgeted && groups * (tokens + 1) <= token_max;
    if (!budgeted) {
        out.plan.budgets.assign(groups, tokens);
        out.plan.boundary_overhead = groups;
    } else if (report.bypassed) {
        out.plan.budgets.assign(groups, tokens);
        out.plan.token_max = token_max;
        out.plan.boundary_overhead = groups;
        out.plan.unallocated = token_max - groups * (tokens + 1);
    } else if (config.alloc_variant == AllocVariant::uniform) {
        out.plan = allocate_uniform(groups, token_max, tokens);
    } else {
        const std::vector<double> uniqueness = frame_uniqueness(out.grouping.global_features);
        out.plan = allocate(normalize_uniqueness(uniqueness), token_max, tokens);
    }
    report.timings.alloc_ms = elapsed_ms(stage);
    report.waste_redistributed = out.plan.waste_redistributed;

    stage = Clock::now();
    std::vector<std::size_t> budgets = out.plan.budgets;
    std::vector<std::size_t> reruns(groups, 0);
    out.frames.resize(groups);
    if (report.bypassed) {
        for (std::size_t g = 0; g < groups; ++g) {
            out.frames[g] = whole_group(out.grouping.representatives[g]);
        }
    } else {
        const GroupSelector select(out.grouping, config, attention_scores, tokens);
        parallel_for(groups, workers, [&](std::size_t g) { out.frames[g] = select(g, budgets[g]); });

        if (budgeted) {
            // Groups that ran out of tokens give their surplus back; it is shared
            // among the rest for at most three rounds.
            constexpr int kMaxRounds = 3;
            std::vector<bool> exhausted(groups, false);
            for (int round = 0;; ++round) {
                std::size_t surplus = 0;
                for (std::size_t g = 0; g < groups; ++g) {
                    const std::size_t got = out.frames[g].retained();
                    if (got < budgets[g]) {
                        surplus += budgets[g] - got;
                        budgets[g] = got;
                        exhausted[g] = true;
                    }
                }
                if (surplus == 0) {
                    break;
                }
                if (round == kMaxRounds) {
                    report.surplus_unused += surplus;
                    break;
                }
                std::vector<bool> eligible(groups);
                for (std::size_t g = 0; g < groups; ++g) {
                    eligible[g] = !exhausted[g];
                }
                std::vector<std::size_t> increments;
                const std::size_t placed = redistribute_evenly(budgets, eligible, surplus, tokens, &increments);
                report.surplus_redistributed += placed;
                report.surplus_unused += surplus - placed;
                std::vector<std::size_t> grown;
                for (std::size_t g = 0; g < groups; ++g) {
                    if (increments[g] > 0) {
                        grown.push_back(g);
                        ++reruns[g];
                    }
                }
                if (grown.empty()) {
                    break;
                }
                parallel_for(grown.size(), workers, [&](std::size_t i) {
                    const std::size_t g = grown[i];
                    out.frames[g] = select(g, budgets[g]);
                });
            }
        }
    }
    report.timings.sdc_ms = elapsed_ms(stage);

    std::size_t position = 0;
    report.groups.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const CompressedFrame& f = out.frames[g];
        GroupReport& gr = report.groups[g];
        gr.range = out.grouping.groups[g];
        gr.initial_budget = out.plan.budgets[g];
        gr.budget = budgets[g];
        gr.retained = f.retained();
        gr.fused = f.fused();
        gr.dropped = f.dropped_unclaimed.size();
        gr.reruns = reruns[g];
        const TokenMatrix& rep = out.grouping.representatives[g];
        const BoundValue bound = uniqueness_bound(rep, f.retained_ids);
        gr.bound = bound.value;
        gr.error = reconstruction_error(rep, f.retained_ids, ReconstructionScheme::nearest).value;
        report.bounds_renormalized = report.bounds_renormalized || bound.renormalized;

        report.retained += gr.retained;
        position += gr.retained;
        out.markers.push_back(position);
        ++position;
    }
    report.markers = groups;
    report.emitted = report.retained + report.markers;
    report.retained_ratio =
        static_cast<double>(report.emitted) / static_cast<double>(report.original_tokens());
    report.timings.total_ms = elapsed_ms(start);
    return out;
}

CompressionReport analyze(const VideoTensor& video, const CompressionConfig& config,
                          std::span<const std::vector<double>> attention_scores) {
    return compress(video, config, attention_scores).report;
}

}  // namespace unicomp
