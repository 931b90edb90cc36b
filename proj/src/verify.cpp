// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "unicomp/core_math.hpp"
#include "unicomp/synthetic.hpp"

namespace unicomp::verify {

namespace {

std::string counterexample(const TokenMatrix& tokens, std::span<const TokenId> selected, double lhs, double rhs) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < tokens.rows(); ++i) {
        rows.push_back(std::vector<float>(tokens.row(i).begin(), tokens.row(i).end()));
    }
    return nlohmann::json{{"tokens", rows},
                          {"selected", std::vector<TokenId>(selected.begin(), selected.end())},
                          {"lhs", lhs},
                          {"rhs", rhs}}
        .dump();
}

// Records lhs <= rhs + tol (or |lhs - rhs| <= tol when two-sided).
void record(InvariantTally& tally, double lhs, double rhs, double tol, bool two_sided, const TokenMatrix& tokens,
            std::span<const TokenId> selected) {
    ++tally.checks;
    const double excess = two_sided ? std::abs(lhs - rhs) : lhs - rhs;
    if (tally.checks == 1 || excess > tally.worst) {
        tally.worst = excess;
    }
    if (!(excess <= tol)) {
        if (tally.violations == 0) {
            tally.counterexample = counterexample(tokens, selected, lhs, rhs);
        }
        ++tally.violations;
    }
}

void check_frame(const TokenMatrix& tokens, synthetic::Rng& rng, double tol, BoundSuiteResult& out) {
    const std::size_t n = tokens.rows();
    const std::vector<TokenId> selected = synthetic::random_subset(n, rng.index(1, n), rng);

    const double nearest = reconstruction_error(tokens, selected, ReconstructionScheme::nearest).value;
    const double bound = uniqueness_bound(tokens, selected).value;
    record(out.nearest_identity, nearest, bound, tol, true, tokens, selected);

    const double softmax = reconstruction_error(tokens, selected, ReconstructionScheme::softmax).value;
    const double step2 = step2_bound(tokens, selected).value;
    record(out.step2_inequality, softmax, step2, tol, false, tokens, selected);

    ++out.softmax_checks;
    if (softmax > bound + tol) {
        ++out.softmax_above_min_bound;
    }

    std::vector<TokenId> grown = selected;
    if (grown.size() < n) {
        std::vector<bool> in(n, false);
        for (TokenId id : grown) {
            in[id] = true;
        }
        std::vector<TokenId> outside;
        for (TokenId j = 0; j < n; ++j) {
            if (!in[j]) {
                outside.push_back(j);
            }
        }
        grown.push_back(outside[rng.index(0, outside.size() - 1)]);
    }
    record(out.monotone_bound, uniqueness_bound(tokens, grown).value, bound, tol, false, tokens, grown);
}

}  // namespace

BoundSuiteResult run_bound_suite(const BoundSuiteOptions& options, std::span<const TokenMatrix> extra_frames) {
    if (options.max_n == 0 || options.max_d == 0) {
        throw ConfigError("max-n and max-d must be >= 1");
    }
    synthetic::Rng rng(options.seed);
    BoundSuiteResult out;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t n = rng.index(1, options.max_n);
        const std::size_t d = rng.index(1, options.max_d);
        check_frame(synthetic::unit_tokens(n, d, rng), rng, options.tolerance, out);
    }
    for (const TokenMatrix& frame : extra_frames) {
        check_frame(frame, rng, options.tolerance, out);
    }
    return out;
}

bool same_compressed_frame(const CompressedFrame& a, const CompressedFrame& b, double tolerance) {
    if (a.retained_ids != b.retained_ids || a.redundancy_map != b.redundancy_map ||
        a.dropped_unclaimed != b.dropped_unclaimed) {
        return false;
    }
    const auto fa = a.retained_features.values();
    const auto fb = b.retained_features.values();
    if (fa.size() != fb.size() || a.retained_features.cols() != b.retained_features.cols()) {
        return false;
    }
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (!(std::abs(static_cast<double>(fa[i]) - fb[i]) <= tolerance)) {
            return false;
        }
    }
    return true;
}

SdcBenchResult bench_sdc(const SdcBenchOptions& options) {
    using Clock = std::chrono::steady_clock;
    if (options.repeat == 0) {
        throw ConfigError("repeat must be >= 1");
    }
    synthetic::Rng rng(options.seed);
    SdcOptions sdc;
    sdc.token_threshold = options.token_threshold;

    std::vector<double> reference_ms;
    std::vector<double> parallel_ms;
    SdcBenchResult out;
    for (std::size_t r = 0; r < options.repeat; ++r) {
        const TokenMatrix frame = synthetic::gaussian_tokens(options.tokens, options.dims, rng);

        auto start = Clock::now();
        const CompressedFrame slow = sdc_reference(frame, nullptr, options.budget, sdc);
        reference_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());

        start = Clock::now();
        const CompressedFrame fast = sdc_parallel(frame, nullptr, options.budget, sdc);
        parallel_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());

        if (!same_compressed_frame(slow, fast)) {
            ++out.mismatches;
        }
    }
    const auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    };
    out.reference_median_ms = median(reference_ms);
    out.parallel_median_ms = median(parallel_ms);
    out.speedup = out.parallel_median_ms > 0.0 ? out.reference_median_ms / out.parallel_median_ms : 0.0;
    return out;
}

}  // namespace unicomp::verify
