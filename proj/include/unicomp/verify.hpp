// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "unicomp/sdc.hpp"
#include "unicomp/tensor.hpp"

namespace unicomp::verify {

struct BoundSuiteOptions {
    std::size_t trials = 1000;
    std::size_t max_n = 32;
    std::size_t max_d = 16;
    std::uint64_t seed = 20260101;
    double tolerance = 1e-6;
};

/// Outcome of one invariant over all trials. `counterexample` is JSON for the first violation.
struct InvariantTally {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst = 0.0;  ///< largest signed excess over the allowed side
    std::string counterexample;
};

struct BoundSuiteResult {
    InvariantTally nearest_identity{"nearest-identity", 0, 0, 0.0, {}};
    InvariantTally step2_inequality{"step2-inequality", 0, 0, 0.0, {}};
    InvariantTally monotone_bound{"monotone-bound", 0, 0, 0.0, {}};
    /// Reported only: how often the softmax error exceeds 2 sum_j min_i u_ij.
    std::size_t softmax_above_min_bound = 0;
    std::size_t softmax_checks = 0;

    bool ok() const noexcept {
        return nearest_identity.violations == 0 && step2_inequality.violations == 0 &&
               monotone_bound.violations == 0;
    }
};

/**
 * @brief Randomized checks of the reconstruction-error identities.
 *
 * Per trial: N in [1, max_n], d in [1, max_d] unit-norm gaussian rows, a
 * random nonempty selection S and a superset S + {extra}. Checks
 *   - nearest-identity: |E_nearest(S) - 2 sum_j min_i u_ij| <= tol
 *   - step2-inequality: E_softmax(S) <= step2_bound(S) + tol
 *   - monotone-bound:   bound(S + {extra}) <= bound(S) + tol
 * `extra_frames` (e.g. real features) are checked the same way after the trials.
 */
BoundSuiteResult run_bound_suite(const BoundSuiteOptions& options, std::span<const TokenMatrix> extra_frames = {});

struct SdcBenchOptions {
    std::size_t tokens = 256;
    std::size_t dims = 64;
    std::size_t budget = 64;
    double token_threshold = 0.2;
    std::size_t repeat = 20;
    std::uint64_t seed = 7;
};

struct SdcBenchResult {
    double reference_median_ms = 0.0;
    double parallel_median_ms = 0.0;
    double speedup = 0.0;       ///< reference median / parallel median
    std::size_t mismatches = 0;  ///< repeats whose outputs differ (ids, neighbours, features beyond 1e-6)
};

/// Times sdc_reference against sdc_parallel on the calling thread, one fresh gaussian frame per repeat.
SdcBenchResult bench_sdc(const SdcBenchOptions& options);

/// True when ids, redundancy maps and dropped ids match exactly and features agree within `tolerance`.
bool same_compressed_frame(const CompressedFrame& a, const CompressedFrame& b, double tolerance = 1e-6);

}  // namespace unicomp::verify
