// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "unicomp/sdc.hpp"

namespace unicomp {

// attn_topk() comes from sdc.hpp; it shares the selection machinery there.

/// Uniform k_budget-subset without replacement, reproducible for a seed, ids in original order.
CompressedFrame random_select(const TokenMatrix& frame, std::size_t k_budget, std::uint64_t seed);

/// Top k_budget tokens by mean uniqueness (graph on key_frame when given), no fusion, original order.
CompressedFrame unique_topk(const TokenMatrix& frame, const TokenMatrix* key_frame, std::size_t k_budget);

}  // namespace unicomp
