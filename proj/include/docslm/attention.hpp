// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "docslm/tensor.hpp"

namespace docslm {

/// Projection weights for one single-head cross-attention block.
struct AttentionParams {
    std::size_t d_model;
    FeatureMatrix w_q;
    FeatureMatrix w_k;
    FeatureMatrix w_v;
    FeatureMatrix w_o;
    std::uint64_t seed;

    /// Deterministic init: entries uniform in [-1, 1] from a splitmix stream
    /// seeded by (seed, d), scaled by 1/sqrt(d).
    static AttentionParams make(std::size_t d_model, std::uint64_t seed);
};

/// Softmax(Q K^T / sqrt(d)) for the given queries and keys, rows = queries.
/// Exposed so tests can recompute the mixing weights independently.
FeatureMatrix attention_weights(const FeatureMatrix& queries, const FeatureMatrix& keys_values,
                                const AttentionParams& params);

/// Residual single-head cross-attention: queries + CA(queries, keys_values).
/// With an empty key set the attention term is zero and queries are returned
/// unchanged. Output shape always equals the query shape.
FeatureMatrix cross_attention(const FeatureMatrix& queries, const FeatureMatrix& keys_values,
                              const AttentionParams& params);

}  // namespace docslm
