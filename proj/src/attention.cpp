// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/attention.hpp"

#include <cmath>

#include "docslm/errors.hpp"
#include "docslm/hash.hpp"

namespace docslm {

namespace {

FeatureMatrix random_square(std::size_t d, SplitMix& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> data(d * d);
    for (double& v : data) {
        v = rng.next_signed() * scale;
    }
    return FeatureMatrix(d, d, std::move(data));
}

void check_dims(const FeatureMatrix& queries, const FeatureMatrix& keys_values,
                const AttentionParams& params) {
    if (queries.cols() != params.d_model || keys_values.cols() != params.d_model) {
        throw ShapeError("cross_attention: queries " + queries.shape_string() + ", keys/values " +
                         keys_values.shape_string() + ", d_model " +
                         std::to_string(params.d_model));
    }
}

}  // namespace

AttentionParams AttentionParams::make(std::size_t d_model, std::uint64_t seed) {
    if (d_model == 0) {
        throw ShapeError("AttentionParams: d_model must be >= 1");
    }
    SplitMix rng(hash_keys({seed, d_model}));
    auto w_q = random_square(d_model, rng);
    auto w_k = random_square(d_model, rng);
    auto w_v = random_square(d_model, rng);
    auto w_o = random_square(d_model, rng);
    return AttentionParams{d_model, std::move(w_q), std::move(w_k), std::move(w_v), std::move(w_o),
                           seed};
}

FeatureMatrix attention_weights(const FeatureMatrix& queries, const FeatureMatrix& keys_values,
                                const AttentionParams& params) {
    check_dims(queries, keys_values, params);
    const FeatureMatrix q = matmul(queries, params.w_q);
    const FeatureMatrix k = matmul(keys_values, params.w_k);
    FeatureMatrix scores = matmul(q, transpose(k));
    const double scale = 1.0 / std::sqrt(static_cast<double>(params.d_model));
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        for (double& s : scores.row(i)) {
            s *= scale;
        }
    }
    return softmax_rows(scores);
}

FeatureMatrix cross_attention(const FeatureMatrix& queries, const FeatureMatrix& keys_values,
                              const AttentionParams& params) {
    check_dims(queries, keys_values, params);
    if (keys_values.empty() || queries.empty()) {
        return queries;
    }
    const FeatureMatrix weights = attention_weights(queries, keys_values, params);
    const FeatureMatrix v = matmul(keys_values, params.w_v);
    const FeatureMatrix attended = matmul(matmul(weights, v), params.w_o);
    return add(queries, attended);
}

}  // namespace docslm
