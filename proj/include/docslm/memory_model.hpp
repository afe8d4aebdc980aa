// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace docslm {

/// Coefficients of the affine peak-VRAM model:
///   GB = params_billion * bytes_per_param + k_tokens * gb_per_k_tokens + overhead_gb
/// where k_tokens is the resident context in units of 1000 tokens.
struct MemoryModelParams {
    double params_billion = 0.0;
    double bytes_per_param = 0.0;
    double gb_per_k_tokens = 0.0;
    double overhead_gb = 0.0;

    void validate() const;
};

double predict_vram(const MemoryModelParams& params, double k_tokens);

/// Solves for gb_per_k_tokens and overhead_gb so the model passes exactly
/// through (k1, gb1) and (k2, gb2), holding parameter memory fixed.
MemoryModelParams fit_two_point(double params_billion, double bytes_per_param, double k1,
                                double gb1, double k2, double gb2);

struct ModelSpec {
    std::string label;
    MemoryModelParams params;
    std::size_t tokens_per_page = 0;
    bool streaming = false;
    std::size_t segment_len = 1;

    /// Resident context in 1k tokens. Streaming models only ever hold one
    /// segment, so their context stops growing at segment_len pages.
    double k_tokens(std::size_t pages) const;
};

struct SweepRow {
    std::string label;
    std::size_t pages;
    double k_tokens;
    double predicted_gb;
};

/// One row per (model, page count), models in input order, pages in the order given.
std::vector<SweepRow> mem_sweep(const std::vector<ModelSpec>& models,
                                const std::vector<std::size_t>& page_counts);

/// CSV with header `label,pages,k_tokens,predicted_gb`; k_tokens has 4
/// decimals and predicted_gb 1 decimal.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace docslm
