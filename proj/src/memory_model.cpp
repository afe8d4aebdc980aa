// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/memory_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "docslm/errors.hpp"

namespace docslm {

void MemoryModelParams::validate() const {
    for (double v : {params_billion, bytes_per_param, gb_per_k_tokens, overhead_gb}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("memory model coefficients must be finite and >= 0");
        }
    }
}

double predict_vram(const MemoryModelParams& params, double k_tokens) {
    params.validate();
    if (!(k_tokens >= 0.0)) throw ValidationError("predict_vram: k_tokens must be >= 0");
    return params.params_billion * params.bytes_per_param + k_tokens * params.gb_per_k_tokens +
           params.overhead_gb;
}

MemoryModelParams fit_two_point(double params_billion, double bytes_per_param, double k1,
                                double gb1, double k2, double gb2) {
    if (k1 == k2) throw ValidationError("fit_two_point: fit points need distinct token counts");
    MemoryModelParams p;
    p.params_billion = params_billion;
    p.bytes_per_param = bytes_per_param;
    p.gb_per_k_tokens = (gb2 - gb1) / (k2 - k1);
    p.overhead_gb = gb1 - params_billion * bytes_per_param - k1 * p.gb_per_k_tokens;
    if (p.overhead_gb < 0.0) {
        throw ValidationError("fit_two_point: parameter memory exceeds the fitted intercept; "
                              "overhead would be negative");
    }
    p.validate();
    return p;
}

double ModelSpec::k_tokens(std::size_t pages) const {
    const std::size_t resident = streaming ? std::min(pages, segment_len) : pages;
    return static_cast<double>(resident * tokens_per_page) / 1000.0;
}

std::vector<SweepRow> mem_sweep(const std::vector<ModelSpec>& models,
                                const std::vector<std::size_t>& page_counts) {
    if (models.empty()) throw ValidationError("mem_sweep: no model specs");
    if (page_counts.empty()) throw ValidationError("mem_sweep: no page counts");
    std::vector<SweepRow> rows;
    rows.reserve(models.size() * page_counts.size());
    for (const auto& m : models) {
        m.params.validate();
        if (m.streaming && m.segment_len < 1) {
            throw ValidationError("mem_sweep: model '" + m.label + "' needs segment_len >= 1");
        }
        for (std::size_t pages : page_counts) {
            const double k = m.k_tokens(pages);
            rows.push_back({m.label, pages, k, predict_vram(m.params, k)});
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "label,pages,k_tokens,predicted_gb\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, ",%zu,%.4f,%.1f\n", r.pages, r.k_tokens, r.predicted_gb);
        out += r.label;
        out += buf;
    }
    return out;
}

}  // namespace docslm
