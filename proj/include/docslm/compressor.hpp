// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "docslm/attention.hpp"
#include "docslm/geometry.hpp"
#include "docslm/tensor.hpp"

namespace docslm {

/// One document page: pixel size plus recognized OCR tokens.
struct Page {
    std::int64_t page_id = 0;
    std::size_t width_px = 0;
    std::size_t height_px = 0;
    std::vector<OcrToken> ocr;

    friend bool operator==(const Page&, const Page&) = default;
};

struct EncoderConfig {
    std::size_t d_model = 32;
    /// Local visual tokens per crop.
    std::size_t patches_per_crop = 16;
    /// Output tokens per crop region; page budget = R * C * this.
    std::size_t global_tokens_per_region = 16;
    std::uint64_t seed = 0;

    void validate() const;

    std::size_t page_budget(const CropGrid& grid) const noexcept {
        return grid.num_crops() * global_tokens_per_region;
    }
};

/// Mock encoder output for one page. Both grids are row-major over (i, j).
struct PageFeatures {
    CropGrid grid;
    std::vector<FeatureMatrix> local;           // patches_per_crop x d each
    std::vector<FeatureMatrix> global_regions;  // global_tokens_per_region x d each
};

/// Fixed-length compressed page. Row count depends only on grid and config.
struct PageEmbedding {
    std::int64_t page_id;
    CropGrid grid;
    FeatureMatrix tokens;

    std::size_t token_count() const noexcept { return tokens.rows(); }
};

/// Hash-seeded stand-in for the vision encoder. Every entry is a pure function
/// of (page_id, crop, patch, dim, seed) and lies in [-1, 1].
PageFeatures encode_page_visual(const Page& page, const CropGrid& grid, const EncoderConfig& cfg);

/// Hash-embedding of case-folded token text; each row has unit L2 norm.
FeatureMatrix embed_ocr(const std::vector<OcrToken>& tokens, const EncoderConfig& cfg);

/// Local visual tokens enriched with the crop's OCR embeddings.
FeatureMatrix local_ocr_compression(const FeatureMatrix& v_ij, const FeatureMatrix& t_ij,
                                    const AttentionParams& params);

/// Region's global tokens attending over its fused local tokens.
FeatureMatrix global_visual_compression(const FeatureMatrix& g_ij, const FeatureMatrix& v_tilde_ij,
                                        const AttentionParams& params);

/// Two cross-attention blocks shared by every crop of every page.
struct CompressorParams {
    AttentionParams local;
    AttentionParams global;

    static CompressorParams make(const EncoderConfig& cfg);
};

/// Full page pipeline: select_grid, filter_ocr, assign_ocr, visual encoding,
/// per-crop OCR embedding and fusion, per-region global compression, then
/// row-major concatenation.
PageEmbedding compress_page(const Page& page, const EncoderConfig& cfg, const GridConfig& grid_cfg,
                            const AttentionParams& local_params,
                            const AttentionParams& global_params);

/// Bundles configuration and weights so callers can compress pages without
/// threading four arguments around.
class Compressor {
public:
    Compressor(EncoderConfig enc, GridConfig grid);

    PageEmbedding compress(const Page& page) const;

    /// Budget this compressor would produce for a page of the given size.
    std::size_t budget_for(std::size_t width_px, std::size_t height_px) const;

    const EncoderConfig& encoder_config() const noexcept { return enc_; }
    const GridConfig& grid_config() const noexcept { return grid_; }
    const CompressorParams& params() const noexcept { return params_; }

private:
    EncoderConfig enc_;
    GridConfig grid_;
    CompressorParams params_;
};

/// baseline / compressed tokens per page.
double token_reduction_ratio(std::size_t baseline_tokens_per_page,
                             std::size_t compressed_tokens_per_page);

}  // namespace docslm
