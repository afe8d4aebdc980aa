// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/compressor.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "docslm/errors.hpp"
#include "docslm/hash.hpp"

namespace docslm {

namespace {

enum class FeatureRole : std::uint64_t { kLocal = 1, kGlobal = 2, kText = 3 };

FeatureMatrix hashed_block(std::size_t rows, std::size_t d, FeatureRole role, std::int64_t page_id,
                           std::size_t crop, std::uint64_t seed) {
    FeatureMatrix m(rows, d);
    for (std::size_t p = 0; p < rows; ++p) {
        for (std::size_t k = 0; k < d; ++k) {
            m(p, k) = hash_to_unit(hash_keys({static_cast<std::uint64_t>(role),
                                              static_cast<std::uint64_t>(page_id), crop, p, k,
                                              seed}));
        }
    }
    return m;
}

std::string case_fold(const std::string& s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

void EncoderConfig::validate() const {
    if (d_model < 1 || patches_per_crop < 1 || global_tokens_per_region < 1) {
        throw ValidationError("encoder: d_model, patches_per_crop and global_tokens_per_region must be >= 1");
    }
}

PageFeatures encode_page_visual(const Page& page, const CropGrid& grid, const EncoderConfig& cfg) {
    cfg.validate();
    if (page.width_px < 1 || page.height_px < 1) {
        throw ValidationError("encode_page_visual: page " + std::to_string(page.page_id) +
                              " has invalid dimensions");
    }
    PageFeatures feats{grid, {}, {}};
    feats.local.reserve(grid.num_crops());
    feats.global_regions.reserve(grid.num_crops());
    for (std::size_t crop = 0; crop < grid.num_crops(); ++crop) {
        feats.local.push_back(hashed_block(cfg.patches_per_crop, cfg.d_model, FeatureRole::kLocal,
                                           page.page_id, crop, cfg.seed));
        feats.global_regions.push_back(hashed_block(cfg.global_tokens_per_region, cfg.d_model,
                                                    FeatureRole::kGlobal, page.page_id, crop,
                                                    cfg.seed));
    }
    return feats;
}

FeatureMatrix embed_ocr(const std::vector<OcrToken>& tokens, const EncoderConfig& cfg) {
    cfg.validate();
    FeatureMatrix m(tokens.size(), cfg.d_model);
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const std::uint64_t text_hash = hash_bytes(case_fold(tokens[k].text));
        auto row = m.row(k);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < cfg.d_model; ++j) {
            row[j] = hash_to_unit(
                hash_keys({static_cast<std::uint64_t>(FeatureRole::kText), text_hash, j, cfg.seed}));
            norm2 += row[j] * row[j];
        }
        // A zero row is astronomically unlikely; fall back to a unit axis.
        if (norm2 == 0.0) {
            row[0] = 1.0;
            continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : row) v *= inv;
    }
    return m;
}

FeatureMatrix local_ocr_compression(const FeatureMatrix& v_ij, const FeatureMatrix& t_ij,
                                    const AttentionParams& params) {
    return cross_attention(v_ij, t_ij, params);
}

FeatureMatrix global_visual_compression(const FeatureMatrix& g_ij, const FeatureMatrix& v_tilde_ij,
                                        const AttentionParams& params) {
    return cross_attention(g_ij, v_tilde_ij, params);
}

CompressorParams CompressorParams::make(const EncoderConfig& cfg) {
    cfg.validate();
    return CompressorParams{AttentionParams::make(cfg.d_model, cfg.seed),
                            AttentionParams::make(cfg.d_model, cfg.seed + 1)};
}

PageEmbedding compress_page(const Page& page, const EncoderConfig& cfg, const GridConfig& grid_cfg,
                            const AttentionParams& local_params,
                            const AttentionParams& global_params) {
    const CropGrid grid = select_grid(page.width_px, page.height_px, grid_cfg);
    const auto kept = filter_ocr(page.ocr, grid_cfg.tau_conf);
    const auto per_crop = assign_ocr(kept, grid, grid_cfg);
    const PageFeatures feats = encode_page_visual(page, grid, cfg);

    FeatureMatrix out(0, cfg.d_model);
    for (std::size_t crop = 0; crop < grid.num_crops(); ++crop) {
        const FeatureMatrix text = embed_ocr(per_crop[crop], cfg);
        const FeatureMatrix fused = local_ocr_compression(feats.local[crop], text, local_params);
        out.append_rows(global_visual_compression(feats.global_regions[crop], fused, global_params));
    }
    return PageEmbedding{page.page_id, grid, std::move(out)};
}

Compressor::Compressor(EncoderConfig enc, GridConfig grid)
    : enc_(enc), grid_(grid), params_(CompressorParams::make(enc)) {
    grid_.validate();
}

PageEmbedding Compressor::compress(const Page& page) const {
    return compress_page(page, enc_, grid_, params_.local, params_.global);
}

std::size_t Compressor::budget_for(std::size_t width_px, std::size_t height_px) const {
    return enc_.page_budget(select_grid(width_px, height_px, grid_));
}

double token_reduction_ratio(std::size_t baseline_tokens_per_page,
                             std::size_t compressed_tokens_per_page) {
    if (compressed_tokens_per_page == 0) {
        throw ValidationError("token_reduction_ratio: compressed token count must be > 0");
    }
    return static_cast<double>(baseline_tokens_per_page) /
           static_cast<double>(compressed_tokens_per_page);
}

}  // namespace docslm
