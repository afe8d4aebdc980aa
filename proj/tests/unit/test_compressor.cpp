// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "docslm/compressor.hpp"
#include "docslm/errors.hpp"
#include "oracles.hpp"

namespace docslm {
namespace {

std::vector<OcrToken> random_ocr(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    static const char* words[] = {"total", "Berlin", "invoice", "date", "sum", "page", "office", "tax"};
    std::vector<OcrToken> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.01 + u(rng) * 0.1, h = 0.01 + u(rng) * 0.02;
        const double x0 = u(rng) * (1 - w), y0 = u(rng) * (1 - h);
        out.push_back({words[rng() % 8], BBox{x0, y0, x0 + w, y0 + h}, u(rng)});
    }
    return out;
}

FeatureMatrix rows_of(const FeatureMatrix& m, std::size_t first, std::size_t count) {
    FeatureMatrix out(count, m.cols());
    for (std::size_t i = 0; i < count; ++i)
        std::copy(m.row(first + i).begin(), m.row(first + i).end(), out.row(i).begin());
    return out;
}

class CompressorTest : public ::testing::Test {
protected:
    EncoderConfig enc_;
    GridConfig grid_;
    CompressorParams params_ = CompressorParams::make(enc_);
};

TEST_F(CompressorTest, VisualEncodingIsDeterministicAndShaped) {
    const Page page{7, 768, 768, {}};
    const CropGrid grid = select_grid(768, 768, grid_);
    const auto a = encode_page_visual(page, grid, enc_);
    const auto b = encode_page_visual(page, grid, enc_);
    ASSERT_EQ(a.local.size(), 4u);
    ASSERT_EQ(a.global_regions.size(), 4u);
    for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_EQ(a.local[c], b.local[c]);
        EXPECT_EQ(a.global_regions[c], b.global_regions[c]);
        EXPECT_EQ(a.local[c].rows(), 16u);
        EXPECT_EQ(a.local[c].cols(), 32u);
        EXPECT_EQ(a.global_regions[c].rows(), enc_.global_tokens_per_region);
        for (double v : a.local[c].data()) {
            EXPECT_GE(v, -1.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST_F(CompressorTest, DistinctPagesGetDistinctFeatures) {
    const CropGrid grid = select_grid(768, 768, grid_);
    const auto first = encode_page_visual(Page{0, 768, 768, {}}, grid, enc_);
    for (std::int64_t id = 1; id <= 100; ++id) {
        const auto other = encode_page_visual(Page{id, 768, 768, {}}, grid, enc_);
        EXPECT_NE(other.local[0], first.local[0]) << "page " << id;
    }
}

TEST_F(CompressorTest, OcrEmbeddingRules) {
    EXPECT_EQ(embed_ocr({}, enc_).rows(), 0u);
    const BBox b{0, 0, 0.1, 0.1};
    const auto m = embed_ocr({{"Berlin", b, 1.0}, {"berlin", b, 0.2}, {"Berlin", b, 0.9}, {"Paris", b, 1.0}}, enc_);
    ASSERT_EQ(m.rows(), 4u);
    EXPECT_TRUE(std::equal(m.row(0).begin(), m.row(0).end(), m.row(1).begin()));
    EXPECT_TRUE(std::equal(m.row(0).begin(), m.row(0).end(), m.row(2).begin()));
    EXPECT_FALSE(std::equal(m.row(0).begin(), m.row(0).end(), m.row(3).begin()));
    for (std::size_t i = 0; i < 4; ++i) {
        double n2 = 0.0;
        for (double v : m.row(i)) n2 += v * v;
        EXPECT_NEAR(n2, 1.0, 1e-12);
    }
}

TEST_F(CompressorTest, LocalCompressionShapesAndEmptyText) {
    std::mt19937_64 rng(1);
    const auto feats = encode_page_visual(Page{1, 768, 768, {}}, select_grid(768, 768, grid_), enc_);
    const auto& v = feats.local[0];
    EXPECT_EQ(local_ocr_compression(v, FeatureMatrix(0, enc_.d_model), params_.local), v);
    for (std::size_t k : {0u, 1u, 1000u}) {
        const auto t = embed_ocr(random_ocr(rng, k), enc_);
        EXPECT_EQ(local_ocr_compression(v, t, params_.local).rows(), v.rows());
    }
}

TEST_F(CompressorTest, LocalCompressionMatchesScalarOracle) {
    const EncoderConfig small{4, 2, 1, 0};
    const auto params = AttentionParams::make(4, 0);
    const auto feats = encode_page_visual(Page{3, 100, 100, {}}, CropGrid{1, 1, 384, 384, 384}, small);
    const auto t = embed_ocr({{"total", BBox{0, 0, 0.1, 0.1}, 1.0}}, small);
    const auto got = oracle::to_mat(local_ocr_compression(feats.local[0], t, params));
    const auto want = oracle::scalar_cross_attention(oracle::to_mat(feats.local[0]), oracle::to_mat(t), params);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(got[i][j], want[i][j], 1e-9);
}

TEST_F(CompressorTest, GlobalCompressionShapesAndOracle) {
    EncoderConfig enc = enc_;
    enc.global_tokens_per_region = 4;
    const auto feats = encode_page_visual(Page{2, 768, 768, {}}, select_grid(768, 768, grid_), enc);
    const auto& g = feats.global_regions[0];
    EXPECT_EQ(global_visual_compression(g, FeatureMatrix(0, enc.d_model), params_.global), g);
    for (std::size_t p : {1u, 16u, 64u}) {
        EncoderConfig e = enc;
        e.patches_per_crop = p;
        const auto f = encode_page_visual(Page{2, 768, 768, {}}, select_grid(768, 768, grid_), e);
        EXPECT_EQ(global_visual_compression(g, f.local[0], params_.global).rows(), 4u);
    }
    const EncoderConfig small{3, 5, 2, 0};
    const auto params = AttentionParams::make(3, 0);
    const auto sf = encode_page_visual(Page{9, 100, 100, {}}, CropGrid{1, 1, 384, 384, 384}, small);
    const auto got = oracle::to_mat(global_visual_compression(sf.global_regions[0], sf.local[0], params));
    const auto want = oracle::scalar_cross_attention(oracle::to_mat(sf.global_regions[0]),
                                                     oracle::to_mat(sf.local[0]), params);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got[i][j], want[i][j], 1e-9);
}

TEST_F(CompressorTest, TokenCountIndependentOfOcrCount) {
    std::mt19937_64 rng(2);
    for (std::size_t k : {0u, 1u, 100u, 5000u}) {
        const Page page{5, 1700, 2200, random_ocr(rng, k)};
        const auto emb = compress_page(page, enc_, grid_, params_.local, params_.global);
        const CropGrid grid = select_grid(1700, 2200, grid_);
        EXPECT_EQ(emb.token_count(), enc_.page_budget(grid)) << k << " OCR tokens";
        EXPECT_EQ(emb.tokens.cols(), enc_.d_model);
        EXPECT_TRUE(emb.tokens.all_finite());
    }
}

TEST_F(CompressorTest, ZeroOcrEqualsVisualOnlyPath) {
    const Page page{11, 1000, 1400, {}};
    const auto emb = compress_page(page, enc_, grid_, params_.local, params_.global);
    const CropGrid grid = select_grid(1000, 1400, grid_);
    const auto feats = encode_page_visual(page, grid, enc_);
    FeatureMatrix expect(0, enc_.d_model);
    for (std::size_t c = 0; c < grid.num_crops(); ++c) {
        expect.append_rows(global_visual_compression(feats.global_regions[c], feats.local[c], params_.global));
    }
    EXPECT_EQ(emb.tokens, expect);
}

TEST_F(CompressorTest, PipelineEqualsManualChaining) {
    std::mt19937_64 rng(3);
    GridConfig grid_cfg = grid_;
    grid_cfg.tau_conf = 0.4;
    const Page page{12, 2200, 1700, random_ocr(rng, 60)};
    const auto emb = compress_page(page, enc_, grid_cfg, params_.local, params_.global);

    const CropGrid grid = select_grid(page.width_px, page.height_px, grid_cfg);
    const auto crops = assign_ocr(filter_ocr(page.ocr, 0.4), grid, grid_cfg);
    const auto feats = encode_page_visual(page, grid, enc_);
    FeatureMatrix expect(0, enc_.d_model);
    for (std::size_t c = 0; c < grid.num_crops(); ++c) {
        const auto fused = local_ocr_compression(feats.local[c], embed_ocr(crops[c], enc_), params_.local);
        expect.append_rows(global_visual_compression(feats.global_regions[c], fused, params_.global));
    }
    EXPECT_EQ(emb.tokens, expect);
    EXPECT_EQ(emb.grid, grid);
}

TEST_F(CompressorTest, PermutingOcrWithinCropIsInvisible) {
    std::mt19937_64 rng(4);
    const CropGrid grid{1, 1, 384, 384, 384};
    const auto feats = encode_page_visual(Page{1, 100, 100, {}}, grid, enc_);
    for (int trial = 0; trial < 20; ++trial) {
        auto toks = random_ocr(rng, 30);
        const auto base = local_ocr_compression(feats.local[0], embed_ocr(toks, enc_), params_.local);
        std::shuffle(toks.begin(), toks.end(), rng);
        const auto shuffled = local_ocr_compression(feats.local[0], embed_ocr(toks, enc_), params_.local);
        for (std::size_t i = 0; i < base.data().size(); ++i) {
            ASSERT_NEAR(base.data()[i], shuffled.data()[i], 1e-9);
        }
    }
}

TEST_F(CompressorTest, MovingTokenBetweenCropsOnlyTouchesThoseRegions) {
    const Page base{4, 768, 768, {{"alpha", BBox{0.1, 0.1, 0.2, 0.15}, 1.0}, {"beta", BBox{0.6, 0.6, 0.7, 0.65}, 1.0}}};
    Page moved = base;
    moved.ocr[0].bbox = BBox{0.6, 0.1, 0.7, 0.15};  // crop (0,0) -> crop (0,1)
    const auto a = compress_page(base, enc_, grid_, params_.local, params_.global);
    const auto b = compress_page(moved, enc_, grid_, params_.local, params_.global);
    const std::size_t g = enc_.global_tokens_per_region;
    for (std::size_t crop = 0; crop < 4; ++crop) {
        const auto ra = rows_of(a.tokens, crop * g, g), rb = rows_of(b.tokens, crop * g, g);
        if (crop == 0 || crop == 1) {
            EXPECT_NE(ra, rb) << "crop " << crop;
        } else {
            EXPECT_EQ(ra, rb) << "crop " << crop;
        }
    }
}

TEST_F(CompressorTest, PaperScaleConfigYields576Tokens) {
    const EncoderConfig enc{1152, 16, 144, 0};
    GridConfig grid;
    grid.min_crops = grid.max_crops = 4;
    const Compressor compressor(enc, grid);
    std::mt19937_64 rng(5);
    const auto emb = compressor.compress(Page{1, 1700, 2200, random_ocr(rng, 50)});
    EXPECT_EQ(emb.token_count(), 576u);
    EXPECT_EQ(emb.tokens.cols(), 1152u);
}

TEST(TokenReductionRatio, Examples) {
    EXPECT_NEAR(token_reduction_ratio(3210, 576), 5.57, 0.01);
    EXPECT_DOUBLE_EQ(token_reduction_ratio(576, 576), 1.0);
    EXPECT_DOUBLE_EQ(token_reduction_ratio(2880, 576), 5.0);
    EXPECT_THROW(token_reduction_ratio(10, 0), ValidationError);
}

}  // namespace
}  // namespace docslm
