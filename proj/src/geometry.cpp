// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "docslm/errors.hpp"

namespace docslm {

std::string bbox_problem(double x0, double y0, double x1, double y1) {
    for (double v : {x0, y0, x1, y1}) {
        if (!std::isfinite(v)) return "coordinate is not finite";
        if (v < 0.0 || v > 1.0) return "coordinate outside [0,1]";
    }
    if (!(x0 < x1)) return "x0 must be < x1";
    if (!(y0 < y1)) return "y0 must be < y1";
    return {};
}

BBox BBox::make(double x0, double y0, double x1, double y1) {
    if (auto why = bbox_problem(x0, y0, x1, y1); !why.empty()) {
        throw ValidationError("invalid bbox: " + why);
    }
    return BBox{x0, y0, x1, y1};
}

OverlapMode parse_overlap_mode(const std::string& name) {
    if (name == "iou") return OverlapMode::kIou;
    if (name == "intersection") return OverlapMode::kIntersection;
    if (name == "token_coverage") return OverlapMode::kTokenCoverage;
    throw ValidationError("unknown overlap mode '" + name + "'");
}

std::string to_string(OverlapMode mode) {
    switch (mode) {
        case OverlapMode::kIou: return "iou";
        case OverlapMode::kIntersection: return "intersection";
        case OverlapMode::kTokenCoverage: return "token_coverage";
    }
    return "intersection";
}

void GridConfig::validate() const {
    if (crop_px < 1) throw ValidationError("grid: crop_px must be >= 1");
    if (min_crops < 1) throw ValidationError("grid: min_crops must be >= 1");
    if (max_crops < min_crops) throw ValidationError("grid: max_crops must be >= min_crops");
    if (!(tau_overlap >= 0.0)) throw ValidationError("grid: tau_overlap must be >= 0");
    if (!(tau_conf >= 0.0 && tau_conf <= 1.0)) throw ValidationError("grid: tau_conf must be in [0,1]");
}

CropGrid select_grid(std::size_t width_px, std::size_t height_px, const GridConfig& cfg) {
    if (width_px < 1 || height_px < 1) {
        throw ValidationError("select_grid: page dimensions must be >= 1");
    }
    cfg.validate();
    // |R/C - h/w| = |R*w - C*h| / (C*w); compared exactly as fractions.
    __extension__ typedef unsigned __int128 u128;
    const auto w = static_cast<std::uint64_t>(width_px);
    const auto h = static_cast<std::uint64_t>(height_px);

    bool have = false;
    std::uint64_t best_r = 0, best_c = 0;
    u128 best_num = 0, best_den = 1;
    for (std::uint64_t r = 1; r <= cfg.max_crops; ++r) {
        for (std::uint64_t c = 1; r * c <= cfg.max_crops; ++c) {
            if (r * c < cfg.min_crops) continue;
            const u128 rw = static_cast<u128>(r) * w;
            const u128 ch = static_cast<u128>(c) * h;
            const u128 num = rw > ch ? rw - ch : ch - rw;
            const u128 den = static_cast<u128>(c) * w;
            bool better = !have;
            if (have) {
                const u128 lhs = num * best_den;
                const u128 rhs = best_num * den;
                if (lhs < rhs) {
                    better = true;
                } else if (lhs == rhs) {
                    const auto n = r * c, best_n = best_r * best_c;
                    better = n < best_n || (n == best_n && r < best_r);
                }
            }
            if (better) {
                have = true;
                best_r = r;
                best_c = c;
                best_num = num;
                best_den = den;
            }
        }
    }
    const auto rows = static_cast<std::size_t>(best_r);
    const auto cols = static_cast<std::size_t>(best_c);
    return CropGrid{rows, cols, cfg.crop_px, cols * cfg.crop_px, rows * cfg.crop_px};
}

BBox crop_bbox(const CropGrid& grid, std::size_t i, std::size_t j) {
    if (i >= grid.rows || j >= grid.cols) {
        throw ValidationError("crop_bbox: index (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside " + std::to_string(grid.rows) + "x" +
                              std::to_string(grid.cols) + " grid");
    }
    const auto r = static_cast<double>(grid.rows);
    const auto c = static_cast<double>(grid.cols);
    return BBox{static_cast<double>(j) / c, static_cast<double>(i) / r,
                static_cast<double>(j + 1) / c, static_cast<double>(i + 1) / r};
}

double intersection_area(const BBox& a, const BBox& b) noexcept {
    const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double overlap(const BBox& b1, const BBox& b2, OverlapMode mode) noexcept {
    const double inter = intersection_area(b1, b2);
    if (inter == 0.0) return 0.0;
    switch (mode) {
        case OverlapMode::kIou: {
            const double uni = b1.area() + b2.area() - inter;
            return std::clamp(inter / uni, 0.0, 1.0);
        }
        case OverlapMode::kIntersection:
            return inter;
        case OverlapMode::kTokenCoverage:
            return std::clamp(inter / b1.area(), 0.0, 1.0);
    }
    return inter;
}

std::vector<OcrToken> filter_ocr(const std::vector<OcrToken>& tokens, double tau_conf) {
    if (!(tau_conf >= 0.0 && tau_conf <= 1.0)) {
        throw ValidationError("filter_ocr: tau_conf must be in [0,1]");
    }
    std::vector<OcrToken> kept;
    std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(kept),
                 [tau_conf](const OcrToken& t) { return t.conf >= tau_conf; });
    return kept;
}

std::vector<std::vector<OcrToken>> assign_ocr(const std::vector<OcrToken>& tokens,
                                              const CropGrid& grid, const GridConfig& cfg) {
    std::vector<std::vector<OcrToken>> crops(grid.num_crops());
    for (const auto& tok : tokens) {
        // Only crops whose index range can touch the box need testing.
        const auto clamp_idx = [](double v, std::size_t n) {
            const auto k = static_cast<std::ptrdiff_t>(std::floor(v * static_cast<double>(n)));
            return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 1));
        };
        const std::size_t i_lo = clamp_idx(tok.bbox.y0, grid.rows);
        const std::size_t i_hi = clamp_idx(tok.bbox.y1, grid.rows);
        const std::size_t j_lo = clamp_idx(tok.bbox.x0, grid.cols);
        const std::size_t j_hi = clamp_idx(tok.bbox.x1, grid.cols);
        // One crop of slack on each side absorbs rounding in the floor().
        const std::size_t i_end = std::min(i_hi + 1, grid.rows - 1);
        const std::size_t j_end = std::min(j_hi + 1, grid.cols - 1);
        for (std::size_t i = (i_lo > 0 ? i_lo - 1 : 0); i <= i_end; ++i) {
            for (std::size_t j = (j_lo > 0 ? j_lo - 1 : 0); j <= j_end; ++j) {
                if (overlap(tok.bbox, crop_bbox(grid, i, j), cfg.overlap_mode) > cfg.tau_overlap) {
                    crops[i * grid.cols + j].push_back(tok);
                }
            }
        }
    }
    return crops;
}

}  // namespace docslm
