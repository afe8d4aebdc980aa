// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace docslm {

/// Axis-aligned box in normalized page coordinates: 0 <= x0 < x1 <= 1 and
/// 0 <= y0 < y1 <= 1.
struct BBox {
    double x0;
    double y0;
    double x1;
    double y1;

    /// Validating constructor; throws ValidationError on a malformed box.
    static BBox make(double x0, double y0, double x1, double y1);

    double area() const noexcept { return (x1 - x0) * (y1 - y0); }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Returns an empty string if the box is valid, otherwise a reason.
std::string bbox_problem(double x0, double y0, double x1, double y1);

struct OcrToken {
    std::string text;
    BBox bbox;
    double conf;

    friend bool operator==(const OcrToken&, const OcrToken&) = default;
};

enum class OverlapMode { kIou, kIntersection, kTokenCoverage };

/// Parses "iou" | "intersection" | "token_coverage".
OverlapMode parse_overlap_mode(const std::string& name);
std::string to_string(OverlapMode mode);

struct GridConfig {
    std::size_t crop_px = 384;
    std::size_t min_crops = 4;
    std::size_t max_crops = 18;
    OverlapMode overlap_mode = OverlapMode::kIntersection;
    double tau_overlap = 0.0;
    /// OCR tokens with conf below this are dropped before assignment.
    double tau_conf = 0.0;

    void validate() const;
};

struct CropGrid {
    std::size_t rows;
    std::size_t cols;
    std::size_t crop_px;
    std::size_t target_w;
    std::size_t target_h;

    std::size_t num_crops() const noexcept { return rows * cols; }

    friend bool operator==(const CropGrid&, const CropGrid&) = default;
};

/// Picks the R x C grid with R*C in [min_crops, max_crops] whose ratio R/C is
/// closest to height/width. Ties go to fewer crops, then fewer rows.
CropGrid select_grid(std::size_t width_px, std::size_t height_px, const GridConfig& cfg);

/// Normalized box of crop (i, j): [j/C, i/R, (j+1)/C, (i+1)/R].
BBox crop_bbox(const CropGrid& grid, std::size_t i, std::size_t j);

double intersection_area(const BBox& a, const BBox& b) noexcept;

/// iou: inter/union; intersection: inter area; token_coverage: inter/area(b1).
double overlap(const BBox& b1, const BBox& b2, OverlapMode mode) noexcept;

/// Keeps tokens with conf >= tau_conf, preserving order.
std::vector<OcrToken> filter_ocr(const std::vector<OcrToken>& tokens, double tau_conf);

/// Per-crop token lists in row-major order (index i*C + j). Token k lands in
/// crop (i, j) iff overlap(b_k, crop_bbox(i, j)) > tau_overlap, so a token may
/// land in several crops or none.
std::vector<std::vector<OcrToken>> assign_ocr(const std::vector<OcrToken>& tokens,
                                              const CropGrid& grid, const GridConfig& cfg);

}  // namespace docslm
