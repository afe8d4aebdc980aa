// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docslm/streaming.hpp"

namespace docslm {

struct AggregationResult {
    std::string answer;
    double uncertainty = 0.0;
    std::optional<std::size_t> source_segment;
    bool all_abstained = false;
};

/// Drops abstained predictions, preserving order.
std::vector<SegmentPrediction> filter_valid(std::span<const SegmentPrediction> preds);

/// Lowest-uncertainty prediction; ties go to the lowest segment index. An
/// empty input yields the abstention sentinel with all_abstained set.
AggregationResult select_answer(std::span<const SegmentPrediction> valid);

}  // namespace docslm
