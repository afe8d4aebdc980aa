// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/aggregate.hpp"

#include <algorithm>

namespace docslm {

std::vector<SegmentPrediction> filter_valid(std::span<const SegmentPrediction> preds) {
    std::vector<SegmentPrediction> valid;
    std::copy_if(preds.begin(), preds.end(), std::back_inserter(valid),
                 [](const SegmentPrediction& p) { return !p.abstained; });
    return valid;
}

AggregationResult select_answer(std::span<const SegmentPrediction> valid) {
    if (valid.empty()) {
        return AggregationResult{std::string(kNotAnswerable), 0.0, std::nullopt, true};
    }
    const auto best = std::min_element(valid.begin(), valid.end(),
                                       [](const SegmentPrediction& a, const SegmentPrediction& b) {
                                           if (a.uncertainty != b.uncertainty) {
                                               return a.uncertainty < b.uncertainty;
                                           }
                                           return a.segment < b.segment;
                                       });
    return AggregationResult{best->text, best->uncertainty, best->segment, false};
}

}  // namespace docslm
