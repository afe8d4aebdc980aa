// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "docslm/aggregate.hpp"

namespace docslm {
namespace {

SegmentPrediction pred(std::size_t seg, std::string text, double u) {
    SegmentPrediction p;
    p.segment = seg;
    p.abstained = is_abstention(text);
    p.text = std::move(text);
    p.uncertainty = u;
    return p;
}

// Linear scan with strict less-than keeps the first of any tie.
std::optional<std::size_t> scan_best(const std::vector<SegmentPrediction>& preds) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].abstained) continue;
        if (!best || preds[i].uncertainty < preds[*best].uncertainty ||
            (preds[i].uncertainty == preds[*best].uncertainty && preds[i].segment < preds[*best].segment))
            best = i;
    }
    return best;
}

std::vector<SegmentPrediction> random_predictions(std::mt19937_64& rng, std::size_t n) {
    static const char* answers[] = {"Berlin", "Munich", "Paris", "Not Answerable"};
    std::vector<SegmentPrediction> out;
    for (std::size_t s = 0; s < n; ++s) {
        // Coarse grid so ties are common.
        out.push_back(pred(s, answers[rng() % 4], static_cast<double>(rng() % 8) * 0.125));
    }
    return out;
}

TEST(FilterValid, DropsAbstentionsKeepsOrder) {
    const std::vector<SegmentPrediction> p{pred(0, "Berlin", 0.3), pred(1, "Not Answerable", 0.1),
                                           pred(2, "Munich", 0.2)};
    const auto v = filter_valid(p);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].text, "Berlin");
    EXPECT_EQ(v[1].text, "Munich");
}

TEST(SelectAnswer, PicksLowestUncertainty) {
    const std::vector<SegmentPrediction> p{pred(0, "Berlin", 0.29), pred(2, "Munich", 1.49)};
    const auto r = select_answer(p);
    EXPECT_EQ(r.answer, "Berlin");
    EXPECT_EQ(r.source_segment, 0u);
    EXPECT_DOUBLE_EQ(r.uncertainty, 0.29);
    EXPECT_FALSE(r.all_abstained);
}

TEST(SelectAnswer, TieGoesToEarlierSegment) {
    const std::vector<SegmentPrediction> p{pred(3, "Paris", 0.5), pred(1, "Munich", 0.5), pred(2, "Berlin", 0.7)};
    const auto r = select_answer(p);
    EXPECT_EQ(r.answer, "Munich");
    EXPECT_EQ(r.source_segment, 1u);
}

TEST(SelectAnswer, EmptyInputIsSentinel) {
    const auto r = select_answer({});
    EXPECT_EQ(r.answer, kNotAnswerable);
    EXPECT_TRUE(r.all_abstained);
    EXPECT_FALSE(r.source_segment.has_value());
}

TEST(SelectAnswer, MatchesLinearScan) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto preds = random_predictions(rng, 1 + rng() % 50);
        const auto r = select_answer(filter_valid(preds));
        const auto best = scan_best(preds);
        if (!best) {
            ASSERT_TRUE(r.all_abstained);
            ASSERT_EQ(r.answer, kNotAnswerable);
            continue;
        }
        ASSERT_FALSE(r.all_abstained);
        ASSERT_EQ(r.source_segment, preds[*best].segment);
        ASSERT_EQ(r.answer, preds[*best].text);
        ASSERT_FALSE(is_abstention(r.answer));
    }
}

TEST(SelectAnswer, InvariantUnderPositiveRescaleAndPermutation) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        auto preds = filter_valid(random_predictions(rng, 1 + rng() % 20));
        if (preds.empty()) continue;
        const auto base = select_answer(preds);
        auto scaled = preds;
        const double k = 0.1 + static_cast<double>(rng() % 100);
        for (auto& p : scaled) p.uncertainty *= k;
        EXPECT_EQ(select_answer(scaled).source_segment, base.source_segment);
        std::shuffle(preds.begin(), preds.end(), rng);
        EXPECT_EQ(select_answer(preds).source_segment, base.source_segment);
    }
}

}  // namespace
}  // namespace docslm
