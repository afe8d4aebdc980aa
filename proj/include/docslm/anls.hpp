// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace docslm {

/// Lower-cases ASCII, trims, and collapses internal whitespace runs to one space.
std::string normalize_answer(std::string_view s);

/// Levenshtein distance over UTF-8 code points.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Normalized Levenshtein similarity 1 - d / max(len) on normalized strings,
/// zeroed below `threshold`. Two empty strings score 1.
double anls(std::string_view prediction, std::string_view truth, double threshold = 0.5);

}  // namespace docslm
