// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docslm/compressor.hpp"

namespace docslm {

/// Answer text that marks a segment as lacking evidence.
inline constexpr std::string_view kNotAnswerable = "Not Answerable";

/// True when `text`, trimmed of surrounding whitespace, equals the sentinel.
bool is_abstention(std::string_view text);

/// 1-based inclusive range of page positions within a document.
struct PageRange {
    std::size_t first;
    std::size_t last;

    std::size_t size() const noexcept { return last - first + 1; }
    friend bool operator==(const PageRange&, const PageRange&) = default;
};

/// Consecutive ranges of `segment_len` pages; the last one holds the remainder.
std::vector<PageRange> segment_document(std::size_t n_pages, std::size_t segment_len);

/// Probability vector over the vocabulary; non-negative and summing to 1.
class TokenDistribution {
public:
    /// Throws ValidationError unless probs is non-empty, finite, non-negative
    /// and sums to 1 within 1e-9.
    explicit TokenDistribution(std::vector<double> probs);

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

    friend bool operator==(const TokenDistribution&, const TokenDistribution&) = default;

private:
    std::vector<double> probs_;
};

struct Segment {
    std::size_t index = 0;  // 0-based segment position
    std::vector<std::int64_t> page_ids;
    std::vector<PageEmbedding> embeddings;
};

struct SegmentPrediction {
    std::size_t segment = 0;
    std::string text;
    std::vector<TokenDistribution> token_dists;
    double uncertainty = 0.0;
    bool abstained = false;

    /// Compares everything except token_dists, which streaming drops.
    bool same_outcome(const SegmentPrediction& other) const noexcept {
        return segment == other.segment && text == other.text &&
               uncertainty == other.uncertainty && abstained == other.abstained;
    }
};

/// One scripted response. Matches a segment when the query is equal and every
/// listed page id is present in the segment.
struct ScriptEntry {
    std::string query;
    std::vector<std::int64_t> pages;
    std::string answer;
    std::vector<std::vector<double>> token_dists;

    friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

/// Scriptable stand-in for the language model. Entries are consulted in order;
/// the first match wins. With no match it abstains using `abstain_dists`.
struct MockSlm {
    std::vector<std::string> vocab;
    std::vector<ScriptEntry> entries;
    std::vector<std::vector<double>> abstain_dists;

    /// Vocab {"Not", "Answerable"} with one-hot abstention distributions.
    static MockSlm with_default_vocab();

    const ScriptEntry* lookup(const std::string& query,
                              std::span<const std::int64_t> page_ids) const;

    friend bool operator==(const MockSlm&, const MockSlm&) = default;
};

/// Mean over positions of -sum p ln p. Throws on an empty list.
double token_entropy(std::span<const TokenDistribution> dists);

struct NtpLoss {
    double value = 0.0;
    /// Set when some target had probability 0; value is then a clamped bound.
    bool overflow = false;
};

/// -sum_k ln p_k(target_k).
NtpLoss ntp_loss(std::span<const TokenDistribution> dists, std::span<const std::size_t> target_ids);

SegmentPrediction run_segment(const Segment& segment, const std::string& query, const MockSlm& slm);

struct StreamConfig {
    std::size_t segment_len = 10;
    bool parallel = false;
    /// Parallel worker count; 0 means hardware concurrency.
    std::size_t workers = 0;
};

/// Resident embedding-token count sampled after every allocation or release.
struct ResidencyTrace {
    std::vector<std::size_t> samples;

    std::size_t peak() const noexcept;
};

struct StreamResult {
    std::vector<SegmentPrediction> predictions;  // ordered by segment; token_dists dropped
    ResidencyTrace trace;
};

/// Compresses and answers one segment at a time, releasing each segment's
/// embeddings before the next. Parallel mode runs up to `workers` segments at
/// once and yields identical predictions.
StreamResult stream_process(std::span<const Page> pages, const std::string& query,
                            const MockSlm& slm, const StreamConfig& cfg,
                            const Compressor& compressor);

}  // namespace docslm
