// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/streaming.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "docslm/errors.hpp"

namespace docslm {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<TokenDistribution> to_distributions(const std::vector<std::vector<double>>& raw,
                                                std::size_t vocab_size, const std::string& what) {
    std::vector<TokenDistribution> out;
    out.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k].size() != vocab_size) {
            throw ValidationError(what + ": token_dists[" + std::to_string(k) + "] has " +
                                  std::to_string(raw[k].size()) + " entries, vocab has " +
                                  std::to_string(vocab_size));
        }
        try {
            out.emplace_back(raw[k]);
        } catch (const ValidationError& e) {
            throw ValidationError(what + ": token_dists[" + std::to_string(k) + "]: " + e.what());
        }
    }
    return out;
}

std::size_t vocab_index(const std::vector<std::string>& vocab, std::string_view word) {
    const auto it = std::find(vocab.begin(), vocab.end(), word);
    return it == vocab.end() ? 0 : static_cast<std::size_t>(it - vocab.begin());
}

// Single-writer residency counter; the mutex serializes parallel workers.
class ResidencyCounter {
public:
    void acquire(std::size_t tokens) { update(static_cast<std::ptrdiff_t>(tokens)); }
    void release(std::size_t tokens) { update(-static_cast<std::ptrdiff_t>(tokens)); }

    ResidencyTrace take() && { return std::move(trace_); }

private:
    void update(std::ptrdiff_t delta) {
        std::lock_guard lock(mu_);
        resident_ = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(resident_) + delta);
        trace_.samples.push_back(resident_);
    }

    std::mutex mu_;
    std::size_t resident_ = 0;
    ResidencyTrace trace_;
};

SegmentPrediction process_segment(std::span<const Page> pages, const PageRange& range,
                                  std::size_t index, const std::string& query, const MockSlm& slm,
                                  const Compressor& compressor, ResidencyCounter& residency) {
    Segment seg;
    seg.index = index;
    std::size_t held = 0;
    for (std::size_t pos = range.first; pos <= range.last; ++pos) {
        const Page& page = pages[pos - 1];
        seg.page_ids.push_back(page.page_id);
        seg.embeddings.push_back(compressor.compress(page));
        held += seg.embeddings.back().token_count();
        residency.acquire(seg.embeddings.back().token_count());
    }
    SegmentPrediction pred = run_segment(seg, query, slm);
    // Only the text, uncertainty and abstention flag outlive the segment.
    pred.token_dists.clear();
    pred.token_dists.shrink_to_fit();
    seg.embeddings.clear();
    seg.embeddings.shrink_to_fit();
    residency.release(held);
    return pred;
}

}  // namespace

bool is_abstention(std::string_view text) { return trim(text) == kNotAnswerable; }

std::vector<PageRange> segment_document(std::size_t n_pages, std::size_t segment_len) {
    if (n_pages < 1) throw ValidationError("segment_document: n_pages must be >= 1");
    if (segment_len < 1) throw ValidationError("segment_document: segment_len must be >= 1");
    std::vector<PageRange> ranges;
    for (std::size_t first = 1; first <= n_pages; first += segment_len) {
        ranges.push_back({first, std::min(first + segment_len - 1, n_pages)});
    }
    return ranges;
}

TokenDistribution::TokenDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("distribution is empty");
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ValidationError("distribution has a negative or non-finite probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("distribution sums to " + std::to_string(sum) + ", expected 1");
    }
}

MockSlm MockSlm::with_default_vocab() {
    return MockSlm{{"Not", "Answerable"}, {}, {{1.0, 0.0}, {0.0, 1.0}}};
}

const ScriptEntry* MockSlm::lookup(const std::string& query,
                                   std::span<const std::int64_t> page_ids) const {
    for (const auto& entry : entries) {
        if (entry.query != query) continue;
        const bool covered = std::all_of(entry.pages.begin(), entry.pages.end(), [&](std::int64_t p) {
            return std::find(page_ids.begin(), page_ids.end(), p) != page_ids.end();
        });
        if (covered) return &entry;
    }
    return nullptr;
}

double token_entropy(std::span<const TokenDistribution> dists) {
    if (dists.empty()) {
        throw ValidationError("token_entropy: no token distributions, uncertainty undefined");
    }
    double total = 0.0;
    for (const auto& d : dists) {
        double h = 0.0;
        for (double p : d.probs()) {
            if (p > 0.0) h -= p * std::log(p);
        }
        total += h;
    }
    return std::max(0.0, total / static_cast<double>(dists.size()));
}

NtpLoss ntp_loss(std::span<const TokenDistribution> dists, std::span<const std::size_t> target_ids) {
    if (dists.size() != target_ids.size()) {
        throw ValidationError("ntp_loss: " + std::to_string(dists.size()) + " distributions vs " +
                              std::to_string(target_ids.size()) + " targets");
    }
    // Cost charged for a zero-probability target: -ln of the smallest normal double.
    const double zero_prob_cost = -std::log(std::numeric_limits<double>::min());
    NtpLoss loss;
    for (std::size_t k = 0; k < dists.size(); ++k) {
        if (target_ids[k] >= dists[k].size()) {
            throw ValidationError("ntp_loss: target id " + std::to_string(target_ids[k]) +
                                  " outside vocabulary of size " + std::to_string(dists[k].size()));
        }
        const double p = dists[k][target_ids[k]];
        if (p > 0.0) {
            loss.value -= std::log(p);
        } else {
            loss.value += zero_prob_cost;
            loss.overflow = true;
        }
    }
    loss.value = std::max(0.0, loss.value);
    return loss;
}

SegmentPrediction run_segment(const Segment& segment, const std::string& query, const MockSlm& slm) {
    if (segment.embeddings.empty() || segment.page_ids.empty()) {
        throw ValidationError("run_segment: segment " + std::to_string(segment.index) +
                              " has no page embeddings");
    }
    if (slm.vocab.empty()) throw ValidationError("run_segment: mock SLM vocabulary is empty");

    SegmentPrediction pred;
    pred.segment = segment.index;
    if (const ScriptEntry* hit = slm.lookup(query, segment.page_ids)) {
        pred.text = hit->answer;
        pred.token_dists = to_distributions(hit->token_dists, slm.vocab.size(),
                                            "script entry for query '" + query + "'");
    } else {
        pred.text = std::string(kNotAnswerable);
        if (slm.abstain_dists.empty()) {
            const std::size_t vocab = slm.vocab.size();
            for (std::string_view word : {"Not", "Answerable"}) {
                std::vector<double> one_hot(vocab, 0.0);
                one_hot[vocab_index(slm.vocab, word)] = 1.0;
                pred.token_dists.emplace_back(std::move(one_hot));
            }
        } else {
            pred.token_dists = to_distributions(slm.abstain_dists, slm.vocab.size(), "abstain_dists");
        }
    }
    if (pred.token_dists.empty()) {
        throw ValidationError("run_segment: prediction '" + pred.text + "' has no token distributions");
    }
    pred.uncertainty = token_entropy(pred.token_dists);
    pred.abstained = is_abstention(pred.text);
    return pred;
}

std::size_t ResidencyTrace::peak() const noexcept {
    return samples.empty() ? 0 : *std::max_element(samples.begin(), samples.end());
}

StreamResult stream_process(std::span<const Page> pages, const std::string& query,
                            const MockSlm& slm, const StreamConfig& cfg,
                            const Compressor& compressor) {
    if (pages.empty()) throw ValidationError("stream_process: document has no pages");
    const auto ranges = segment_document(pages.size(), cfg.segment_len);
    std::vector<SegmentPrediction> preds(ranges.size());
    ResidencyCounter residency;

    if (!cfg.parallel) {
        for (std::size_t t = 0; t < ranges.size(); ++t) {
            preds[t] = process_segment(pages, ranges[t], t, query, slm, compressor, residency);
        }
    } else {
        std::size_t workers = cfg.workers != 0 ? cfg.workers : std::thread::hardware_concurrency();
        workers = std::clamp<std::size_t>(workers, 1, ranges.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = next++; t < ranges.size(); t = next++) {
                        preds[t] = process_segment(pages, ranges[t], t, query, slm, compressor, residency);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    return StreamResult{std::move(preds), std::move(residency).take()};
}

}  // namespace docslm
