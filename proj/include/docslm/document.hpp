// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docslm/compressor.hpp"
#include "docslm/memory_model.hpp"
#include "docslm/streaming.hpp"

namespace docslm {

struct QaItem {
    std::string query;
    std::string answer;
    std::vector<std::int64_t> evidence_pages;

    friend bool operator==(const QaItem&, const QaItem&) = default;
};

/// Parsed and validated document file.
struct Document {
    std::string doc_id;
    std::vector<Page> pages;
    std::vector<QaItem> qa;
    std::optional<MockSlm> slm_script;

    /// The scripted SLM, or the default abstain-only model.
    MockSlm slm() const { return slm_script.value_or(MockSlm::with_default_vocab()); }

    const Page* find_page(std::int64_t page_id) const;

    friend bool operator==(const Document&, const Document&) = default;
};

/// Parses UTF-8 JSON text. Errors carry the offending location inside the
/// file, e.g. `pages[3].ocr[7].bbox: x0 must be < x1`.
Document parse_document(std::string_view json_text);
Document load_document(const std::filesystem::path& path);

/// Serializes back to the file schema; parse_document(serialize_document(d)) == d.
std::string serialize_document(const Document& doc);

/// Options for `compress`: encoder and grid configuration plus the baseline
/// tokens/page used for the reduction ratio.
struct PipelineConfig {
    EncoderConfig encoder;
    GridConfig grid;
    std::size_t baseline_tokens_per_page = 3210;
};

PipelineConfig parse_pipeline_config(std::string_view json_text);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Model list for `mem-sweep`. Each model gives explicit coefficients under
/// "params" or a two-point "fit" against (pages, gb) observations.
std::vector<ModelSpec> parse_sweep_spec(std::string_view json_text);
std::vector<ModelSpec> load_sweep_spec(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace docslm
