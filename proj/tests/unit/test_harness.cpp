// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "docslm/anls.hpp"
#include "docslm/document.hpp"
#include "docslm/errors.hpp"
#include "docslm/memory_model.hpp"
#include "oracles.hpp"

namespace docslm {
namespace {

using nlohmann::json;

json minimal_doc() {
    return json{{"doc_id", "mini"},
                {"pages",
                 json::array({json{{"page_id", 1},
                                   {"width_px", 800},
                                   {"height_px", 600},
                                   {"ocr", json::array({json{{"text", "Total"},
                                                             {"bbox", {0.1, 0.1, 0.3, 0.15}},
                                                             {"conf", 0.9}},
                                                        json{{"text", "X"},
                                                             {"bbox", {0.5, 0.5, 0.6, 0.55}},
                                                             {"conf", 0.4}}})}},
                              json{{"page_id", 2}, {"width_px", 800}, {"height_px", 600}, {"ocr", json::array()}}})},
                {"qa", json::array({json{{"query", "total?"}, {"answer", "42"}, {"evidence_pages", {1}}}})}};
}

std::string error_of(const json& doc) {
    try {
        parse_document(doc.dump());
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

TEST(LoadDocument, MinimalValid) {
    const auto doc = parse_document(minimal_doc().dump());
    EXPECT_EQ(doc.doc_id, "mini");
    ASSERT_EQ(doc.pages.size(), 2u);
    EXPECT_EQ(doc.pages[0].ocr.size(), 2u);
    EXPECT_EQ(doc.pages[0].ocr[1].text, "X");
    EXPECT_EQ(doc.qa[0].evidence_pages, (std::vector<std::int64_t>{1}));
    EXPECT_FALSE(doc.slm_script.has_value());
    EXPECT_EQ(doc.slm(), MockSlm::with_default_vocab());
    EXPECT_NE(doc.find_page(2), nullptr);
    EXPECT_EQ(doc.find_page(3), nullptr);
}

TEST(LoadDocument, InvertedBoxNamesPathAndToken) {
    auto doc = minimal_doc();
    doc["pages"][0]["ocr"][1]["bbox"] = {0.6, 0.5, 0.5, 0.55};
    const auto msg = error_of(doc);
    EXPECT_NE(msg.find("pages[0].ocr[1].bbox"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'X'"), std::string::npos) << msg;
}

TEST(LoadDocument, RejectsBadInputs) {
    auto dup = minimal_doc();
    dup["pages"][1]["page_id"] = 1;
    EXPECT_NE(error_of(dup).find("duplicate page_id"), std::string::npos);

    auto out_of_range = minimal_doc();
    out_of_range["pages"][0]["ocr"][0]["bbox"] = {0.1, 0.1, 1.2, 0.15};
    EXPECT_NE(error_of(out_of_range).find("pages[0].ocr[0].bbox"), std::string::npos);

    auto conf = minimal_doc();
    conf["pages"][0]["ocr"][0]["conf"] = 1.5;
    EXPECT_NE(error_of(conf).find("conf"), std::string::npos);

    auto evidence = minimal_doc();
    evidence["qa"][0]["evidence_pages"] = {9};
    EXPECT_NE(error_of(evidence).find("qa[0]"), std::string::npos);

    auto missing = minimal_doc();
    missing["pages"][1].erase("width_px");
    EXPECT_NE(error_of(missing).find("pages[1].width_px"), std::string::npos);

    EXPECT_FALSE(error_of(json::array()).empty());
    EXPECT_THROW(parse_document("{not json"), ValidationError);
    EXPECT_THROW(load_document("/nonexistent/doc.json"), ValidationError);
}

TEST(LoadDocument, RejectsScriptDistributionOfWrongLength) {
    auto doc = minimal_doc();
    doc["slm_script"] = json{{"vocab", {"Not", "Answerable", "42"}},
                             {"abstain_dists", json::array()},
                             {"entries", json::array({json{{"query", "total?"},
                                                           {"pages", {1}},
                                                           {"answer", "42"},
                                                           {"token_dists", {{0.5, 0.5}}}}})}};
    EXPECT_NE(error_of(doc).find("token_dists"), std::string::npos);
}

TEST(LoadDocument, RoundTripsThroughSerializer) {
    for (const char* name : {"short_invoice", "fig3_three_segments"}) {
        const auto doc = load_document(std::filesystem::path(DOCSLM_DATA_DIR) / "corpus" / (std::string(name) + ".json"));
        EXPECT_EQ(parse_document(serialize_document(doc)), doc) << name;
    }
}

TEST(PipelineConfig, BundledConfigsLoad) {
    const auto desk = load_pipeline_config(std::filesystem::path(DOCSLM_DATA_DIR) / "configs" / "desk.json");
    EXPECT_EQ(desk.encoder.global_tokens_per_region, 16u);
    const auto paper = load_pipeline_config(std::filesystem::path(DOCSLM_DATA_DIR) / "configs" / "paper_scale.json");
    const Compressor c(paper.encoder, paper.grid);
    EXPECT_EQ(c.budget_for(1700, 2200), 576u);
    EXPECT_EQ(paper.baseline_tokens_per_page, 3210u);
}

TEST(PredictVram, Examples) {
    const MemoryModelParams p{2, 2, 0.5, 1};
    EXPECT_DOUBLE_EQ(predict_vram(p, 2.0), 6.0);
    EXPECT_DOUBLE_EQ(predict_vram(p, 0.0), 5.0);
    EXPECT_THROW(predict_vram(MemoryModelParams{-1, 2, 0.5, 1}, 1.0), ValidationError);
}

TEST(PredictVram, AffineInTokens) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const MemoryModelParams p{u(rng), u(rng), u(rng), u(rng)};
        const double a = u(rng), b = u(rng);
        EXPECT_NEAR(predict_vram(p, a + b) - predict_vram(p, a), predict_vram(p, b) - predict_vram(p, 0), 1e-9);
    }
}

TEST(FitTwoPoint, PassesThroughBothPoints) {
    const auto p = fit_two_point(2, 1, 1.152, 5.2, 5.76, 14.2);
    EXPECT_NEAR(predict_vram(p, 1.152), 5.2, 1e-12);
    EXPECT_NEAR(predict_vram(p, 5.76), 14.2, 1e-12);
    EXPECT_NEAR(p.gb_per_k_tokens, 1.953125, 1e-12);
    EXPECT_THROW(fit_two_point(2, 1, 1.0, 5.0, 1.0, 6.0), ValidationError);
    EXPECT_THROW(fit_two_point(2, 1, 1.0, 1.0, 2.0, 10.0), ValidationError);  // negative overhead
}

std::vector<ModelSpec> bundled_spec() {
    return load_sweep_spec(std::filesystem::path(DOCSLM_DATA_DIR) / "specs" / "peak_memory.json");
}

TEST(MemSweep, StreamingPlateausDenseGrows) {
    const auto models = bundled_spec();
    const std::vector<std::size_t> pages{2, 10, 15, 20, 120};
    const auto rows = mem_sweep(models, pages);
    ASSERT_EQ(rows.size(), 10u);
    EXPECT_NEAR(rows[0].predicted_gb, 5.2, 1e-9);
    EXPECT_NEAR(rows[1].predicted_gb, 14.2, 1e-9);
    for (std::size_t i = 2; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(rows[i].predicted_gb, rows[1].predicted_gb);
        EXPECT_LE(std::abs(rows[i].predicted_gb - 14.2) / 14.2, 0.05);
    }
    for (std::size_t i = 6; i < 10; ++i) EXPECT_GT(rows[i].predicted_gb, rows[i - 1].predicted_gb);
    EXPECT_NEAR(rows[5].predicted_gb, 9.2, 1e-9);
    EXPECT_NEAR(rows[6].predicted_gb, 27.9, 1e-9);
}

TEST(MemSweep, CsvIsByteStable) {
    const std::vector<ModelSpec> models{{"m", MemoryModelParams{2, 2, 0.4, 1}, 500, true, 4}};
    const auto csv = sweep_to_csv(mem_sweep(models, {1, 4, 9}));
    EXPECT_EQ(csv,
              "label,pages,k_tokens,predicted_gb\n"
              "m,1,0.5000,5.2\n"
              "m,4,2.0000,5.8\n"
              "m,9,2.0000,5.8\n");
}

TEST(SweepSpec, RejectsBadLabelsAndAmbiguousParams) {
    EXPECT_THROW(parse_sweep_spec(R"({"models":[{"label":"a,b","tokens_per_page":1,"streaming":false,
        "params":{"P_B":1,"b":1,"g":1,"O":1}}]})"),
                 ValidationError);
    EXPECT_THROW(parse_sweep_spec(R"({"models":[{"label":"a","tokens_per_page":1,"streaming":false}]})"),
                 ValidationError);
    EXPECT_THROW(parse_sweep_spec(R"({"models":[]})"), ValidationError);
}

TEST(WriteFileAtomic, ReplacesContents) {
    const auto path = std::filesystem::temp_directory_path() / "docslm_atomic_test.csv";
    write_file_atomic(path, "one");
    write_file_atomic(path, "two");
    EXPECT_EQ(read_text_file(path), "two");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
}

TEST(Anls, Examples) {
    EXPECT_DOUBLE_EQ(anls("Berlin", "Berlin"), 1.0);
    EXPECT_DOUBLE_EQ(anls("  BERLIN ", "berlin"), 1.0);
    EXPECT_DOUBLE_EQ(anls("abc", "xyz"), 0.0);
    EXPECT_DOUBLE_EQ(anls("berlin", "berlin school"), 0.0);  // 1 - 7/13 < 0.5
    EXPECT_NEAR(anls("berlin", "berlin school", 0.0), 6.0 / 13.0, 1e-12);
    EXPECT_NEAR(anls("4,100", "4,200"), 0.8, 1e-12);
    EXPECT_DOUBLE_EQ(anls("", ""), 1.0);
    EXPECT_DOUBLE_EQ(anls("", "x"), 0.0);
}

TEST(Anls, CountsCodePointsNotBytes) {
    EXPECT_EQ(edit_distance("Köln", "Koln"), 1u);
    EXPECT_EQ(edit_distance("日本", "日本語"), 1u);
}

TEST(Anls, AgreesWithDpOracleAndIsSymmetric) {
    std::mt19937_64 rng(42);
    const std::string alphabet = "abcde ";
    for (int trial = 0; trial < 200; ++trial) {
        std::string a, b;
        for (std::size_t n = rng() % 12; n > 0; --n) a += alphabet[rng() % alphabet.size()];
        for (std::size_t n = rng() % 12; n > 0; --n) b += alphabet[rng() % alphabet.size()];
        ASSERT_EQ(edit_distance(a, b), oracle::dp_edit_distance(a, b)) << a << "|" << b;
        const auto na = normalize_answer(a), nb = normalize_answer(b);
        const double len = static_cast<double>(std::max(na.size(), nb.size()));
        const double nls = len == 0 ? 1.0 : 1.0 - static_cast<double>(oracle::dp_edit_distance(na, nb)) / len;
        ASSERT_NEAR(anls(a, b), nls < 0.5 ? 0.0 : nls, 1e-12);
        ASSERT_DOUBLE_EQ(anls(a, b), anls(b, a));
        ASSERT_GE(anls(a, b), 0.0);
        ASSERT_LE(anls(a, b), 1.0);
    }
}

}  // namespace
}  // namespace docslm
