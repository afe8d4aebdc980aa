// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/cli.hpp"

#include <cstdarg>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "docslm/aggregate.hpp"
#include "docslm/anls.hpp"
#include "docslm/document.hpp"
#include "docslm/errors.hpp"
#include "docslm/memory_model.hpp"
#include "docslm/streaming.hpp"

namespace docslm {

namespace {

std::string strf(const char* format, ...) {
    va_list args;
    va_start(args, format);
    va_list copy;
    va_copy(copy, args);
    const int n = std::vsnprintf(nullptr, 0, format, copy);
    va_end(copy);
    std::string out(static_cast<std::size_t>(std::max(n, 0)), '\0');
    std::vsnprintf(out.data(), out.size() + 1, format, args);
    va_end(args);
    return out;
}

PipelineConfig pipeline_from(const std::string& config_path) {
    return config_path.empty() ? PipelineConfig{} : load_pipeline_config(config_path);
}

struct QaRun {
    StreamResult stream;
    AggregationResult result;
};

QaRun answer_query(const Document& doc, const std::string& query, const StreamConfig& scfg,
                   const Compressor& compressor) {
    const MockSlm slm = doc.slm();
    QaRun run{stream_process(doc.pages, query, slm, scfg, compressor), {}};
    run.result = select_answer(filter_valid(run.stream.predictions));
    return run;
}

int cmd_compress(const std::string& doc_path, const std::string& config_path, std::ostream& out) {
    const Document doc = load_document(doc_path);
    const PipelineConfig cfg = pipeline_from(config_path);
    const Compressor compressor(cfg.encoder, cfg.grid);

    out << "doc " << doc.doc_id << ": " << doc.pages.size() << " pages\n";
    out << "page_id,grid,ocr_tokens,kept_ocr,tokens\n";
    bool budget_ok = true;
    std::optional<std::size_t> first_count;
    bool constant = true;
    std::size_t total = 0;
    for (const auto& page : doc.pages) {
        const PageEmbedding emb = compressor.compress(page);
        const std::size_t kept = filter_ocr(page.ocr, cfg.grid.tau_conf).size();
        out << strf("%lld,%zux%zu,%zu,%zu,%zu\n", static_cast<long long>(page.page_id), emb.grid.rows,
                    emb.grid.cols, page.ocr.size(), kept, emb.token_count());
        budget_ok = budget_ok && emb.token_count() == cfg.encoder.page_budget(emb.grid);
        if (!first_count) first_count = emb.token_count();
        constant = constant && emb.token_count() == *first_count;
        total += emb.token_count();
    }
    const double mean = static_cast<double>(total) / static_cast<double>(doc.pages.size());
    out << "budget check: " << (budget_ok ? "ok" : "FAILED")
        << " (tokens = crops x " << cfg.encoder.global_tokens_per_region << " on every page)\n";
    out << "tokens/page: " << (constant ? "constant" : "varies with grid shape")
        << strf(" (mean %.4f)\n", mean);
    out << strf("reduction ratio vs %zu baseline tokens/page: %.4f\n", cfg.baseline_tokens_per_page,
                static_cast<double>(cfg.baseline_tokens_per_page) / mean);
    return budget_ok ? kExitOk : kExitInternal;
}

int cmd_stream_qa(const std::string& doc_path, const std::string& query, const std::string& config_path,
                  std::size_t segment_len, bool parallel, std::ostream& out) {
    const Document doc = load_document(doc_path);
    const PipelineConfig cfg = pipeline_from(config_path);
    const Compressor compressor(cfg.encoder, cfg.grid);
    const StreamConfig scfg{segment_len, parallel, 0};
    const QaRun run = answer_query(doc, query, scfg, compressor);

    const auto ranges = segment_document(doc.pages.size(), segment_len);
    out << "segment,pages,answer,uncertainty,abstained\n";
    for (const auto& p : run.stream.predictions) {
        const auto& r = ranges[p.segment];
        out << strf("%zu,%lld-%lld,", p.segment + 1, static_cast<long long>(doc.pages[r.first - 1].page_id),
                    static_cast<long long>(doc.pages[r.last - 1].page_id))
            << p.text << strf(",%.4f,%s\n", p.uncertainty, p.abstained ? "true" : "false");
    }
    out << "answer: " << run.result.answer << "\n";
    if (run.result.all_abstained) {
        out << "all segments abstained\n";
    } else {
        out << strf("uncertainty: %.4f\nsource segment: %zu\n", run.result.uncertainty,
                    *run.result.source_segment + 1);
    }
    std::size_t max_budget = 0;
    for (const auto& page : doc.pages) {
        max_budget = std::max(max_budget, compressor.budget_for(page.width_px, page.height_px));
    }
    out << strf("residency: %zu samples, peak %zu tokens, sequential bound %zu (%zu pages x %zu)\n",
                run.stream.trace.samples.size(), run.stream.trace.peak(), segment_len * max_budget,
                segment_len, max_budget);
    return kExitOk;
}

int cmd_assign_ocr(const std::string& doc_path, std::int64_t page_id, const std::string& config_path,
                   std::ostream& out) {
    const Document doc = load_document(doc_path);
    const PipelineConfig cfg = pipeline_from(config_path);
    const Page* page = doc.find_page(page_id);
    if (!page) throw ValidationError("page " + std::to_string(page_id) + " not found in " + doc.doc_id);
    const CropGrid grid = select_grid(page->width_px, page->height_px, cfg.grid);
    const auto kept = filter_ocr(page->ocr, cfg.grid.tau_conf);
    const auto crops = assign_ocr(kept, grid, cfg.grid);
    out << strf("page %lld: %zux%zu grid (%zux%zu px), mode %s, tau %.4f, %zu/%zu OCR tokens kept\n",
                static_cast<long long>(page_id), grid.rows, grid.cols, grid.target_w, grid.target_h,
                to_string(cfg.grid.overlap_mode).c_str(), cfg.grid.tau_overlap, kept.size(),
                page->ocr.size());
    for (std::size_t i = 0; i < grid.rows; ++i) {
        for (std::size_t j = 0; j < grid.cols; ++j) {
            const BBox b = crop_bbox(grid, i, j);
            const auto& toks = crops[i * grid.cols + j];
            out << strf("crop (%zu,%zu) [%.4f,%.4f,%.4f,%.4f] %zu tokens:", i, j, b.x0, b.y0, b.x1, b.y1,
                        toks.size());
            for (const auto& t : toks) out << ' ' << t.text;
            out << '\n';
        }
    }
    return kExitOk;
}

int cmd_mem_sweep(const std::string& spec_path, const std::vector<std::size_t>& pages,
                  const std::string& out_path, std::ostream& out) {
    const auto specs = load_sweep_spec(spec_path);
    const std::string csv = sweep_to_csv(mem_sweep(specs, pages));
    write_file_atomic(out_path, csv);
    out << csv;
    return kExitOk;
}

int cmd_eval(const std::string& doc_path, const std::string& config_path, std::size_t segment_len,
             bool parallel, std::ostream& out) {
    const Document doc = load_document(doc_path);
    if (doc.qa.empty()) throw ValidationError(doc_path + ": document has no qa entries");
    const PipelineConfig cfg = pipeline_from(config_path);
    const Compressor compressor(cfg.encoder, cfg.grid);
    const StreamConfig scfg{segment_len, parallel, 0};

    double total = 0.0;
    std::size_t abstained_segments = 0, segments = 0, unanswered = 0;
    out << "query,truth,answer,anls\n";
    for (const auto& qa : doc.qa) {
        const QaRun run = answer_query(doc, qa.query, scfg, compressor);
        const double score = anls(run.result.answer, qa.answer);
        total += score;
        for (const auto& p : run.stream.predictions) abstained_segments += p.abstained ? 1 : 0;
        segments += run.stream.predictions.size();
        unanswered += run.result.all_abstained ? 1 : 0;
        out << qa.query << ',' << qa.answer << ',' << run.result.answer << strf(",%.4f\n", score);
    }
    out << strf("mean ANLS: %.4f over %zu questions\n", total / static_cast<double>(doc.qa.size()),
                doc.qa.size());
    out << strf("abstentions: %zu/%zu segments, %zu/%zu questions fully abstained\n", abstained_segments,
                segments, unanswered, doc.qa.size());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fixed-budget page compression and streaming abstention toolkit", "docslm"};
    app.require_subcommand(1);

    std::string doc_path, config_path, query, spec_path, out_path;
    std::size_t segment_len = 10;
    bool parallel = false;
    std::int64_t page_id = 0;
    std::vector<std::size_t> pages;

    auto* compress = app.add_subcommand("compress", "Per-page token counts and budget check");
    compress->add_option("doc", doc_path, "Document JSON")->required()->check(CLI::ExistingFile);
    compress->add_option("--config", config_path, "Pipeline config JSON")->check(CLI::ExistingFile);

    auto* stream = app.add_subcommand("stream-qa", "Answer one query by streaming over segments");
    stream->add_option("doc", doc_path, "Document JSON")->required()->check(CLI::ExistingFile);
    stream->add_option("--query", query, "Question text")->required();
    stream->add_option("--segment-len", segment_len, "Pages per segment")->check(CLI::PositiveNumber);
    stream->add_flag("--parallel", parallel, "Run segments concurrently");
    stream->add_option("--config", config_path, "Pipeline config JSON")->check(CLI::ExistingFile);

    auto* assign = app.add_subcommand("assign-ocr", "Dump the per-crop OCR assignment of one page");
    assign->add_option("doc", doc_path, "Document JSON")->required()->check(CLI::ExistingFile);
    assign->add_option("--page", page_id, "Page id")->required();
    assign->add_option("--config", config_path, "Pipeline config JSON")->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("mem-sweep", "Peak-memory predictions by page count as CSV");
    sweep->add_option("--spec", spec_path, "Model spec JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--pages", pages, "Comma-separated page counts")->required()->delimiter(',');
    sweep->add_option("--out", out_path, "CSV output path")->required();

    auto* eval = app.add_subcommand("eval", "Run every qa entry and report mean ANLS");
    eval->add_option("doc", doc_path, "Document JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--segment-len", segment_len, "Pages per segment")->check(CLI::PositiveNumber);
    eval->add_flag("--parallel", parallel, "Run segments concurrently");
    eval->add_option("--config", config_path, "Pipeline config JSON")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*compress) return cmd_compress(doc_path, config_path, out);
        if (*stream) return cmd_stream_qa(doc_path, query, config_path, segment_len, parallel, out);
        if (*assign) return cmd_assign_ocr(doc_path, page_id, config_path, out);
        if (*sweep) return cmd_mem_sweep(spec_path, pages, out_path, out);
        if (*eval) return cmd_eval(doc_path, config_path, segment_len, parallel, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace docslm
