// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "docslm/aggregate.hpp"
#include "docslm/anls.hpp"
#include "docslm/compressor.hpp"
#include "docslm/document.hpp"
#include "docslm/errors.hpp"
#include "docslm/geometry.hpp"
#include "docslm/memory_model.hpp"
#include "docslm/streaming.hpp"

namespace py = pybind11;
using namespace docslm;

namespace {

std::vector<std::vector<double>> matrix_rows(const FeatureMatrix& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

std::vector<TokenDistribution> to_dists(const std::vector<std::vector<double>>& raw) {
    return {raw.begin(), raw.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fixed-budget page compression, streaming abstention and evaluation helpers";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

    m.attr("NOT_ANSWERABLE") = std::string(kNotAnswerable);

    py::enum_<OverlapMode>(m, "OverlapMode")
        .value("IOU", OverlapMode::kIou)
        .value("INTERSECTION", OverlapMode::kIntersection)
        .value("TOKEN_COVERAGE", OverlapMode::kTokenCoverage);

    py::class_<BBox>(m, "BBox")
        .def(py::init(&BBox::make), py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"))
        .def_readonly("x0", &BBox::x0)
        .def_readonly("y0", &BBox::y0)
        .def_readonly("x1", &BBox::x1)
        .def_readonly("y1", &BBox::y1)
        .def("area", &BBox::area)
        .def("__repr__", [](const BBox& b) {
            return "BBox(" + std::to_string(b.x0) + ", " + std::to_string(b.y0) + ", " +
                   std::to_string(b.x1) + ", " + std::to_string(b.y1) + ")";
        });

    py::class_<OcrToken>(m, "OcrToken")
        .def(py::init([](std::string text, BBox bbox, double conf) {
                 return OcrToken{std::move(text), bbox, conf};
             }),
             py::arg("text"), py::arg("bbox"), py::arg("conf") = 1.0)
        .def_readonly("text", &OcrToken::text)
        .def_readonly("bbox", &OcrToken::bbox)
        .def_readonly("conf", &OcrToken::conf);

    py::class_<GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("crop_px", &GridConfig::crop_px)
        .def_readwrite("min_crops", &GridConfig::min_crops)
        .def_readwrite("max_crops", &GridConfig::max_crops)
        .def_readwrite("overlap_mode", &GridConfig::overlap_mode)
        .def_readwrite("tau_overlap", &GridConfig::tau_overlap)
        .def_readwrite("tau_conf", &GridConfig::tau_conf);

    py::class_<CropGrid>(m, "CropGrid")
        .def_readonly("rows", &CropGrid::rows)
        .def_readonly("cols", &CropGrid::cols)
        .def_readonly("crop_px", &CropGrid::crop_px)
        .def_readonly("target_w", &CropGrid::target_w)
        .def_readonly("target_h", &CropGrid::target_h);

    m.def("select_grid", &select_grid, py::arg("width_px"), py::arg("height_px"),
          py::arg("cfg") = GridConfig{});
    m.def("crop_bbox", &crop_bbox, py::arg("grid"), py::arg("i"), py::arg("j"));
    m.def("overlap", &overlap, py::arg("b1"), py::arg("b2"), py::arg("mode") = OverlapMode::kIntersection);
    m.def("filter_ocr", &filter_ocr, py::arg("tokens"), py::arg("tau_conf"));
    m.def("assign_ocr", &assign_ocr, py::arg("tokens"), py::arg("grid"), py::arg("cfg") = GridConfig{},
          "Per-crop token lists in row-major order");

    py::class_<EncoderConfig>(m, "EncoderConfig")
        .def(py::init<>())
        .def_readwrite("d_model", &EncoderConfig::d_model)
        .def_readwrite("patches_per_crop", &EncoderConfig::patches_per_crop)
        .def_readwrite("global_tokens_per_region", &EncoderConfig::global_tokens_per_region)
        .def_readwrite("seed", &EncoderConfig::seed);

    py::class_<Page>(m, "Page")
        .def(py::init([](std::int64_t page_id, std::size_t w, std::size_t h, std::vector<OcrToken> ocr) {
                 return Page{page_id, w, h, std::move(ocr)};
             }),
             py::arg("page_id"), py::arg("width_px"), py::arg("height_px"),
             py::arg("ocr") = std::vector<OcrToken>{})
        .def_readonly("page_id", &Page::page_id)
        .def_readonly("width_px", &Page::width_px)
        .def_readonly("height_px", &Page::height_px)
        .def_readonly("ocr", &Page::ocr);

    py::class_<PageEmbedding>(m, "PageEmbedding")
        .def_readonly("page_id", &PageEmbedding::page_id)
        .def_readonly("grid", &PageEmbedding::grid)
        .def_property_readonly("token_count", &PageEmbedding::token_count)
        .def("tokens", [](const PageEmbedding& e) { return matrix_rows(e.tokens); },
             "Embedding rows as nested lists");

    py::class_<Compressor>(m, "Compressor")
        .def(py::init<EncoderConfig, GridConfig>(), py::arg("encoder") = EncoderConfig{},
             py::arg("grid") = GridConfig{})
        .def("compress", &Compressor::compress, py::arg("page"))
        .def("budget_for", &Compressor::budget_for, py::arg("width_px"), py::arg("height_px"));

    m.def("token_reduction_ratio", &token_reduction_ratio, py::arg("baseline_tokens_per_page"),
          py::arg("compressed_tokens_per_page"));

    m.def("segment_document",
          [](std::size_t n, std::size_t len) {
              std::vector<std::pair<std::size_t, std::size_t>> out;
              for (const auto& r : segment_document(n, len)) out.emplace_back(r.first, r.last);
              return out;
          },
          py::arg("n_pages"), py::arg("segment_len"), "1-based inclusive (first, last) ranges");
    m.def("token_entropy", [](const std::vector<std::vector<double>>& d) { return token_entropy(to_dists(d)); },
          py::arg("dists"));
    m.def("ntp_loss",
          [](const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& targets) {
              const NtpLoss l = ntp_loss(to_dists(d), targets);
              return py::make_tuple(l.value, l.overflow);
          },
          py::arg("dists"), py::arg("target_ids"), "Returns (loss, overflow)");

    py::class_<SegmentPrediction>(m, "SegmentPrediction")
        .def(py::init([](std::size_t segment, std::string text, double u) {
                 return SegmentPrediction{segment, text, {}, u, is_abstention(text)};
             }),
             py::arg("segment"), py::arg("text"), py::arg("uncertainty"))
        .def_readonly("segment", &SegmentPrediction::segment)
        .def_readonly("text", &SegmentPrediction::text)
        .def_readonly("uncertainty", &SegmentPrediction::uncertainty)
        .def_readonly("abstained", &SegmentPrediction::abstained);

    py::class_<AggregationResult>(m, "AggregationResult")
        .def_readonly("answer", &AggregationResult::answer)
        .def_readonly("uncertainty", &AggregationResult::uncertainty)
        .def_readonly("source_segment", &AggregationResult::source_segment)
        .def_readonly("all_abstained", &AggregationResult::all_abstained);

    m.def("filter_valid", [](const std::vector<SegmentPrediction>& p) { return filter_valid(p); });
    m.def("select_answer", [](const std::vector<SegmentPrediction>& p) { return select_answer(p); });

    py::class_<MemoryModelParams>(m, "MemoryModelParams")
        .def(py::init([](double p_b, double b, double g, double o) {
                 MemoryModelParams p{p_b, b, g, o};
                 p.validate();
                 return p;
             }),
             py::arg("P_B"), py::arg("b"), py::arg("g"), py::arg("O"))
        .def_readonly("P_B", &MemoryModelParams::params_billion)
        .def_readonly("b", &MemoryModelParams::bytes_per_param)
        .def_readonly("g", &MemoryModelParams::gb_per_k_tokens)
        .def_readonly("O", &MemoryModelParams::overhead_gb);
    m.def("predict_vram", &predict_vram, py::arg("params"), py::arg("k_tokens"));
    m.def("fit_two_point", &fit_two_point, py::arg("P_B"), py::arg("b"), py::arg("k1"), py::arg("gb1"),
          py::arg("k2"), py::arg("gb2"));
    m.def("mem_sweep_csv",
          [](const std::string& spec_json, const std::vector<std::size_t>& pages) {
              return sweep_to_csv(mem_sweep(parse_sweep_spec(spec_json), pages));
          },
          py::arg("spec_json"), py::arg("pages"));

    m.def("anls", &anls, py::arg("prediction"), py::arg("truth"), py::arg("threshold") = 0.5);
    m.def("edit_distance", &edit_distance, py::arg("a"), py::arg("b"));

    m.def("stream_qa",
          [](const std::string& doc_path, const std::string& query, std::size_t segment_len, bool parallel) {
              const Document doc = load_document(doc_path);
              const Compressor compressor(EncoderConfig{}, GridConfig{});
              StreamResult run;
              {
                  py::gil_scoped_release release;
                  run = stream_process(doc.pages, query, doc.slm(), StreamConfig{segment_len, parallel, 0},
                                       compressor);
              }
              py::dict out;
              out["predictions"] = run.predictions;
              out["result"] = select_answer(filter_valid(run.predictions));
              out["peak_resident_tokens"] = run.trace.peak();
              return out;
          },
          py::arg("doc_path"), py::arg("query"), py::arg("segment_len") = 10, py::arg("parallel") = false);
}
