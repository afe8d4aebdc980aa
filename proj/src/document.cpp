// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/document.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "docslm/errors.hpp"

namespace docslm {

namespace {

using nlohmann::json;

// A JSON value plus its location in the file, for error messages.
class Node {
public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw ValidationError((path_.empty() ? std::string("<root>") : path_) + ": " + why);
    }

    Node field(const char* name) const {
        if (!value_.is_object()) fail("expected an object");
        const auto it = value_.find(name);
        if (it == value_.end()) Node(value_, child_path(name)).fail("missing required field");
        return Node(*it, child_path(name));
    }

    std::optional<Node> optional_field(const char* name) const {
        if (!value_.is_object()) fail("expected an object");
        const auto it = value_.find(name);
        if (it == value_.end() || it->is_null()) return std::nullopt;
        return Node(*it, child_path(name));
    }

    std::size_t size() const {
        if (!value_.is_array()) fail("expected an array");
        return value_.size();
    }

    Node at(std::size_t i) const { return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    std::string str() const {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }

    double number() const {
        if (!value_.is_number()) fail("expected a number");
        const double v = value_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::int64_t integer() const {
        if (!value_.is_number_integer()) fail("expected an integer");
        return value_.get<std::int64_t>();
    }

    std::size_t count() const {
        const std::int64_t v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    bool boolean() const {
        if (!value_.is_boolean()) fail("expected a boolean");
        return value_.get<bool>();
    }

    std::vector<double> numbers() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
        return out;
    }

    std::vector<std::int64_t> integers() const {
        std::vector<std::int64_t> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).integer();
        return out;
    }

private:
    std::string child_path(const char* name) const {
        return path_.empty() ? std::string(name) : path_ + "." + name;
    }

    const json& value_;
    std::string path_;
};

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

OcrToken parse_ocr_token(const Node& n) {
    OcrToken tok{n.field("text").str(), {}, n.field("conf").number()};
    if (tok.text.empty()) n.field("text").fail("OCR text must be non-empty");
    if (tok.conf < 0.0 || tok.conf > 1.0) n.field("conf").fail("conf must be in [0,1]");
    const Node box = n.field("bbox");
    const auto c = box.numbers();
    if (c.size() != 4) box.fail("bbox needs exactly 4 numbers [x0,y0,x1,y1]");
    if (auto why = bbox_problem(c[0], c[1], c[2], c[3]); !why.empty()) {
        box.fail(why + " (token '" + tok.text + "')");
    }
    tok.bbox = BBox{c[0], c[1], c[2], c[3]};
    return tok;
}

std::vector<std::vector<double>> parse_dists(const Node& n) {
    std::vector<std::vector<double>> out(n.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = n.at(i).numbers();
    return out;
}

MockSlm parse_slm(const Node& n) {
    MockSlm slm;
    const Node vocab = n.field("vocab");
    for (std::size_t i = 0; i < vocab.size(); ++i) slm.vocab.push_back(vocab.at(i).str());
    if (slm.vocab.empty()) vocab.fail("vocab must be non-empty");
    if (auto ad = n.optional_field("abstain_dists")) slm.abstain_dists = parse_dists(*ad);
    if (auto entries = n.optional_field("entries")) {
        for (std::size_t i = 0; i < entries->size(); ++i) {
            const Node e = entries->at(i);
            ScriptEntry entry{e.field("query").str(), e.field("pages").integers(),
                              e.field("answer").str(), parse_dists(e.field("token_dists"))};
            if (entry.token_dists.empty()) e.field("token_dists").fail("needs at least one distribution");
            for (std::size_t k = 0; k < entry.token_dists.size(); ++k) {
                if (entry.token_dists[k].size() != slm.vocab.size()) {
                    e.field("token_dists").at(k).fail("length must equal vocab size " +
                                                      std::to_string(slm.vocab.size()));
                }
            }
            slm.entries.push_back(std::move(entry));
        }
    }
    return slm;
}

json dists_to_json(const std::vector<std::vector<double>>& dists) {
    json arr = json::array();
    for (const auto& d : dists) arr.push_back(d);
    return arr;
}

EncoderConfig parse_encoder(const Node& n, EncoderConfig cfg) {
    if (auto v = n.optional_field("d_model")) cfg.d_model = v->count();
    if (auto v = n.optional_field("patches_per_crop")) cfg.patches_per_crop = v->count();
    if (auto v = n.optional_field("global_tokens_per_region")) cfg.global_tokens_per_region = v->count();
    if (auto v = n.optional_field("seed")) cfg.seed = static_cast<std::uint64_t>(v->count());
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        n.fail(e.what());
    }
    return cfg;
}

GridConfig parse_grid(const Node& n, GridConfig cfg) {
    if (auto v = n.optional_field("crop_px")) cfg.crop_px = v->count();
    if (auto v = n.optional_field("min_crops")) cfg.min_crops = v->count();
    if (auto v = n.optional_field("max_crops")) cfg.max_crops = v->count();
    if (auto v = n.optional_field("overlap_mode")) {
        try {
            cfg.overlap_mode = parse_overlap_mode(v->str());
        } catch (const ValidationError& e) {
            v->fail(e.what());
        }
    }
    if (auto v = n.optional_field("tau_overlap")) cfg.tau_overlap = v->number();
    if (auto v = n.optional_field("tau_conf")) cfg.tau_conf = v->number();
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        n.fail(e.what());
    }
    return cfg;
}

}  // namespace

const Page* Document::find_page(std::int64_t page_id) const {
    const auto it = std::find_if(pages.begin(), pages.end(),
                                 [page_id](const Page& p) { return p.page_id == page_id; });
    return it == pages.end() ? nullptr : &*it;
}

Document parse_document(std::string_view json_text) {
    const json root_json = parse_json(json_text);
    const Node root(root_json, "");
    Document doc;
    doc.doc_id = root.field("doc_id").str();

    const Node pages = root.field("pages");
    if (pages.size() == 0) pages.fail("document needs at least one page");
    for (std::size_t i = 0; i < pages.size(); ++i) {
        const Node pn = pages.at(i);
        Page page;
        page.page_id = pn.field("page_id").integer();
        if (!doc.pages.empty() && page.page_id <= doc.pages.back().page_id) {
            pn.field("page_id").fail(doc.find_page(page.page_id) ? "duplicate page_id " + std::to_string(page.page_id)
                                                                 : "page_ids must be in increasing order");
        }
        page.width_px = pn.field("width_px").count();
        page.height_px = pn.field("height_px").count();
        if (page.width_px < 1) pn.field("width_px").fail("must be >= 1");
        if (page.height_px < 1) pn.field("height_px").fail("must be >= 1");
        if (auto ocr = pn.optional_field("ocr")) {
            for (std::size_t k = 0; k < ocr->size(); ++k) page.ocr.push_back(parse_ocr_token(ocr->at(k)));
        }
        doc.pages.push_back(std::move(page));
    }

    if (auto qa = root.optional_field("qa")) {
        for (std::size_t i = 0; i < qa->size(); ++i) {
            const Node qn = qa->at(i);
            QaItem item{qn.field("query").str(), qn.field("answer").str(), {}};
            if (auto ev = qn.optional_field("evidence_pages")) {
                item.evidence_pages = ev->integers();
                for (std::size_t k = 0; k < item.evidence_pages.size(); ++k) {
                    if (!doc.find_page(item.evidence_pages[k])) {
                        ev->at(k).fail("evidence page " + std::to_string(item.evidence_pages[k]) +
                                       " is not a page of this document");
                    }
                }
            }
            doc.qa.push_back(std::move(item));
        }
    }

    if (auto script = root.optional_field("slm_script")) doc.slm_script = parse_slm(*script);
    return doc;
}

Document load_document(const std::filesystem::path& path) {
    try {
        return parse_document(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize_document(const Document& doc) {
    json root;
    root["doc_id"] = doc.doc_id;
    json pages = json::array();
    for (const auto& p : doc.pages) {
        json ocr = json::array();
        for (const auto& t : p.ocr) {
            ocr.push_back({{"text", t.text},
                           {"bbox", {t.bbox.x0, t.bbox.y0, t.bbox.x1, t.bbox.y1}},
                           {"conf", t.conf}});
        }
        pages.push_back({{"page_id", p.page_id},
                         {"width_px", p.width_px},
                         {"height_px", p.height_px},
                         {"ocr", std::move(ocr)}});
    }
    root["pages"] = std::move(pages);
    json qa = json::array();
    for (const auto& q : doc.qa) {
        qa.push_back({{"query", q.query}, {"answer", q.answer}, {"evidence_pages", q.evidence_pages}});
    }
    root["qa"] = std::move(qa);
    if (doc.slm_script) {
        const MockSlm& slm = *doc.slm_script;
        json entries = json::array();
        for (const auto& e : slm.entries) {
            entries.push_back({{"query", e.query},
                               {"pages", e.pages},
                               {"answer", e.answer},
                               {"token_dists", dists_to_json(e.token_dists)}});
        }
        json script{{"vocab", slm.vocab}, {"entries", std::move(entries)}};
        if (!slm.abstain_dists.empty()) script["abstain_dists"] = dists_to_json(slm.abstain_dists);
        root["slm_script"] = std::move(script);
    }
    // max_digits10 output keeps doubles bit-exact across a round trip.
    return root.dump(2) + "\n";
}

PipelineConfig parse_pipeline_config(std::string_view json_text) {
    const json root_json = parse_json(json_text);
    const Node root(root_json, "");
    PipelineConfig cfg;
    if (auto enc = root.optional_field("encoder")) cfg.encoder = parse_encoder(*enc, cfg.encoder);
    if (auto grid = root.optional_field("grid")) cfg.grid = parse_grid(*grid, cfg.grid);
    if (auto base = root.optional_field("baseline_tokens_per_page")) {
        cfg.baseline_tokens_per_page = base->count();
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    try {
        return parse_pipeline_config(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<ModelSpec> parse_sweep_spec(std::string_view json_text) {
    const json root_json = parse_json(json_text);
    const Node models = Node(root_json, "").field("models");
    if (models.size() == 0) models.fail("needs at least one model");
    std::vector<ModelSpec> specs;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const Node m = models.at(i);
        ModelSpec spec;
        spec.label = m.field("label").str();
        if (spec.label.empty() || spec.label.find_first_of(",\"\n") != std::string::npos) {
            m.field("label").fail("label must be non-empty and free of commas, quotes and newlines");
        }
        spec.tokens_per_page = m.field("tokens_per_page").count();
        if (auto s = m.optional_field("streaming")) spec.streaming = s->boolean();
        if (auto s = m.optional_field("segment_len")) spec.segment_len = s->count();
        if (spec.streaming && spec.segment_len < 1) m.field("segment_len").fail("must be >= 1");

        const auto params = m.optional_field("params");
        const auto fit = m.optional_field("fit");
        if (params.has_value() == fit.has_value()) m.fail("give exactly one of 'params' or 'fit'");
        if (params) {
            spec.params = MemoryModelParams{params->field("P_B").number(), params->field("b").number(),
                                            params->field("g").number(), params->field("O").number()};
            try {
                spec.params.validate();
            } catch (const ValidationError& e) {
                params->fail(e.what());
            }
        } else {
            const Node pts = fit->field("points");
            if (pts.size() != 2) pts.fail("two-point fit needs exactly 2 points");
            const Node p0 = pts.at(0), p1 = pts.at(1);
            const double k0 = spec.k_tokens(p0.field("pages").count());
            const double k1 = spec.k_tokens(p1.field("pages").count());
            const double gb0 = p0.field("gb").number(), gb1 = p1.field("gb").number();
            const double p_b = fit->field("P_B").number(), b = fit->field("b").number();
            try {
                spec.params = fit_two_point(p_b, b, k0, gb0, k1, gb1);
            } catch (const ValidationError& e) {
                fit->fail(e.what());
            }
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<ModelSpec> load_sweep_spec(const std::filesystem::path& path) {
    try {
        return parse_sweep_spec(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw ValidationError("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ValidationError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

}  // namespace docslm
