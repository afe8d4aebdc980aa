#!/usr/bin/env python3
# Copyright 2026 The docslm-lite Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the bundled synthetic corpus under data/corpus/.

Every document carries OCR tokens with normalized boxes, qa pairs and a mock
SLM script. Output is deterministic for a given seed.
"""

import argparse
import json
import pathlib
import random

FILLER = (
    "the of and to in for is on that by this with from at as are be was quarterly revenue "
    "report total page section table figure notes summary office staff project budget "
    "meeting review market sales growth annual department schedule contract policy"
).split()

PORTRAIT = (1700, 2200)
LANDSCAPE = (2200, 1700)


def make_page(rng, page_id, size, extra_words=()):
    width, height = size
    tokens = []
    y = 0.05
    line_h = 0.025
    words = list(extra_words)
    n_filler = rng.randint(12, 40)
    words += [rng.choice(FILLER) for _ in range(n_filler)]
    x = 0.06
    for word in words:
        w = min(0.02 + 0.012 * len(word), 0.3)
        if x + w > 0.94:
            x = 0.06
            y += line_h + 0.01
        if y + line_h > 0.97:
            break
        tokens.append({
            "text": word,
            "bbox": [round(x, 4), round(y, 4), round(x + w, 4), round(y + line_h, 4)],
            "conf": round(rng.uniform(0.4, 1.0), 2),
        })
        x += w + 0.01
    return {"page_id": page_id, "width_px": width, "height_px": height, "ocr": tokens}


def peaked(vocab, word, confidence):
    """Distribution with `confidence` on `word` and the rest spread evenly."""
    n = len(vocab)
    rest = (1.0 - confidence) / (n - 1)
    return [confidence if v == word else rest for v in vocab]


def answer_dists(vocab, answer, confidence):
    return [peaked(vocab, w, confidence) for w in answer.split()]


def build_vocab(answers):
    vocab = ["Not", "Answerable"]
    for a in answers:
        for w in a.split():
            if w not in vocab:
                vocab.append(w)
    return vocab + ["<unk>", "the", "of"]


def document(doc_id, pages, qa, entries, answers):
    vocab = build_vocab(answers)
    script_entries = [
        {
            "query": q,
            "pages": p,
            "answer": a,
            "token_dists": answer_dists(vocab, a, c),
        }
        for (q, p, a, c) in entries
    ]
    return {
        "doc_id": doc_id,
        "pages": pages,
        "qa": qa,
        "slm_script": {
            "vocab": vocab,
            "abstain_dists": [peaked(vocab, "Not", 0.9), peaked(vocab, "Answerable", 0.9)],
            "entries": script_entries,
        },
    }


def fig3_document(rng):
    # Segment 1 answers correctly with low uncertainty, segment 2 abstains,
    # segment 3 answers wrongly with high uncertainty.
    pages = []
    for pid in range(1, 31):
        extra = ("head", "office", "Berlin") if pid == 4 else ("branch", "Munich") if pid == 25 else ()
        pages.append(make_page(rng, pid, PORTRAIT, extra))
    q1 = "Which city hosts the head office?"
    q2 = "What is the fax number?"
    qa = [
        {"query": q1, "answer": "Berlin", "evidence_pages": [4]},
        {"query": q2, "answer": "Not Answerable", "evidence_pages": []},
    ]
    entries = [(q1, [4], "Berlin", 0.95), (q1, [25], "Munich", 0.55)]
    return document("fig3_three_segments", pages, qa, entries, ["Berlin", "Munich"])


def evidence_segment2_document(rng):
    pages = []
    for pid in range(1, 21):
        extra = ("invoice", "total", "$1,284.50") if pid == 14 else ()
        pages.append(make_page(rng, pid, PORTRAIT, extra))
    q = "What is the invoice total?"
    qa = [{"query": q, "answer": "$1,284.50", "evidence_pages": [14]}]
    entries = [(q, [14], "$1,284.50", 0.9)]
    return document("evidence_segment2", pages, qa, entries, ["$1,284.50"])


def short_invoice_document(rng):
    pages = [make_page(rng, pid, PORTRAIT, ("due", "date", "March", "3") if pid == 2 else ())
             for pid in range(1, 4)]
    q = "When is the payment due?"
    qa = [{"query": q, "answer": "March 3", "evidence_pages": [2]}]
    entries = [(q, [2], "March 3", 0.85)]
    return document("short_invoice", pages, qa, entries, ["March 3"])


def annual_report_document(rng):
    pages = []
    for pid in range(1, 121):
        size = LANDSCAPE if pid % 17 == 0 else PORTRAIT
        extra = ()
        if pid == 87:
            extra = ("chief", "executive", "Maria", "Keller")
        elif pid == 33:
            extra = ("founded", "Berlin", "school")
        pages.append(make_page(rng, pid, size, extra))
    q1 = "Who is the chief executive?"
    q2 = "Where was the company founded?"
    q3 = "How many employees are there?"
    qa = [
        {"query": q1, "answer": "Maria Keller", "evidence_pages": [87]},
        {"query": q2, "answer": "Berlin", "evidence_pages": [33]},
        {"query": q3, "answer": "4,200", "evidence_pages": [61]},
    ]
    entries = [
        (q1, [87], "Maria Keller", 0.92),
        (q1, [12], "Keller", 0.5),
        (q2, [33], "Berlin school", 0.8),
        (q3, [61], "4,100", 0.7),
    ]
    return document("annual_report_120", pages, qa, entries,
                    ["Maria Keller", "Berlin school", "4,100"])


def newsletter_document(rng):
    pages = []
    for pid in range(1, 46):
        size = LANDSCAPE if pid % 3 == 0 else PORTRAIT
        extra = ("editor", "Jonas", "Weber") if pid == 7 else ()
        pages.append(make_page(rng, pid, size, extra))
    q1 = "Who edits the newsletter?"
    q2 = "What is the subscription price?"
    qa = [
        {"query": q1, "answer": "Jonas Weber", "evidence_pages": [7]},
        {"query": q2, "answer": "Not Answerable", "evidence_pages": []},
    ]
    entries = [(q1, [7], "Jonas Weber", 0.88), (q1, [38], "Weber", 0.6)]
    return document("newsletter_45", pages, qa, entries, ["Jonas Weber"])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus",
                        type=pathlib.Path)
    parser.add_argument("--seed", type=int, default=20240611)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    builders = [fig3_document, evidence_segment2_document, short_invoice_document,
                annual_report_document, newsletter_document]
    for build in builders:
        doc = build(rng)
        path = args.out / f"{doc['doc_id']}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(doc['pages'])} pages)")


if __name__ == "__main__":
    main()
