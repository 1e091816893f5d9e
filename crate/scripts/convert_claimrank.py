#!/usr/bin/env python3
"""Convert the upstream claim-rank debate transcripts to claimrank JSON Lines.

Each input is one debate as a tab-separated file with a header row. Columns
are found by name (case-insensitive, aliases below); the nine source columns
hold 0/1 and any aggregate column such as ALL is ignored, since ANY is always
derived. The debate id defaults to the file stem.

    python3 scripts/convert_claimrank.py data/raw/*.tsv -o data/cwuspd.jsonl

Debates are written in the order given on the command line, so pass them in
chronological order.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

SOURCES = ["CT", "ABC", "CNN", "WP", "NPR", "PF", "TG", "NYT", "FC"]

ALIASES = {
    "index": ["index", "i", "id", "line", "sentence_id"],
    "speaker": ["speaker", "spk"],
    "text": ["text", "sentence"],
    "CT": ["ct", "chicago tribune", "chicagotribune"],
    "ABC": ["abc"],
    "CNN": ["cnn"],
    "WP": ["wp", "washington post", "washingtonpost", "wapo"],
    "NPR": ["npr"],
    "PF": ["pf", "politifact"],
    "TG": ["tg", "the guardian", "guardian"],
    "NYT": ["nyt", "new york times", "nytimes"],
    "FC": ["fc", "factcheck", "factcheck.org"],
}


def find_columns(header, path):
    norm = [h.strip().lower() for h in header]
    cols = {}
    for key, names in ALIASES.items():
        hits = [i for i, h in enumerate(norm) if h in names]
        if not hits and key != "index":
            sys.exit(f"{path}: no column for {key} (header: {header})")
        if hits:
            cols[key] = hits[0]
    return cols


def convert(path, debate_id):
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE))
    if not rows:
        sys.exit(f"{path}: empty file")
    cols = find_columns(rows[0], path)
    out = []
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        text = row[cols["text"]].strip()
        if not text:
            sys.exit(f"{path}:{line}: empty text")
        labels = {}
        for src in SOURCES:
            raw = row[cols[src]].strip()
            if raw not in ("0", "1"):
                sys.exit(f"{path}:{line}: label {src}={raw!r} is not 0 or 1")
            labels[src] = int(raw)
        out.append({
            "debate_id": debate_id,
            "index": len(out),
            "speaker": row[cols["speaker"]].strip(),
            "text": text,
            "labels": labels,
        })
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("inputs", nargs="+", type=Path)
    ap.add_argument("-o", "--output", type=Path, required=True)
    ap.add_argument("--ids", help="comma-separated debate ids, one per input")
    args = ap.parse_args()
    ids = args.ids.split(",") if args.ids else [p.stem for p in args.inputs]
    if len(ids) != len(args.inputs):
        sys.exit("--ids must name every input")
    total = 0
    with open(args.output, "w", encoding="utf-8") as f:
        for path, debate_id in zip(args.inputs, ids):
            for rec in convert(path, debate_id):
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
                total += 1
    print(f"{len(ids)} debates, {total} sentences -> {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
