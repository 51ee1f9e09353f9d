#!/usr/bin/env python3
# Copyright 2026 The Denotation Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts a question dialogue dump into the layout the tools read.

The original dump's schema is not fixed here. The converter expects one JSON
object per line and takes the field names as flags, so it can be pointed at
whatever export is available:

    {"id": "...", "question": "...", "answer": "...", "denotation": "m.0abc",
     "split": "train"}

Only records that carry a single gold entity are kept. Output, in --out:

    train.tsv, val.tsv, test.tsv   id<TAB>question<TAB>answer_hint<TAB>gold
    kb_triples.tsv, kb_lexicon.tsv copied from --kb-triples / --kb-lexicon

Point QDD_DIR at --out to enable the reproduction check of the acceptance
binary.
"""

import argparse
import json
import pathlib
import shutil
import sys

SPLITS = ("train", "val", "test")


def clean(text):
    return " ".join(str(text).split())


def convert(args):
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = {split: [] for split in SPLITS}
    skipped = 0
    with open(args.records, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                sys.exit(f"{args.records}:{line_no}: {e}")
            gold = record.get(args.denotation_field)
            if isinstance(gold, list):
                gold = gold[0] if len(gold) == 1 else None
            split = args.split_aliases.get(record.get(args.split_field), None)
            fields = [clean(record.get(args.id_field, line_no)),
                      clean(record.get(args.question_field, "")),
                      clean(record.get(args.answer_field, "")),
                      clean(gold or "")]
            if split is None or not all(fields):
                skipped += 1
                continue
            rows[split].append("\t".join(fields))
    for split in SPLITS:
        (out / f"{split}.tsv").write_text("".join(r + "\n" for r in rows[split]),
                                          encoding="utf-8")
    for src, name in ((args.kb_triples, "kb_triples.tsv"), (args.kb_lexicon, "kb_lexicon.tsv")):
        if src:
            shutil.copyfile(src, out / name)
    counts = " ".join(f"{s}={len(rows[s])}" for s in SPLITS)
    print(f"{counts} skipped={skipped}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--records", required=True, help="JSON lines dump")
    p.add_argument("--out", required=True)
    p.add_argument("--kb-triples")
    p.add_argument("--kb-lexicon")
    p.add_argument("--id-field", default="id")
    p.add_argument("--question-field", default="question")
    p.add_argument("--answer-field", default="answer")
    p.add_argument("--denotation-field", default="denotation")
    p.add_argument("--split-field", default="split")
    p.add_argument("--split-alias", action="append", default=[],
                   metavar="RAW=SPLIT", help="map a raw split name, e.g. dev=val")
    args = p.parse_args()
    args.split_aliases = {s: s for s in SPLITS}
    for alias in args.split_alias:
        raw, _, split = alias.partition("=")
        if split not in SPLITS:
            p.error(f"unknown split in --split-alias {alias!r}")
        args.split_aliases[raw] = split
    convert(args)


if __name__ == "__main__":
    main()
