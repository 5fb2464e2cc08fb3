#!/usr/bin/env python3
"""Generate the bundled synthetic corpora as files.

Writes, under the output directory (default ./toy_data):

* pairs.tsv / ann.conll     — 1,000 templated parallel sentences with
                              source-side PoS/NE/NP annotations
* bijective_pairs.tsv       — 500 sentences under a bijective dictionary
* bijective_gold.tsv        — their gold alignments (id<TAB>i-j i-j ...)
* passages.jsonl            — 20 QA passages (10 facts + 10 distractors)
* questions.jsonl           — 10 factoid questions with gold answers
"""

from __future__ import annotations

import argparse
from pathlib import Path

from cmforge.synth import (
    bijective_corpus,
    planted_qa_corpus,
    toy_parallel_corpus,
    write_annotations_conll,
    write_jsonl,
    write_parallel_tsv,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="toy_data", help="output directory")
    parser.add_argument("--pairs", type=int, default=1000, help="templated pair count")
    parser.add_argument("--seed", type=int, default=11, help="generation seed")
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    pairs, annotations = toy_parallel_corpus(n_pairs=args.pairs, seed=args.seed)
    write_parallel_tsv(pairs, out / "pairs.tsv")
    write_annotations_conll(annotations, out / "ann.conll")

    bij_pairs, gold, _ = bijective_corpus(seed=args.seed)
    write_parallel_tsv(bij_pairs, out / "bijective_pairs.tsv")
    gold_lines = [
        pair.id + "\t" + " ".join(f"{i}-{j}" for i, j in sorted(gold[pair.id]))
        for pair in bij_pairs
    ]
    (out / "bijective_gold.tsv").write_text("\n".join(gold_lines) + "\n", encoding="utf-8")

    passages, questions = planted_qa_corpus(seed=args.seed)
    write_jsonl(passages, out / "passages.jsonl")
    write_jsonl(questions, out / "questions.jsonl")

    print(f"wrote {args.pairs} pairs, 500 bijective pairs, "
          f"{len(passages)} passages, {len(questions)} questions to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
