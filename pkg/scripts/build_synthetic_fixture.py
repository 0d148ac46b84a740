#!/usr/bin/env python3
"""Regenerate the hand-built 4-item fixture used by the test suite.

Every vector is chosen so the cosines are hand-checkable AND pairwise
distinct (min gap 0.01), so rank-based scores cannot flip on float noise:

    en1  c1 [2,1]/[1,2] -> 4/5 = 0.8      c2 [3,0]/[1,1] -> 1/sqrt(2)
    en2  c1 [3,4]/[3,4] -> 1 (exact)      c2 [2,1]/[3,1] -> 7/sqrt(50)
    en3  c1 [1,0]/[2,1] -> 2/sqrt(5)      c2 [1,0]/[0,1] -> 0
    en4  c1 [1,3]/[3,1] -> 6/10 = 0.6     c2 [1,0]/[1,3] -> 1/sqrt(10)

Model toy-a stores each vector twice (L=2, identical layers) and toy-b once
(L=1), so every layer scheme and pooling in the fixture sweep reproduces the
same hand-computed cosines: averaging/mixing identical layers is the
identity, and first-last pooling or stacking a duplicate model doubles the
vector, which cosine ignores.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ctxsim.embedstore import (
    EmbeddingStore,
    LayerStack,
    SubtokenEmbedding,
    TargetEmbeddingRecord,
    write_store,
)

DATASET = """\
id\tword1\tword2\tcontext1\tcontext2\tsim1\tsim2\tchange
en1\tcell\troom\tHer prison <strong>cell</strong> was almost an improvement over her <strong>room</strong> at the last hostel.\tHis job as a biologist didn't leave much <strong>room</strong> for a personal life. He knew much more about the human <strong>cell</strong> than about human feelings.\t8\t7\t-1
en2\tbutter\tcream\tShe poured the melted <strong>butter</strong> over the warm <strong>cream</strong> sauce.\tThe <strong>butter</strong> and the <strong>cream</strong> sat side by side on the counter.\t10\t9.4\t-0.6
en3\tbank\tshore\tThey rested on the river <strong>bank</strong> near the sandy <strong>shore</strong>.\tThe <strong>bank</strong> approved the loan while the <strong>shore</strong> was still dark.\t9.6\t0.5\t-9.1
en4\tpaper\tarticle\tThe <strong>paper</strong> published a long <strong>article</strong> about the election.\tA crumpled <strong>paper</strong> ball hit the <strong>article</strong> display case.\t6.1\t3.2\t-2.9
"""

# (item, context, word) -> hand-picked 2-d vector
VECTORS = {
    ("en1", 1, 1): [2.0, 1.0],
    ("en1", 1, 2): [1.0, 2.0],
    ("en1", 2, 1): [3.0, 0.0],
    ("en1", 2, 2): [1.0, 1.0],
    ("en2", 1, 1): [3.0, 4.0],
    ("en2", 1, 2): [3.0, 4.0],
    ("en2", 2, 1): [2.0, 1.0],
    ("en2", 2, 2): [3.0, 1.0],
    ("en3", 1, 1): [1.0, 0.0],
    ("en3", 1, 2): [2.0, 1.0],
    ("en3", 2, 1): [1.0, 0.0],
    ("en3", 2, 2): [0.0, 1.0],
    ("en4", 1, 1): [1.0, 3.0],
    ("en4", 1, 2): [3.0, 1.0],
    ("en4", 2, 1): [1.0, 0.0],
    ("en4", 2, 2): [1.0, 3.0],
}

WORDS = {
    ("en1", 1): "cell", ("en1", 2): "room",
    ("en2", 1): "butter", ("en2", 2): "cream",
    ("en3", 1): "bank", ("en3", 2): "shore",
    ("en4", 1): "paper", ("en4", 2): "article",
}

SWEEP = """\
{"label": "baseline", "config": "toy-a@last1@mean"}
{"label": "toy:a(k=2)", "config": "toy-a@avg:2@first"}
{"label": "toy:a(first-last,scalar-mix)", "config": "toy-a@mix@first-last"}
{"label": "toy:a+toy:b", "config": "toy-a@avg:2@first + toy-b@layer:-1@first"}
{"label": "toy:a(neg)", "config": "toy-a@avg:2@first", "negate_change": true}
{"label": "toy:a(per-context)", "config": "toy-a@avg:2@first", "per_context": true}
"""


def build_store() -> EmbeddingStore:
    store = EmbeddingStore()
    for (item_id, context_no, word_no), vec in VECTORS.items():
        word = WORDS[(item_id, word_no)]
        # en2 carries two sub-tokens per toy-a record to exercise pooling
        if item_id == "en2":
            pieces = [word[: len(word) // 2], word[len(word) // 2 :]]
        else:
            pieces = [word]
        store.add(
            TargetEmbeddingRecord(
                item_id, context_no, word_no, "toy-a",
                tuple(
                    SubtokenEmbedding(piece, LayerStack([vec, vec]))
                    for piece in pieces
                ),
            )
        )
        store.add(
            TargetEmbeddingRecord(
                item_id, context_no, word_no, "toy-b",
                (SubtokenEmbedding(word, LayerStack([vec])),),
            )
        )
    return store


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir",
        default=Path(__file__).resolve().parent.parent / "tests" / "data",
        type=Path,
    )
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "fixture_dataset.tsv").write_text(DATASET, encoding="utf-8")
    (args.out_dir / "fixture_store.jsonl").write_text(
        write_store(build_store()), encoding="utf-8"
    )
    (args.out_dir / "fixture_sweep.jsonl").write_text(SWEEP, encoding="utf-8")
    print(f"fixture written to {args.out_dir}")


if __name__ == "__main__":
    main()
