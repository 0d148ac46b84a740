"""Command line entry point: dump embeddings for a dataset."""

from __future__ import annotations

import argparse
import sys

from .errors import ExtractorError
from .extract import ExtractionJob, extract


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ctxsim-extract",
        description="Extract layer-wise target-word embeddings into the interchange format.",
    )
    parser.add_argument("--dataset", required=True, help="dataset file (canonical TSV)")
    parser.add_argument("--model", required=True, help="checkpoint name or local path")
    parser.add_argument("--out", required=True, help="output record file")
    parser.add_argument("--ner", action="store_true", help="replace named entities first")
    parser.add_argument("--language", default="en", help="dataset language (NER gate)")
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args(argv)

    job = ExtractionJob(
        dataset=args.dataset,
        model=args.model,
        out=args.out,
        ner_enabled=args.ner,
        language=args.language,
        device=args.device,
    )
    try:
        result = extract(job)
    except ExtractorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for note in result.skipped_entities:
        print(f"note: {note}", file=sys.stderr)
    for problem in result.errors:
        print(f"alignment error: {problem}", file=sys.stderr)
    print(
        f"{result.n_records} record(s) written to {args.out} "
        f"(L={result.n_layers}, d={result.hidden_size})"
    )
    return 1 if result.errors else 0


if __name__ == "__main__":
    sys.exit(main())
