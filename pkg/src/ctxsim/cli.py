"""Command line interface.

Subcommands: ``validate``, ``predict``, ``evaluate``, ``sweep``.
Exit status: 0 success, 1 validation failure, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

from .combine import parse_config
from .corpus import LANGUAGES, Dataset, parse_dataset
from .embedstore import EmbeddingStore, merge_stores, read_store
from .errors import (
    ConfigError,
    CoverageError,
    CtxsimError,
    DatasetFormatError,
    NotFoundError,
    StoreFormatError,
    ValidationError,
)
from .harness import (
    RunOptions,
    SweepSpec,
    emit_answers,
    parse_sweep_file,
    render_table,
    report_to_jsonl,
    run_sweep,
    single_config_spec,
    validate_run,
)

_VALIDATION_ERRORS = (
    DatasetFormatError,
    StoreFormatError,
    ConfigError,
    CoverageError,
    ValidationError,
    NotFoundError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxsim",
        description="Predict and score the graded effect of context on word similarity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--dataset", required=True, help="dataset file (canonical TSV)")
    shared.add_argument("--language", choices=LANGUAGES, default="en")
    shared.add_argument(
        "--embeddings",
        action="append",
        default=[],
        metavar="PATH",
        help="embedding store file; repeatable, files are merged",
    )
    shared.add_argument("--config", help="combination config (mini-language)")
    shared.add_argument("--sweep-file", help="sweep entries, one JSON object per line")
    shared.add_argument("--subtask", type=int, choices=(1, 2))
    shared.add_argument("--negate-change", action="store_true")
    shared.add_argument("--per-context", action="store_true")
    shared.add_argument("--rescale", metavar="A,B", help="affine rescale a*x+b, a>0")
    shared.add_argument("--out", help="output path (default: stdout)")
    shared.add_argument(
        "--stamp",
        action="store_true",
        help="record the wall-clock time in the report (breaks byte determinism)",
    )

    sub.add_parser("validate", parents=[shared], help="check dataset, stores and coverage")
    sub.add_parser("predict", parents=[shared], help="write an answer file for one config")
    sub.add_parser("evaluate", parents=[shared], help="score one config against gold")
    sub.add_parser("sweep", parents=[shared], help="run a sweep and write its report")
    return parser


def _cli_options(args) -> RunOptions:
    rescale = None
    if args.rescale:
        pieces = args.rescale.split(",")
        if len(pieces) != 2:
            raise ConfigError(f"--rescale expects A,B, got {args.rescale!r}")
        try:
            rescale = (float(pieces[0]), float(pieces[1]))
        except ValueError:
            raise ConfigError(f"--rescale expects numbers, got {args.rescale!r}") from None
    return RunOptions(
        negate_change=args.negate_change,
        rescale=rescale,
        per_context=args.per_context,
    )


def _load_dataset(args) -> Dataset:
    return parse_dataset(Path(args.dataset).read_text(encoding="utf-8"), args.language)


def _load_store(args) -> EmbeddingStore:
    stores = [
        read_store(Path(path).read_text(encoding="utf-8")) for path in args.embeddings
    ]
    if not stores:
        return EmbeddingStore()
    return merge_stores(stores)


def _load_spec(args, require: bool = True) -> SweepSpec | None:
    if args.config and args.sweep_file:
        raise ConfigError("pass either --config or --sweep-file, not both")
    if args.sweep_file:
        return parse_sweep_file(Path(args.sweep_file).read_text(encoding="utf-8"))
    if args.config:
        return single_config_spec(parse_config(args.config), options=_cli_options(args))
    if require:
        raise ConfigError("a --config or --sweep-file is required")
    return None


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _timestamp(args) -> str | None:
    if args.stamp:
        return datetime.now(timezone.utc).isoformat()
    return None


def _cmd_validate(args) -> int:
    ds = _load_dataset(args)
    store = _load_store(args)
    spec = _load_spec(args, require=False)
    diagnostics = validate_run(ds, store, spec)
    for diag in diagnostics:
        print(diag)
    if diagnostics:
        print(f"{len(diagnostics)} problem(s) found", file=sys.stderr)
        return 1
    print(f"OK: {len(ds.items)} item(s), {len(store)} record(s)")
    return 0


def _cmd_predict(args) -> int:
    if not args.config:
        raise ConfigError("predict needs a single --config")
    if args.subtask is None:
        raise ConfigError("predict needs --subtask 1 or 2")
    ds = _load_dataset(args)
    store = _load_store(args)
    spec = _load_spec(args)
    report = run_sweep(ds, store, spec, timestamp=_timestamp(args))
    result = report.results[0]
    if result.error is not None:
        raise CtxsimError(result.error)
    _write(args, emit_answers(report, args.subtask, result.label))
    return 0


def _cmd_evaluate(args) -> int:
    if not args.config:
        raise ConfigError("evaluate needs a single --config")
    ds = _load_dataset(args)
    if not ds.has_gold:
        raise ValidationError("evaluate needs a dataset with gold scores")
    store = _load_store(args)
    spec = _load_spec(args)
    report = run_sweep(ds, store, spec, timestamp=_timestamp(args))
    result = report.results[0]
    if result.error is not None:
        raise CtxsimError(result.error)
    sys.stdout.write(render_table(report, args.subtask))
    if args.out:
        Path(args.out).write_text(report_to_jsonl(report), encoding="utf-8")
    return 0


def _cmd_sweep(args) -> int:
    ds = _load_dataset(args)
    store = _load_store(args)
    spec = _load_spec(args)
    report = run_sweep(ds, store, spec, timestamp=_timestamp(args))
    sys.stdout.write(render_table(report, args.subtask))
    for result in report.results:
        if result.error is not None:
            print(f"config {result.label!r} failed: {result.error}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(report_to_jsonl(report), encoding="utf-8")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CtxsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
