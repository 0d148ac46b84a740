"""Sweep orchestration: run configurations, score them, emit files.

Reports serialize as line-delimited JSON (one meta line, then per config a
header line followed by its prediction lines) and render as aligned score
tables on stdout. Stored predictions are always raw cosines; per-entry
options (negation, affine rescale) apply at scoring and answer-emission
time so the same report stays interpretable either way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from . import __version__
from .combine import CombinationConfig, config_to_spec, parse_config, scheme_applicable
from .corpus import Dataset, Diagnostic, validate_dataset
from .embedstore import EmbeddingStore, RecordKey
from .errors import ConfigError, CoverageError, CtxsimError, NotFoundError
from .metrics import ScoreReport, score_all
from .similarity import ItemPrediction, predict_item


@dataclass(frozen=True)
class RunOptions:
    """Per-config scoring/emission options.

    ``negate_change`` flips the sign convention of emitted/scored changes.
    ``rescale`` is an affine map (a, b), a > 0, applied to the emitted value
    (the change for subtask 1, the sims for subtask 2) after any negation.
    """

    negate_change: bool = False
    rescale: tuple[float, float] | None = None
    per_context: bool = False

    def __post_init__(self):
        if self.rescale is not None:
            a, b = self.rescale
            object.__setattr__(self, "rescale", (float(a), float(b)))
            if not a > 0:
                raise ConfigError(f"rescale needs a positive scale, got {a}")

    def change_transform(self) -> Callable[[float], float]:
        sign = -1.0 if self.negate_change else 1.0
        a, b = self.rescale if self.rescale is not None else (1.0, 0.0)
        return lambda x: a * (sign * x) + b

    def sim_transform(self) -> Callable[[float], float]:
        a, b = self.rescale if self.rescale is not None else (1.0, 0.0)
        return lambda x: a * x + b


@dataclass(frozen=True)
class SweepEntry:
    label: str
    config: CombinationConfig
    options: RunOptions = field(default_factory=RunOptions)


@dataclass(frozen=True)
class SweepSpec:
    entries: tuple[SweepEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ConfigError("sweep needs at least one entry")
        seen = set()
        for entry in self.entries:
            if not entry.label:
                raise ConfigError("sweep labels must be non-empty")
            if entry.label in seen:
                raise ConfigError(f"duplicate sweep label {entry.label!r}")
            seen.add(entry.label)


@dataclass(frozen=True)
class ConfigResult:
    label: str
    config: CombinationConfig
    options: RunOptions
    predictions: tuple[ItemPrediction, ...] = ()
    scores: ScoreReport | None = None
    error: str | None = None


@dataclass(frozen=True)
class EvaluationReport:
    language: str
    version: str
    timestamp: str | None
    results: tuple[ConfigResult, ...]

    def result(self, label: str) -> ConfigResult:
        for res in self.results:
            if res.label == label:
                return res
        raise NotFoundError(f"no config labeled {label!r} in report")


def required_keys(ds: Dataset, spec: SweepSpec) -> list[RecordKey]:
    """Every store key any sweep entry will look up, deduplicated, sorted."""
    keys = {
        RecordKey(item.id, context_no, word_no, model_id)
        for entry in spec.entries
        for model_id in entry.config.models()
        for item in ds.items
        for context_no in (1, 2)
        for word_no in (1, 2)
    }
    return sorted(keys)


def coverage_gaps(ds: Dataset, store: EmbeddingStore, spec: SweepSpec) -> list[RecordKey]:
    return [key for key in required_keys(ds, spec) if key not in store]


def run_sweep(
    ds: Dataset,
    store: EmbeddingStore,
    spec: SweepSpec,
    timestamp: str | None = None,
) -> EvaluationReport:
    """Predict and score every sweep entry.

    Missing embedding records fail fast for the whole sweep (no partial
    tables); errors inside one entry mark that entry failed and leave the
    others untouched.
    """
    gaps = coverage_gaps(ds, store, spec)
    if gaps:
        raise CoverageError(gaps)

    golds = {item.id: item.gold for item in ds.items if item.gold is not None}
    results = []
    for entry in spec.entries:
        predictions: list[ItemPrediction] = []
        error = None
        scores = None
        try:
            for item in ds.items:
                try:
                    predictions.append(predict_item(item, store, entry.config))
                except CtxsimError as exc:
                    raise CtxsimError(f"item {item.id!r}: {exc}") from exc
            if ds.has_gold:
                scores = score_all(
                    predictions,
                    golds,
                    per_context=entry.options.per_context,
                    change_transform=entry.options.change_transform(),
                    sim_transform=entry.options.sim_transform(),
                )
        except CtxsimError as exc:
            error = str(exc)
            predictions = []
        results.append(
            ConfigResult(
                label=entry.label,
                config=entry.config,
                options=entry.options,
                predictions=tuple(predictions),
                scores=scores,
                error=error,
            )
        )
    return EvaluationReport(
        language=ds.language,
        version=__version__,
        timestamp=timestamp,
        results=tuple(results),
    )


def validate_run(
    ds: Dataset,
    store: EmbeddingStore,
    spec: SweepSpec | None = None,
    score_range: tuple[float, float] = (0.0, 10.0),
) -> list[Diagnostic]:
    """Aggregate dataset, store-shape, scheme-range and coverage diagnostics.

    Empty output means :func:`run_sweep` preconditions hold.
    """
    out = list(validate_dataset(ds, score_range))
    for record in store:
        if record.signature != store.signature(record.model_id):
            out.append(
                Diagnostic(
                    record.item_id,
                    f"store{record.key}",
                    f"shape {record.signature} deviates from model signature "
                    f"{store.signature(record.model_id)}",
                )
            )
    if spec is None:
        return out
    for entry in spec.entries:
        for part in entry.config.parts:
            try:
                n_layers, _ = store.signature(part.model_id)
            except NotFoundError:
                continue  # no records at all: the coverage pass below names them
            reason = scheme_applicable(part.scheme, n_layers)
            if reason is not None:
                out.append(
                    Diagnostic(entry.label, f"config part {part.model_id!r}", reason)
                )
    for key in coverage_gaps(ds, store, spec):
        out.append(
            Diagnostic(key.item_id, f"embedding{key}", "record missing from store")
        )
    return out


def _format_value(x: float) -> str:
    return repr(float(x))


def emit_answers(report: EvaluationReport, subtask: int, label: str) -> str:
    """Answer lines in dataset order: `id\\tchange` or `id\\tsim1\\tsim2`.

    The entry's own options (negation, rescale) are applied, so the emitted
    values are exactly the scored ones.
    """
    if subtask not in (1, 2):
        raise ValueError(f"subtask must be 1 or 2, got {subtask}")
    res = report.result(label)
    if res.error is not None:
        raise CtxsimError(f"config {label!r} failed: {res.error}")
    lines = []
    if subtask == 1:
        f = res.options.change_transform()
        for pred in res.predictions:
            lines.append(f"{pred.item_id}\t{_format_value(f(pred.change))}")
    else:
        f = res.options.sim_transform()
        for pred in res.predictions:
            lines.append(
                f"{pred.item_id}\t{_format_value(f(pred.sim1))}\t{_format_value(f(pred.sim2))}"
            )
    return "".join(line + "\n" for line in lines)


def _options_obj(options: RunOptions) -> dict:
    return {
        "negate_change": options.negate_change,
        "per_context": options.per_context,
        "rescale": list(options.rescale) if options.rescale else None,
    }


def report_to_jsonl(report: EvaluationReport) -> str:
    """Line-delimited report: meta line, then per config a header + predictions."""
    lines = [
        json.dumps(
            {
                "kind": "meta",
                "language": report.language,
                "version": report.version,
                "timestamp": report.timestamp,
            },
            ensure_ascii=False,
            separators=(",", ":"),
        )
    ]
    for res in report.results:
        scores = None
        if res.scores is not None:
            scores = {
                "subtask1_uncentered_pearson": res.scores.subtask1_uncentered_pearson,
                "subtask2_pearson": res.scores.subtask2_pearson,
                "subtask2_spearman": res.scores.subtask2_spearman,
                "subtask2_harmonic": res.scores.subtask2_harmonic,
                "n_items": res.scores.n_items,
            }
        lines.append(
            json.dumps(
                {
                    "kind": "config",
                    "label": res.label,
                    "config": config_to_spec(res.config),
                    "options": _options_obj(res.options),
                    "scores": scores,
                    "error": res.error,
                },
                ensure_ascii=False,
                separators=(",", ":"),
            )
        )
        for pred in res.predictions:
            lines.append(
                json.dumps(
                    {
                        "kind": "prediction",
                        "label": res.label,
                        "item_id": pred.item_id,
                        "sim1": pred.sim1,
                        "sim2": pred.sim2,
                        "change": pred.change,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
            )
    return "".join(line + "\n" for line in lines)


def render_table(report: EvaluationReport, subtask: int | None = None) -> str:
    """Aligned per-subtask score tables, one row per config label."""
    width = max([len("Model")] + [len(r.label) for r in report.results]) + 2
    blocks = []
    if subtask in (None, 1):
        rows = [f"Subtask 1 ({report.language}): change, uncentered Pearson"]
        rows.append(f"  {'Model'.ljust(width)}Score")
        for res in report.results:
            if res.error is not None:
                cell = "failed"
            elif res.scores is None:
                cell = "-"
            else:
                cell = f"{res.scores.subtask1_uncentered_pearson:.3f}"
            rows.append(f"  {res.label.ljust(width)}{cell}")
        blocks.append("\n".join(rows))
    if subtask in (None, 2):
        rows = [f"Subtask 2 ({report.language}): ratings, harmonic of Pearson and Spearman"]
        rows.append(f"  {'Model'.ljust(width)}{'Score':<9}{'Pearson':<9}Spearman")
        for res in report.results:
            if res.error is not None:
                cells = "failed"
            elif res.scores is None:
                cells = "-"
            else:
                cells = (
                    f"{res.scores.subtask2_harmonic:<9.3f}"
                    f"{res.scores.subtask2_pearson:<9.3f}"
                    f"{res.scores.subtask2_spearman:.3f}"
                )
            rows.append(f"  {res.label.ljust(width)}{cells}")
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks) + "\n"


_SWEEP_KEYS = {"label", "config", "negate_change", "per_context", "rescale"}


def parse_sweep_file(content: str) -> SweepSpec:
    """Sweep file: one JSON object per line with `label` and `config` fields.

    Optional fields: `negate_change`, `per_context` (booleans) and `rescale`
    ([a, b], a > 0).
    """
    entries = []
    for line_no, line in enumerate(content.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"sweep file line {line_no}: invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise ConfigError(f"sweep file line {line_no}: expected an object")
        unknown = set(obj) - _SWEEP_KEYS
        if unknown:
            raise ConfigError(
                f"sweep file line {line_no}: unknown field(s) {sorted(unknown)}"
            )
        try:
            label = obj["label"]
            config_spec = obj["config"]
        except KeyError as exc:
            raise ConfigError(
                f"sweep file line {line_no}: missing field {exc.args[0]!r}"
            ) from None
        if not isinstance(label, str) or not isinstance(config_spec, str):
            raise ConfigError(f"sweep file line {line_no}: label and config must be strings")
        rescale = obj.get("rescale")
        if rescale is not None:
            if not isinstance(rescale, list) or len(rescale) != 2:
                raise ConfigError(f"sweep file line {line_no}: rescale must be [a, b]")
            rescale = (float(rescale[0]), float(rescale[1]))
        options = RunOptions(
            negate_change=bool(obj.get("negate_change", False)),
            rescale=rescale,
            per_context=bool(obj.get("per_context", False)),
        )
        entries.append(SweepEntry(label, parse_config(config_spec), options))
    return SweepSpec(tuple(entries))


def single_config_spec(
    config: CombinationConfig,
    label: str | None = None,
    options: RunOptions | None = None,
) -> SweepSpec:
    """One-entry sweep; the label defaults to the config's spec string."""
    return SweepSpec(
        (SweepEntry(label or config_to_spec(config), config, options or RunOptions()),)
    )
