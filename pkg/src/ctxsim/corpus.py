"""Dataset model: word pairs judged in two sentence contexts.

The canonical file format is UTF-8, LF-terminated, tab-separated with header
``id\tword1\tword2\tcontext1\tcontext2`` plus optional ``sim1\tsim2\tchange``
gold columns (all present or all absent per file). Inside each context the
chosen occurrence of each target word is wrapped in ``<strong>...</strong>``;
parsing strips the markers and records character spans over the stripped
text. All offsets count Unicode scalar values of NFC-normalized text.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import (
    AmbiguityError,
    DatasetFormatError,
    SurfaceMismatchError,
    ValidationError,
)

LANGUAGES = ("en", "hr", "sl", "fi")

_MARK_OPEN = "<strong>"
_MARK_CLOSE = "</strong>"
_BASE_COLUMNS = ("id", "word1", "word2", "context1", "context2")
_GOLD_COLUMNS = ("sim1", "sim2", "change")

#: |gold.change - (gold.sim2 - gold.sim1)| above this is a diagnostic.
GOLD_CHANGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TargetSpan:
    """Character span of one target-word occurrence within a context."""

    start: int
    end: int
    surface: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValidationError(f"invalid span bounds [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValidationError(
                f"surface {self.surface!r} does not fit span [{self.start}, {self.end})"
            )

    def matches(self, context: str) -> bool:
        return (
            self.end <= len(context)
            and context[self.start : self.end] == self.surface
        )

    def shifted(self, delta: int) -> "TargetSpan":
        return TargetSpan(self.start + delta, self.end + delta, self.surface)

    def overlaps(self, other: "TargetSpan") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class GoldScores:
    """Mean human ratings: one per context plus their signed change.

    The convention throughout is ``change == sim2 - sim1``; consistency is
    checked by :func:`validate_dataset`, not at construction.
    """

    sim1: float
    sim2: float
    change: float


@dataclass(frozen=True)
class DatasetItem:
    """One evaluation unit: a word pair, two contexts, four target spans."""

    id: str
    word1: str
    word2: str
    context1: str
    context2: str
    span_w1_c1: TargetSpan
    span_w2_c1: TargetSpan
    span_w1_c2: TargetSpan
    span_w2_c2: TargetSpan
    gold: GoldScores | None = None

    def spans(self) -> dict[tuple[int, int], TargetSpan]:
        """Spans keyed by (context_no, word_no)."""
        return {
            (1, 1): self.span_w1_c1,
            (1, 2): self.span_w2_c1,
            (2, 1): self.span_w1_c2,
            (2, 2): self.span_w2_c2,
        }

    def context(self, context_no: int) -> str:
        if context_no not in (1, 2):
            raise ValueError(f"context_no must be 1 or 2, got {context_no}")
        return self.context1 if context_no == 1 else self.context2


@dataclass(frozen=True)
class Dataset:
    language: str
    items: tuple[DatasetItem, ...]

    def __post_init__(self):
        if self.language not in LANGUAGES:
            raise ValidationError(
                f"unknown language {self.language!r}; expected one of {LANGUAGES}"
            )
        object.__setattr__(self, "items", tuple(self.items))
        seen = set()
        for item in self.items:
            if item.id in seen:
                raise ValidationError(f"duplicate item id {item.id!r}")
            seen.add(item.id)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def has_gold(self) -> bool:
        return len(self.items) > 0 and all(i.gold is not None for i in self.items)


@dataclass(frozen=True)
class EntityAnnotation:
    """A named-entity mention and its lowercase type label."""

    span: TargetSpan
    label: str

    def __post_init__(self):
        if not self.label or any(c.isspace() for c in self.label):
            raise ValidationError(f"entity label must be non-empty, no whitespace: {self.label!r}")
        if self.label != self.label.lower():
            raise ValidationError(f"entity label must be lowercase: {self.label!r}")


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: which item, which field, which rule broke."""

    item_id: str
    field: str
    rule: str

    def __str__(self) -> str:
        return f"[{self.item_id}] {self.field}: {self.rule}"


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _fold(text: str) -> str:
    return _nfc(text).casefold()


def _extract_marked(raw: str, line_no: int) -> tuple[str, list[TargetSpan]]:
    """Strip ``<strong>`` markers, returning the clean text and marked spans."""
    out: list[str] = []
    spans: list[TargetSpan] = []
    pos = 0
    out_len = 0
    while True:
        open_at = raw.find(_MARK_OPEN, pos)
        if open_at == -1:
            tail = raw[pos:]
            if _MARK_CLOSE in tail:
                raise DatasetFormatError("unmatched </strong> marker", line_no)
            out.append(tail)
            break
        head = raw[pos:open_at]
        if _MARK_CLOSE in head:
            raise DatasetFormatError("unmatched </strong> marker", line_no)
        out.append(head)
        out_len += len(head)
        close_at = raw.find(_MARK_CLOSE, open_at + len(_MARK_OPEN))
        if close_at == -1:
            raise DatasetFormatError("unclosed <strong> marker", line_no)
        surface = raw[open_at + len(_MARK_OPEN) : close_at]
        if _MARK_OPEN in surface:
            raise DatasetFormatError("nested <strong> markers", line_no)
        if not surface:
            raise DatasetFormatError("empty <strong></strong> marker", line_no)
        spans.append(TargetSpan(out_len, out_len + len(surface), surface))
        out.append(surface)
        out_len += len(surface)
        pos = close_at + len(_MARK_CLOSE)
    return "".join(out), spans


def _assign_markers(
    item_id: str,
    word1: str,
    word2: str,
    context_no: int,
    spans: list[TargetSpan],
    line_no: int,
) -> tuple[TargetSpan, TargetSpan]:
    """Match marked spans to the two declared words (case-insensitive NFC)."""
    w1, w2 = _fold(word1), _fold(word2)
    for span in spans:
        if _fold(span.surface) not in (w1, w2):
            raise SurfaceMismatchError(
                f"item {item_id!r}: marked surface {span.surface!r} in context{context_no} "
                f"matches neither {word1!r} nor {word2!r}",
                line_no,
            )
    if w1 == w2:
        if len(spans) != 2:
            raise AmbiguityError(
                f"item {item_id!r}: word {word1!r} marked {len(spans)} time(s) "
                f"in context{context_no}, expected exactly 2 for a repeated pair",
                line_no,
            )
        return spans[0], spans[1]
    picked = []
    for word, folded in ((word1, w1), (word2, w2)):
        matches = [s for s in spans if _fold(s.surface) == folded]
        if len(matches) != 1:
            raise AmbiguityError(
                f"item {item_id!r}: word {word!r} marked {len(matches)} time(s) "
                f"in context{context_no}, expected exactly one",
                line_no,
            )
        picked.append(matches[0])
    return picked[0], picked[1]


def parse_dataset(content: str | IO[str], language: str) -> Dataset:
    """Parse the canonical tab-separated dataset format.

    Raises :class:`DatasetFormatError` (or its :class:`AmbiguityError` /
    :class:`SurfaceMismatchError` subclasses) naming the offending line.
    """
    if not isinstance(content, str):
        content = content.read()
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetFormatError("empty input, expected a header line", 1)

    header = tuple(lines[0].split("\t"))
    if header == _BASE_COLUMNS:
        with_gold = False
    elif header == _BASE_COLUMNS + _GOLD_COLUMNS:
        with_gold = True
    else:
        raise DatasetFormatError(f"unrecognized header {lines[0]!r}", 1)
    n_cols = len(header)

    items: list[DatasetItem] = []
    seen_ids: set[str] = set()
    for idx, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != n_cols:
            raise DatasetFormatError(
                f"expected {n_cols} tab-separated fields, found {len(cells)}", idx
            )
        item_id = cells[0]
        if not item_id:
            raise DatasetFormatError("missing id", idx)
        if item_id in seen_ids:
            raise DatasetFormatError(f"duplicate id {item_id!r}", idx)
        seen_ids.add(item_id)
        word1, word2 = _nfc(cells[1]), _nfc(cells[2])
        if not word1 or not word2:
            raise DatasetFormatError(f"item {item_id!r}: empty target word", idx)

        contexts = []
        marked = []
        for context_no, raw in ((1, cells[3]), (2, cells[4])):
            text, spans = _extract_marked(_nfc(raw), idx)
            s_w1, s_w2 = _assign_markers(item_id, word1, word2, context_no, spans, idx)
            contexts.append(text)
            marked.append((s_w1, s_w2))

        gold = None
        if with_gold:
            try:
                sim1, sim2, change = (float(cells[i]) for i in (5, 6, 7))
            except ValueError:
                raise DatasetFormatError(
                    f"item {item_id!r}: gold columns are not decimal numbers", idx
                ) from None
            gold = GoldScores(sim1, sim2, change)

        items.append(
            DatasetItem(
                id=item_id,
                word1=word1,
                word2=word2,
                context1=contexts[0],
                context2=contexts[1],
                span_w1_c1=marked[0][0],
                span_w2_c1=marked[0][1],
                span_w1_c2=marked[1][0],
                span_w2_c2=marked[1][1],
                gold=gold,
            )
        )
    return Dataset(language=language, items=tuple(items))


def _mark_context(context: str, spans: Iterable[TargetSpan]) -> str:
    ordered = sorted(spans, key=lambda s: s.start)
    for a, b in zip(ordered, ordered[1:]):
        if a.overlaps(b):
            raise ValidationError("cannot serialize overlapping target spans")
    out = context
    for span in reversed(ordered):
        if not span.matches(out):
            raise ValidationError(
                f"span [{span.start}, {span.end}) does not match context text"
            )
        out = (
            out[: span.start]
            + _MARK_OPEN
            + span.surface
            + _MARK_CLOSE
            + out[span.end :]
        )
    return out


def serialize_dataset(ds: Dataset) -> str:
    """Inverse of :func:`parse_dataset`; parse(serialize(ds)) == ds."""
    with_gold = ds.has_gold
    if any(i.gold is not None for i in ds.items) and not with_gold:
        raise ValidationError("cannot serialize a dataset with partial gold scores")
    header = _BASE_COLUMNS + _GOLD_COLUMNS if with_gold else _BASE_COLUMNS
    rows = ["\t".join(header)]
    for item in ds.items:
        cells = [
            item.id,
            item.word1,
            item.word2,
            _mark_context(item.context1, (item.span_w1_c1, item.span_w2_c1)),
            _mark_context(item.context2, (item.span_w1_c2, item.span_w2_c2)),
        ]
        if with_gold:
            cells += [repr(item.gold.sim1), repr(item.gold.sim2), repr(item.gold.change)]
        rows.append("\t".join(cells))
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class ReplacementResult:
    """Outcome of an entity replacement pass over one context."""

    context: str
    targets: tuple[TargetSpan, ...]
    skipped: tuple[EntityAnnotation, ...] = field(default_factory=tuple)


def apply_entity_replacement(
    context: str,
    targets: list[TargetSpan],
    entities: list[EntityAnnotation],
) -> ReplacementResult:
    """Replace entity surfaces with their type labels, remapping target spans.

    Entities overlapping a target survive untouched (the target word must stay
    findable downstream); they are returned in ``skipped`` rather than raising.
    Overlapping entity spans or spans that do not match the context raise
    :class:`ValidationError`.
    """
    for ent in entities:
        if not ent.span.matches(context):
            raise ValidationError(
                f"entity span [{ent.span.start}, {ent.span.end}) does not match "
                f"context text ({ent.span.surface!r})"
            )
    ordered = sorted(entities, key=lambda e: e.span.start)
    for a, b in zip(ordered, ordered[1:]):
        if a.span.overlaps(b.span):
            raise ValidationError(
                f"overlapping entity spans at [{a.span.start}, {a.span.end}) "
                f"and [{b.span.start}, {b.span.end})"
            )

    kept = []
    skipped = []
    for ent in ordered:
        if any(ent.span.overlaps(t) for t in targets):
            skipped.append(ent)
        else:
            kept.append(ent)

    pieces: list[str] = []
    pos = 0
    for ent in kept:
        pieces.append(context[pos : ent.span.start])
        pieces.append(ent.label)
        pos = ent.span.end
    pieces.append(context[pos:])
    new_context = "".join(pieces)

    new_targets = []
    for target in targets:
        delta = sum(
            len(e.label) - (e.span.end - e.span.start)
            for e in kept
            if e.span.end <= target.start
        )
        moved = target.shifted(delta)
        if not moved.matches(new_context):
            raise ValidationError(
                f"target {target.surface!r} lost during replacement (internal error)"
            )
        new_targets.append(moved)
    return ReplacementResult(new_context, tuple(new_targets), tuple(skipped))


def _check_span(
    item: DatasetItem, name: str, span: TargetSpan, context: str, out: list[Diagnostic]
):
    if span.end > len(context):
        out.append(
            Diagnostic(item.id, name, f"span end {span.end} beyond context length {len(context)}")
        )
    elif context[span.start : span.end] != span.surface:
        out.append(
            Diagnostic(
                item.id,
                name,
                f"surface mismatch: span holds {span.surface!r}, "
                f"context holds {context[span.start:span.end]!r}",
            )
        )


def validate_dataset(
    ds: Dataset, score_range: tuple[float, float] = (0.0, 10.0)
) -> list[Diagnostic]:
    """Check every item invariant; returns diagnostics instead of raising."""
    lo, hi = score_range
    out: list[Diagnostic] = []
    for item in ds.items:
        _check_span(item, "span_w1_c1", item.span_w1_c1, item.context1, out)
        _check_span(item, "span_w2_c1", item.span_w2_c1, item.context1, out)
        _check_span(item, "span_w1_c2", item.span_w1_c2, item.context2, out)
        _check_span(item, "span_w2_c2", item.span_w2_c2, item.context2, out)
        if item.span_w1_c1.overlaps(item.span_w2_c1):
            out.append(Diagnostic(item.id, "context1", "target spans overlap"))
        if item.span_w1_c2.overlaps(item.span_w2_c2):
            out.append(Diagnostic(item.id, "context2", "target spans overlap"))
        if item.gold is not None:
            g = item.gold
            if abs(g.change - (g.sim2 - g.sim1)) > GOLD_CHANGE_TOLERANCE:
                out.append(
                    Diagnostic(
                        item.id,
                        "gold.change",
                        f"change {g.change} != sim2 - sim1 = {g.sim2 - g.sim1}",
                    )
                )
            for name, value in (("gold.sim1", g.sim1), ("gold.sim2", g.sim2)):
                if not lo <= value <= hi:
                    out.append(
                        Diagnostic(item.id, name, f"score {value} outside [{lo}, {hi}]")
                    )
            span = hi - lo
            if not -span <= g.change <= span:
                out.append(
                    Diagnostic(
                        item.id, "gold.change", f"change {g.change} outside [-{span}, {span}]"
                    )
                )
    return out
