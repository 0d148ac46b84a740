"""Named-entity annotation and replacement for raising the known-data rate.

Pretrained vocabularies rarely cover proper names; swapping each entity for
its lowercase type label ("Sihanouk" -> "person") shows the model familiar
tokens instead. Replacement happens before tokenization and never touches a
target word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .dataset_io import Span
from .errors import NerBackendUnavailable, ReplacementError, UnsupportedLanguageError

#: an annotator maps a context string to (start, end, label) triples
Annotator = Callable[[str], Iterable[tuple[int, int, str]]]


@dataclass(frozen=True)
class Entity:
    span: Span
    label: str


def _spacy_annotator() -> Annotator:
    try:
        import spacy
    except ImportError:
        raise NerBackendUnavailable(
            "spacy is not installed; install the [ner] extra or pass an annotator"
        ) from None
    try:
        nlp = spacy.load("en_core_web_sm")
    except OSError:
        raise NerBackendUnavailable(
            "spacy model en_core_web_sm is not available"
        ) from None

    def annotate(context: str):
        return [(e.start_char, e.end_char, e.label_) for e in nlp(context).ents]

    return annotate


def ner_annotate(
    context: str, language: str = "en", annotator: Annotator | None = None
) -> list[Entity]:
    """Non-overlapping entity spans with lowercase type labels.

    Only English is supported; other languages raise
    :class:`UnsupportedLanguageError` rather than silently returning nothing.
    """
    if language != "en":
        raise UnsupportedLanguageError(
            f"no NER model for language {language!r}; only 'en' is supported"
        )
    annotate = annotator or _spacy_annotator()
    entities = []
    for start, end, label in sorted(annotate(context)):
        label = label.lower().replace(" ", "-")
        if not (0 <= start < end <= len(context)) or not label:
            raise ReplacementError(f"annotator produced bad entity ({start}, {end}, {label!r})")
        entities.append(Entity(Span(start, end, context[start:end]), label))
    for a, b in zip(entities, entities[1:]):
        if b.span.start < a.span.end:
            raise ReplacementError(
                f"annotator produced overlapping entities at {a.span} and {b.span}"
            )
    return entities


def apply_replacement(
    context: str, targets: list[Span], entities: list[Entity]
) -> tuple[str, list[Span], list[Entity]]:
    """Swap entity surfaces for their labels, remapping target spans.

    Entities overlapping a target are skipped (the target must survive
    verbatim for embedding lookup) and returned as the third element.
    """
    for ent in entities:
        if context[ent.span.start : ent.span.end] != ent.span.surface:
            raise ReplacementError(f"stale entity span {ent.span}")
    ordered = sorted(entities, key=lambda e: e.span.start)
    kept, skipped = [], []
    for ent in ordered:
        overlaps = any(
            ent.span.start < t.end and t.start < ent.span.end for t in targets
        )
        (skipped if overlaps else kept).append(ent)

    pieces, pos = [], 0
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
        moved = Span(target.start + delta, target.end + delta, target.surface)
        if new_context[moved.start : moved.end] != moved.surface:
            raise ReplacementError(f"target {target.surface!r} lost during replacement")
        new_targets.append(moved)
    return new_context, new_targets, skipped
