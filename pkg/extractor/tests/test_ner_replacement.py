import pytest

from ctxsim_extractor.dataset_io import Span
from ctxsim_extractor.errors import (
    NerBackendUnavailable,
    ReplacementError,
    UnsupportedLanguageError,
)
from ctxsim_extractor.ner import Entity, apply_replacement, ner_annotate

CONTEXT = (
    "Driven underground in the late 1960s, Sihanouk had to make concessions "
    "to his former enemies."
)


def span_of(context, surface):
    start = context.index(surface)
    return Span(start, start + len(surface), surface)


def stub_annotator(context):
    # emulates a trained English pipeline on the fixture sentence
    found = []
    for surface, label in (("Sihanouk", "PERSON"),):
        at = context.find(surface)
        if at != -1:
            found.append((at, at + len(surface), label))
    return found


def test_annotate_lowercases_labels():
    entities = ner_annotate(CONTEXT, "en", stub_annotator)
    assert entities == [Entity(span_of(CONTEXT, "Sihanouk"), "person")]


def test_annotate_rejects_unsupported_language():
    with pytest.raises(UnsupportedLanguageError, match="'hr'"):
        ner_annotate(CONTEXT, "hr", stub_annotator)


def test_annotate_rejects_overlapping_entities():
    with pytest.raises(ReplacementError, match="overlap"):
        ner_annotate("abcdef", "en", lambda c: [(0, 4, "ORG"), (2, 6, "LOC")])


def test_default_backend_requires_spacy():
    spacy = pytest.importorskip("spacy")  # noqa: F841 - only run when installed
    try:
        ner_annotate(CONTEXT, "en")
    except NerBackendUnavailable:
        pytest.skip("spacy model not downloaded")


def test_replacement_produces_known_token_text():
    entities = ner_annotate(CONTEXT, "en", stub_annotator)
    target = span_of(CONTEXT, "concessions")
    new_context, targets, skipped = apply_replacement(CONTEXT, [target], entities)
    assert new_context == (
        "Driven underground in the late 1960s, person had to make concessions "
        "to his former enemies."
    )
    assert skipped == []
    assert new_context[targets[0].start : targets[0].end] == "concessions"


def test_replacement_never_touches_targets():
    entities = ner_annotate(CONTEXT, "en", stub_annotator)
    target = span_of(CONTEXT, "Sihanouk")
    new_context, targets, skipped = apply_replacement(CONTEXT, [target], entities)
    assert new_context == CONTEXT
    assert targets == [target]
    assert [e.label for e in skipped] == ["person"]


def test_replacement_rejects_stale_spans():
    with pytest.raises(ReplacementError, match="stale"):
        apply_replacement("short", [], [Entity(Span(0, 4, "Rome"), "loc")])
