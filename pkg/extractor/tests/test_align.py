import pytest

from ctxsim_extractor.align import align_spans
from ctxsim_extractor.errors import AlignmentError


def test_exact_match():
    assert align_spans((11, 15), [(0, 3), (4, 10), (11, 15)]) == [2]


def test_word_piece_split():
    assert align_spans((0, 7), [(0, 4), (4, 7)]) == [0, 1]


def test_partial_overlaps_count():
    assert align_spans((3, 9), [(0, 4), (4, 8), (8, 12)]) == [0, 1, 2]


def test_no_overlap_raises():
    with pytest.raises(AlignmentError, match=r"\[5, 9\)"):
        align_spans((5, 9), [(0, 4), (10, 12)])


def test_special_tokens_never_match():
    # (0, 0) placeholders (CLS/SEP) must not align with a span starting at 0
    assert align_spans((0, 4), [(0, 0), (0, 4), (0, 0)]) == [1]


def test_longest_contiguous_run_wins():
    offsets = [(0, 4), (0, 0), (5, 7), (7, 9)]
    assert align_spans((0, 9), offsets) == [2, 3]
