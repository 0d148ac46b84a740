"""Character-span to sub-token alignment."""

from __future__ import annotations

from typing import Sequence

from .errors import AlignmentError


def align_spans(
    target: tuple[int, int],
    offsets: Sequence[tuple[int, int]],
) -> list[int]:
    """Indices of the maximal contiguous sub-token run overlapping the span.

    ``offsets`` are per-sub-token character ranges over the context; special
    tokens should be passed as (0, 0) and never match. Raises
    :class:`AlignmentError` when nothing overlaps (e.g. the target was elided
    by tokenizer normalization).
    """
    start, end = target
    hits = [
        i
        for i, (tok_start, tok_end) in enumerate(offsets)
        if tok_start < tok_end and tok_start < end and start < tok_end
    ]
    if not hits:
        raise AlignmentError(
            f"no sub-token overlaps characters [{start}, {end})"
        )
    runs = [[hits[0]]]
    for idx in hits[1:]:
        if idx == runs[-1][-1] + 1:
            runs[-1].append(idx)
        else:
            runs.append([idx])
    return max(runs, key=len)
