"""Reader for the canonical tab-separated dataset format.

Kept deliberately independent of the evaluation toolkit: the file format is
the contract between the two packages. Only the fields the extractor needs
are materialized (gold columns are accepted and ignored).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetError

_OPEN = "<strong>"
_CLOSE = "</strong>"
_BASE = ("id", "word1", "word2", "context1", "context2")
_GOLD = ("sim1", "sim2", "change")


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class Item:
    id: str
    word1: str
    word2: str
    context1: str
    context2: str
    spans: dict[tuple[int, int], Span]  # keyed by (context_no, word_no)

    def context(self, context_no: int) -> str:
        return self.context1 if context_no == 1 else self.context2


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _strip_markers(raw: str, line_no: int) -> tuple[str, list[Span]]:
    out, spans, pos = [], [], 0
    while True:
        open_at = raw.find(_OPEN, pos)
        if open_at == -1:
            out.append(raw[pos:])
            break
        out.append(raw[pos:open_at])
        close_at = raw.find(_CLOSE, open_at + len(_OPEN))
        if close_at == -1:
            raise DatasetError(f"line {line_no}: unclosed {_OPEN} marker")
        surface = raw[open_at + len(_OPEN) : close_at]
        if not surface:
            raise DatasetError(f"line {line_no}: empty marker")
        offset = sum(len(piece) for piece in out)
        spans.append(Span(offset, offset + len(surface), surface))
        out.append(surface)
        pos = close_at + len(_CLOSE)
    return "".join(out), spans


def _assign(word1: str, word2: str, spans: list[Span], where: str) -> tuple[Span, Span]:
    fold = lambda s: _nfc(s).casefold()
    w1, w2 = fold(word1), fold(word2)
    if w1 == w2:
        if len(spans) != 2:
            raise DatasetError(f"{where}: expected 2 markers for repeated word, got {len(spans)}")
        return spans[0], spans[1]
    picked = []
    for folded, word in ((w1, word1), (w2, word2)):
        matches = [s for s in spans if fold(s.surface) == folded]
        if len(matches) != 1:
            raise DatasetError(
                f"{where}: word {word!r} marked {len(matches)} time(s), expected one"
            )
        picked.append(matches[0])
    return picked[0], picked[1]


def read_dataset(path: str | Path) -> list[Item]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetError("empty dataset file")
    header = tuple(lines[0].split("\t"))
    if header not in (_BASE, _BASE + _GOLD):
        raise DatasetError(f"unrecognized header {lines[0]!r}")
    n_cols = len(header)

    items = []
    seen = set()
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != n_cols:
            raise DatasetError(f"line {line_no}: expected {n_cols} fields, got {len(cells)}")
        item_id, word1, word2 = cells[0], _nfc(cells[1]), _nfc(cells[2])
        if not item_id or item_id in seen:
            raise DatasetError(f"line {line_no}: missing or duplicate id")
        seen.add(item_id)
        spans: dict[tuple[int, int], Span] = {}
        contexts = []
        for context_no, raw in ((1, cells[3]), (2, cells[4])):
            text, marked = _strip_markers(_nfc(raw), line_no)
            s1, s2 = _assign(word1, word2, marked, f"line {line_no}, context{context_no}")
            contexts.append(text)
            spans[(context_no, 1)] = s1
            spans[(context_no, 2)] = s2
        items.append(
            Item(item_id, word1, word2, contexts[0], contexts[1], spans)
        )
    return items
