"""Layer-wise embedding interchange format.

One JSON object per line, no enclosing array::

    {"item_id": "en1", "context": 1, "word": 2, "model": "bert-base",
     "subtokens": [{"text": "ro", "layers": [[...], ...]}, ...]}

``layers`` is an L x d matrix, index 0 being the input-most layer and index
L-1 the final output layer. All layers of every sub-token under one model
share a single (L, d) signature. Values survive a write/read round trip at
32-bit float precision; in memory everything is float64.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple

import numpy as np

from .errors import RecordNotFound, StoreFormatError, ValidationError


class RecordKey(NamedTuple):
    item_id: str
    context_no: int
    word_no: int
    model_id: str

    def __str__(self) -> str:
        return f"({self.item_id}, c{self.context_no}, w{self.word_no}, {self.model_id})"


@dataclass(frozen=True, eq=False)
class LayerStack:
    """All layer vectors for one sub-token; shape (L, d), finite values."""

    layers: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.layers, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(
                f"layer stack must be a non-empty 2-D matrix, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError("layer stack contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "layers", arr)

    @property
    def n_layers(self) -> int:
        return self.layers.shape[0]

    @property
    def dim(self) -> int:
        return self.layers.shape[1]


@dataclass(frozen=True, eq=False)
class SubtokenEmbedding:
    text: str
    stack: LayerStack

    def __post_init__(self):
        if not self.text:
            raise ValidationError("sub-token text must be non-empty")


@dataclass(frozen=True, eq=False)
class TargetEmbeddingRecord:
    """All sub-token stacks for one (item, context, word, model) slot."""

    item_id: str
    context_no: int
    word_no: int
    model_id: str
    subtokens: tuple[SubtokenEmbedding, ...]

    def __post_init__(self):
        if self.context_no not in (1, 2) or self.word_no not in (1, 2):
            raise ValidationError(
                f"context/word numbers must be 1 or 2, got "
                f"({self.context_no}, {self.word_no})"
            )
        object.__setattr__(self, "context_no", int(self.context_no))
        object.__setattr__(self, "word_no", int(self.word_no))
        object.__setattr__(self, "subtokens", tuple(self.subtokens))
        if not self.subtokens:
            raise ValidationError("record must carry at least one sub-token")
        shape = self.subtokens[0].stack.layers.shape
        for sub in self.subtokens[1:]:
            if sub.stack.layers.shape != shape:
                raise ValidationError(
                    f"sub-token stacks disagree on shape: {shape} vs "
                    f"{sub.stack.layers.shape}"
                )

    @property
    def key(self) -> RecordKey:
        return RecordKey(self.item_id, self.context_no, self.word_no, self.model_id)

    @property
    def signature(self) -> tuple[int, int]:
        return self.subtokens[0].stack.layers.shape


class EmbeddingStore:
    """Immutable-after-build index of records keyed by (item, context, word, model)."""

    def __init__(self):
        self._records: dict[RecordKey, TargetEmbeddingRecord] = {}
        self._signatures: dict[str, tuple[int, int]] = {}
        self._signature_source: dict[str, RecordKey] = {}

    def add(self, record: TargetEmbeddingRecord) -> None:
        key = record.key
        if key in self._records:
            raise StoreFormatError(f"duplicate record key {key}")
        sig = record.signature
        known = self._signatures.get(record.model_id)
        if known is None:
            self._signatures[record.model_id] = sig
            self._signature_source[record.model_id] = key
        elif known != sig:
            raise StoreFormatError(
                f"record {key} has shape (L={sig[0]}, d={sig[1]}) but model "
                f"{record.model_id!r} was established as (L={known[0]}, d={known[1]}) "
                f"by record {self._signature_source[record.model_id]}"
            )
        self._records[key] = record

    def lookup(
        self, item_id: str, context_no: int, word_no: int, model_id: str
    ) -> TargetEmbeddingRecord:
        key = RecordKey(item_id, context_no, word_no, model_id)
        try:
            return self._records[key]
        except KeyError:
            raise RecordNotFound(key) from None

    def get(
        self, item_id: str, context_no: int, word_no: int, model_id: str
    ) -> TargetEmbeddingRecord | None:
        return self._records.get(RecordKey(item_id, context_no, word_no, model_id))

    def signature(self, model_id: str) -> tuple[int, int]:
        try:
            return self._signatures[model_id]
        except KeyError:
            raise RecordNotFound(RecordKey("*", 1, 1, model_id)) from None

    def models(self) -> list[str]:
        return sorted(self._signatures)

    def keys(self) -> list[RecordKey]:
        return sorted(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: RecordKey) -> bool:
        return key in self._records

    def __iter__(self) -> Iterator[TargetEmbeddingRecord]:
        for key in self.keys():
            yield self._records[key]


def _as_layers(value, line_no: int) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise StoreFormatError("'layers' must be a non-empty array of arrays", line_no)
    width = None
    for row in value:
        if not isinstance(row, list) or not row:
            raise StoreFormatError("'layers' rows must be non-empty arrays", line_no)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise StoreFormatError("'layers' rows differ in length", line_no)
        for cell in row:
            if not isinstance(cell, (int, float)) or isinstance(cell, bool) or not math.isfinite(cell):
                raise StoreFormatError(f"non-finite or non-numeric layer value {cell!r}", line_no)
    return np.asarray(value, dtype=np.float64)


def _parse_line(line: str, line_no: int) -> TargetEmbeddingRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise StoreFormatError(f"invalid JSON: {exc}", line_no) from None
    if not isinstance(obj, dict):
        raise StoreFormatError("record line must be a JSON object", line_no)
    try:
        item_id = obj["item_id"]
        context_no = obj["context"]
        word_no = obj["word"]
        model_id = obj["model"]
        subtokens = obj["subtokens"]
    except KeyError as exc:
        raise StoreFormatError(f"missing field {exc.args[0]!r}", line_no) from None
    if not isinstance(item_id, str) or not item_id:
        raise StoreFormatError("'item_id' must be a non-empty string", line_no)
    if context_no not in (1, 2) or word_no not in (1, 2):
        raise StoreFormatError("'context' and 'word' must be 1 or 2", line_no)
    if not isinstance(model_id, str) or not model_id:
        raise StoreFormatError("'model' must be a non-empty string", line_no)
    if not isinstance(subtokens, list) or not subtokens:
        raise StoreFormatError("'subtokens' must be a non-empty array", line_no)
    subs = []
    for sub in subtokens:
        if not isinstance(sub, dict):
            raise StoreFormatError("sub-token entries must be objects", line_no)
        text = sub.get("text")
        if not isinstance(text, str) or not text:
            raise StoreFormatError("sub-token 'text' must be a non-empty string", line_no)
        layers = _as_layers(sub.get("layers"), line_no)
        try:
            subs.append(SubtokenEmbedding(text, LayerStack(layers)))
        except ValidationError as exc:
            raise StoreFormatError(str(exc), line_no) from None
    try:
        return TargetEmbeddingRecord(item_id, context_no, word_no, model_id, tuple(subs))
    except ValidationError as exc:
        raise StoreFormatError(str(exc), line_no) from None


def read_store(content: str | IO[str] | Iterable[str]) -> EmbeddingStore:
    """Parse the line-delimited record format. Empty input gives an empty store."""
    if isinstance(content, str):
        lines: Iterable[str] = content.split("\n")
    elif hasattr(content, "read"):
        lines = content.read().split("\n")
    else:
        lines = content
    store = EmbeddingStore()
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        store.add(_parse_line(line, line_no))
    return store


def _f32(x: float) -> float:
    # exact float64 value of the nearest float32; json emits its shortest repr
    return float(np.float32(x))


def write_store(store: EmbeddingStore) -> str:
    """Serialize in key-sorted order; values rounded through float32."""
    lines = []
    for record in store:
        obj = {
            "item_id": record.item_id,
            "context": record.context_no,
            "word": record.word_no,
            "model": record.model_id,
            "subtokens": [
                {
                    "text": sub.text,
                    "layers": [
                        [_f32(v) for v in row] for row in sub.stack.layers.tolist()
                    ],
                }
                for sub in record.subtokens
            ],
        }
        lines.append(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def merge_stores(stores: Iterable[EmbeddingStore]) -> EmbeddingStore:
    """Union of several stores; duplicate keys or signature drift raise."""
    merged = EmbeddingStore()
    for store in stores:
        for record in store:
            merged.add(record)
    return merged


def stores_equal(a: EmbeddingStore, b: EmbeddingStore, float32: bool = True) -> bool:
    """Structural equality; values compared at 32-bit precision by default."""
    if a.keys() != b.keys():
        return False
    for ra in a:
        rb = b.lookup(*ra.key)
        if len(ra.subtokens) != len(rb.subtokens):
            return False
        for sa, sb in zip(ra.subtokens, rb.subtokens):
            if sa.text != sb.text or sa.stack.layers.shape != sb.stack.layers.shape:
                return False
            la, lb = sa.stack.layers, sb.stack.layers
            if float32:
                la, lb = la.astype(np.float32), lb.astype(np.float32)
            if not np.array_equal(la, lb):
                return False
    return True
