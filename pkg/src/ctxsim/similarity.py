"""Per-item similarity predictions from combined word vectors."""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .combine import CombinationConfig, word_vector
from .corpus import Dataset, DatasetItem
from .embedstore import EmbeddingStore
from .errors import DegenerateVectorError


@dataclass(frozen=True)
class ItemPrediction:
    """Cosine similarity of the pair in each context plus their change.

    ``change == sim2 - sim1`` by construction; sims live in [-1, 1].
    """

    item_id: str
    sim1: float
    sim2: float
    change: float

    @classmethod
    def of(cls, item_id: str, sim1: float, sim2: float) -> "ItemPrediction":
        return cls(item_id, sim1, sim2, sim2 - sim1)


def cosine(v: np.ndarray, w: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding overshoot."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape or v.ndim != 1:
        raise ValueError(f"cosine needs equal-length vectors, got {v.shape} and {w.shape}")
    nv = np.linalg.norm(v)
    nw = np.linalg.norm(w)
    if nv == 0.0:
        raise DegenerateVectorError("left vector has zero norm")
    if nw == 0.0:
        raise DegenerateVectorError("right vector has zero norm")
    return float(np.clip(np.dot(v, w) / (nv * nw), -1.0, 1.0))


def predict_item(
    item: DatasetItem, store: EmbeddingStore, config: CombinationConfig
) -> ItemPrediction:
    """sim1/sim2 = cosine of the two words' stacked vectors per context."""
    def vector(context_no: int, word_no: int) -> np.ndarray:
        records = [
            store.lookup(item.id, context_no, word_no, part.model_id)
            for part in config.parts
        ]
        return word_vector(records, config)

    sim1 = cosine(vector(1, 1), vector(1, 2))
    sim2 = cosine(vector(2, 1), vector(2, 2))
    return ItemPrediction.of(item.id, sim1, sim2)


def predict_dataset(
    ds: Dataset, store: EmbeddingStore, config: CombinationConfig
) -> list[ItemPrediction]:
    """Predictions for every item, in dataset order."""
    return [predict_item(item, store, config) for item in ds.items]
