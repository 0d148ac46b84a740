"""Official scores for both subtasks.

Subtask 1 (change prediction) uses the uncentered Pearson correlation:
deviations are taken from zero, so the sign of the predicted change is
rewarded, not just its co-variation. Subtask 2 (rating prediction) uses the
harmonic mean of Pearson and Spearman over the pooled per-context ratings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .corpus import GoldScores
from .errors import DegenerateInputError
from .similarity import ItemPrediction


@dataclass(frozen=True)
class ScoreReport:
    subtask1_uncentered_pearson: float
    subtask2_pearson: float
    subtask2_spearman: float
    subtask2_harmonic: float
    n_items: int


def _paired(xs: Sequence[float], ys: Sequence[float], min_n: int) -> tuple[np.ndarray, np.ndarray]:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < min_n:
        raise ValueError(f"need at least {min_n} pairs, got {len(xs)}")
    return np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Standard centered Pearson r."""
    x, y = _paired(xs, ys, 2)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.dot(dx, dx))
    sy = np.sqrt(np.dot(dy, dy))
    if sx == 0.0:
        raise DegenerateInputError("first input has zero variance")
    if sy == 0.0:
        raise DegenerateInputError("second input has zero variance")
    return float(np.dot(dx, dy) / (sx * sy))


def uncentered_pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson with deviations from zero: sum(xy) / (sqrt(sum x^2) sqrt(sum y^2))."""
    x, y = _paired(xs, ys, 1)
    sx = np.sqrt(np.dot(x, x))
    sy = np.sqrt(np.dot(y, y))
    if sx == 0.0:
        raise DegenerateInputError("first input is all zeros")
    if sy == 0.0:
        raise DegenerateInputError("second input is all zeros")
    return float(np.dot(x, y) / (sx * sy))


def average_ranks(xs: Sequence[float]) -> np.ndarray:
    """Fractional ranks starting at 1; ties share the mean of their positions."""
    x = np.asarray(xs, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average-tie fractional ranks."""
    x, y = _paired(xs, ys, 2)
    if np.all(x == x[0]):
        raise DegenerateInputError("first input is constant")
    if np.all(y == y[0]):
        raise DegenerateInputError("second input is constant")
    return pearson(average_ranks(x), average_ranks(y))


def harmonic_mean(p: float, s: float) -> float:
    """2ps/(p+s) for positive p and s; 0 whenever either is non-positive.

    A harmonic mean across signs is meaningless, so the guard makes this a
    total function.
    """
    if p > 0.0 and s > 0.0:
        return 2.0 * p * s / (p + s)
    return 0.0


def _gold_for(pred: ItemPrediction, golds: Mapping[str, GoldScores]) -> GoldScores:
    try:
        return golds[pred.item_id]
    except KeyError:
        raise ValueError(f"no gold scores aligned with item {pred.item_id!r}") from None


def score_subtask1(
    preds: Sequence[ItemPrediction],
    golds: Mapping[str, GoldScores],
    change_transform: Callable[[float], float] | None = None,
) -> float:
    """Uncentered Pearson between predicted and gold changes, aligned by id."""
    if not preds:
        raise ValueError("need at least one prediction")
    f = change_transform or (lambda x: x)
    xs = [f(p.change) for p in preds]
    ys = [_gold_for(p, golds).change for p in preds]
    return uncentered_pearson(xs, ys)


def _both_correlations(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    p = pearson(xs, ys)
    s = spearman(xs, ys)
    return p, s, harmonic_mean(p, s)


def score_subtask2(
    preds: Sequence[ItemPrediction],
    golds: Mapping[str, GoldScores],
    per_context: bool = False,
    sim_transform: Callable[[float], float] | None = None,
) -> tuple[float, float, float]:
    """(pearson, spearman, harmonic) over the per-context ratings.

    Default pools both contexts into one 2n-point sequence (per item: sim1
    then sim2). ``per_context`` instead scores each context's n-point list
    separately and averages the three numbers.
    """
    if len(preds) < 2:
        raise ValueError("need at least two predictions")
    f = sim_transform or (lambda x: x)
    gold = [_gold_for(p, golds) for p in preds]
    if per_context:
        first = _both_correlations([f(p.sim1) for p in preds], [g.sim1 for g in gold])
        second = _both_correlations([f(p.sim2) for p in preds], [g.sim2 for g in gold])
        return tuple((a + b) / 2.0 for a, b in zip(first, second))
    xs = [value for p in preds for value in (f(p.sim1), f(p.sim2))]
    ys = [value for g in gold for value in (g.sim1, g.sim2)]
    return _both_correlations(xs, ys)


def score_all(
    preds: Sequence[ItemPrediction],
    golds: Mapping[str, GoldScores],
    per_context: bool = False,
    change_transform: Callable[[float], float] | None = None,
    sim_transform: Callable[[float], float] | None = None,
) -> ScoreReport:
    st1 = score_subtask1(preds, golds, change_transform)
    p, s, h = score_subtask2(preds, golds, per_context, sim_transform)
    return ScoreReport(st1, p, s, h, len(preds))
