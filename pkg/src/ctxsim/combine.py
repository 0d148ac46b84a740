"""Turn layer-wise records into word vectors.

Pipeline per configured part: a layer scheme collapses each sub-token's
(L, d) stack to one vector, a pooling strategy collapses sub-token vectors
to one word vector, and parts are concatenated in order to stack models.

Scheme/pooling mini-language used by the CLI and sweep files::

    part   := <model_id>@<scheme>@<pooling>
    scheme := last<N> | avg:<K> | mix[:g=<G>] | layer:<I>   (I may be negative)
    pooling:= first | last | first-last | mean
    config := part { + part }

Example: ``bert-large-cased@avg:14@first + elmo@last4@mean``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedstore import LayerStack, TargetEmbeddingRecord
from .errors import ConfigError, LayerRangeError


@dataclass(frozen=True)
class ConcatLast:
    """Concatenate the last n layers, final layer first."""

    n: int = 4

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"concat_last needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class AverageLast:
    """Arithmetic mean of the last k layers."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"average_last needs k >= 1, got {self.k}")


@dataclass(frozen=True)
class ScalarMix:
    """gamma * sum_l softmax(weights)_l * layer_l over all layers.

    ``weights=None`` means uniform raw weights (the untrained default).
    """

    weights: tuple[float, ...] | None = None
    gamma: float = 1.0

    def __post_init__(self):
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
            if not all(math.isfinite(w) for w in self.weights):
                raise ConfigError("scalar mix weights must be finite")
        if not math.isfinite(self.gamma):
            raise ConfigError("scalar mix gamma must be finite")


@dataclass(frozen=True)
class SingleLayer:
    """One layer verbatim; negative indices count from the output layer."""

    index: int = -1


LayerScheme = ConcatLast | AverageLast | ScalarMix | SingleLayer


class Pooling(enum.Enum):
    FIRST = "first"
    LAST = "last"
    FIRST_LAST = "first-last"
    MEAN = "mean"

    @classmethod
    def parse(cls, text: str) -> "Pooling":
        for member in cls:
            if member.value == text:
                return member
        raise ConfigError(
            f"unknown pooling {text!r}; expected one of "
            f"{', '.join(m.value for m in cls)}"
        )


@dataclass(frozen=True)
class Part:
    model_id: str
    scheme: LayerScheme
    pooling: Pooling

    def __post_init__(self):
        if not self.model_id:
            raise ConfigError("part model_id must be non-empty")


@dataclass(frozen=True)
class CombinationConfig:
    parts: tuple[Part, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ConfigError("a combination config needs at least one part")

    def models(self) -> list[str]:
        return [part.model_id for part in self.parts]


def combine_layers(stack: LayerStack, scheme: LayerScheme) -> np.ndarray:
    """Collapse an (L, d) stack to one vector according to the scheme."""
    layers = stack.layers
    n_layers = stack.n_layers
    if isinstance(scheme, ConcatLast):
        if scheme.n > n_layers:
            raise LayerRangeError(
                f"concat of last {scheme.n} layers impossible on a {n_layers}-layer stack"
            )
        return np.concatenate([layers[n_layers - 1 - i] for i in range(scheme.n)])
    if isinstance(scheme, AverageLast):
        if scheme.k > n_layers:
            raise LayerRangeError(
                f"average of last {scheme.k} layers impossible on a {n_layers}-layer stack"
            )
        return layers[n_layers - scheme.k :].mean(axis=0)
    if isinstance(scheme, ScalarMix):
        if scheme.weights is None:
            raw = np.zeros(n_layers)
        else:
            if len(scheme.weights) != n_layers:
                raise ConfigError(
                    f"scalar mix has {len(scheme.weights)} weights for a "
                    f"{n_layers}-layer stack"
                )
            raw = np.asarray(scheme.weights, dtype=np.float64)
        shifted = np.exp(raw - raw.max())
        probs = shifted / shifted.sum()
        return scheme.gamma * (probs[:, None] * layers).sum(axis=0)
    if isinstance(scheme, SingleLayer):
        if not -n_layers <= scheme.index < n_layers:
            raise LayerRangeError(
                f"layer index {scheme.index} out of range for a {n_layers}-layer stack"
            )
        return np.array(layers[scheme.index], dtype=np.float64)
    raise ConfigError(f"unknown layer scheme {scheme!r}")


def pool_subtokens(vectors: Sequence[np.ndarray], strategy: Pooling) -> np.ndarray:
    """Collapse per-sub-token vectors to one word vector.

    ``first-last`` concatenates the first and last vectors; a single sub-token
    is concatenated with itself so output dimensions stay uniform.
    """
    if len(vectors) == 0:
        raise ValueError("cannot pool an empty sub-token list")
    dim = vectors[0].shape
    for vec in vectors[1:]:
        if vec.shape != dim:
            raise ValueError(f"sub-token vectors disagree on dimension: {dim} vs {vec.shape}")
    if strategy is Pooling.FIRST:
        return np.array(vectors[0], dtype=np.float64)
    if strategy is Pooling.LAST:
        return np.array(vectors[-1], dtype=np.float64)
    if strategy is Pooling.FIRST_LAST:
        return np.concatenate([vectors[0], vectors[-1]])
    if strategy is Pooling.MEAN:
        return np.mean(np.stack(vectors), axis=0)
    raise ValueError(f"unknown pooling strategy {strategy!r}")


def word_vector(
    records: Sequence[TargetEmbeddingRecord], config: CombinationConfig
) -> np.ndarray:
    """Stacked word vector: per-part combine + pool, concatenated in part order."""
    if len(records) != len(config.parts):
        raise ConfigError(
            f"{len(records)} records supplied for {len(config.parts)} config parts"
        )
    pooled = []
    for record, part in zip(records, config.parts):
        if record.model_id != part.model_id:
            raise ConfigError(
                f"record for model {record.model_id!r} fed to part expecting "
                f"{part.model_id!r}"
            )
        combined = [combine_layers(sub.stack, part.scheme) for sub in record.subtokens]
        pooled.append(pool_subtokens(combined, part.pooling))
    return np.concatenate(pooled)


def scheme_applicable(scheme: LayerScheme, n_layers: int) -> str | None:
    """Reason the scheme cannot run on an n_layers-deep model, or None if fine."""
    if isinstance(scheme, ConcatLast) and scheme.n > n_layers:
        return f"concat of last {scheme.n} layers exceeds stack depth {n_layers}"
    if isinstance(scheme, AverageLast) and scheme.k > n_layers:
        return f"average of last {scheme.k} layers exceeds stack depth {n_layers}"
    if isinstance(scheme, ScalarMix) and scheme.weights is not None:
        if len(scheme.weights) != n_layers:
            return (
                f"scalar mix carries {len(scheme.weights)} weights but the "
                f"stack depth is {n_layers}"
            )
    if isinstance(scheme, SingleLayer):
        if not -n_layers <= scheme.index < n_layers:
            return f"layer index {scheme.index} out of range for stack depth {n_layers}"
    return None


_LAST_RE = re.compile(r"^last(\d+)$")
_AVG_RE = re.compile(r"^avg:(\d+)$")
_MIX_RE = re.compile(r"^mix(?::g=([^:@]+))?$")
_LAYER_RE = re.compile(r"^layer:(-?\d+)$")


def parse_scheme(text: str) -> LayerScheme:
    if m := _LAST_RE.match(text):
        return ConcatLast(int(m.group(1)))
    if m := _AVG_RE.match(text):
        return AverageLast(int(m.group(1)))
    if m := _MIX_RE.match(text):
        gamma = 1.0
        if m.group(1) is not None:
            try:
                gamma = float(m.group(1))
            except ValueError:
                raise ConfigError(f"bad scalar mix gamma {m.group(1)!r}") from None
        return ScalarMix(None, gamma)
    if m := _LAYER_RE.match(text):
        return SingleLayer(int(m.group(1)))
    raise ConfigError(
        f"unknown layer scheme {text!r}; expected last<N>, avg:<K>, "
        f"mix[:g=<G>] or layer:<I>"
    )


def scheme_to_spec(scheme: LayerScheme) -> str:
    if isinstance(scheme, ConcatLast):
        return f"last{scheme.n}"
    if isinstance(scheme, AverageLast):
        return f"avg:{scheme.k}"
    if isinstance(scheme, ScalarMix):
        if scheme.weights is not None:
            raise ConfigError("explicit scalar mix weights have no spec-string form")
        return "mix" if scheme.gamma == 1.0 else f"mix:g={scheme.gamma!r}"
    if isinstance(scheme, SingleLayer):
        return f"layer:{scheme.index}"
    raise ConfigError(f"unknown layer scheme {scheme!r}")


def parse_part(text: str) -> Part:
    fields = text.split("@")
    if len(fields) != 3:
        raise ConfigError(
            f"bad part {text!r}; expected <model_id>@<scheme>@<pooling>"
        )
    model_id, scheme_text, pooling_text = fields
    if not model_id:
        raise ConfigError(f"bad part {text!r}; empty model id")
    return Part(model_id, parse_scheme(scheme_text), Pooling.parse(pooling_text))


def parse_config(spec: str) -> CombinationConfig:
    """Parse the ``part + part + ...`` stacking mini-language."""
    chunks = [chunk.strip() for chunk in spec.split("+")]
    if any(not chunk for chunk in chunks):
        raise ConfigError(f"bad config {spec!r}; empty part")
    return CombinationConfig(tuple(parse_part(chunk) for chunk in chunks))


def config_to_spec(config: CombinationConfig) -> str:
    return " + ".join(
        f"{p.model_id}@{scheme_to_spec(p.scheme)}@{p.pooling.value}"
        for p in config.parts
    )
