"""Builders shared by the test modules."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ctxsim.embedstore import (
    EmbeddingStore,
    LayerStack,
    SubtokenEmbedding,
    TargetEmbeddingRecord,
)

DATA_DIR = Path(__file__).parent / "data"


def record(item_id, context_no, word_no, model_id, stacks, texts=None):
    """Record from a list of per-sub-token layer matrices."""
    texts = texts or [f"t{i}" for i in range(len(stacks))]
    return TargetEmbeddingRecord(
        item_id,
        context_no,
        word_no,
        model_id,
        tuple(
            SubtokenEmbedding(text, LayerStack(np.asarray(stack, dtype=np.float64)))
            for text, stack in zip(texts, stacks)
        ),
    )


def vector_store(vectors, model_id="m", n_layers=1):
    """Store with one single-sub-token record per (item, context, word) slot.

    ``vectors`` maps (item_id, context_no, word_no) to a plain vector; the
    vector is repeated over ``n_layers`` layers.
    """
    store = EmbeddingStore()
    for (item_id, context_no, word_no), vec in vectors.items():
        store.add(
            record(item_id, context_no, word_no, model_id, [[list(vec)] * n_layers])
        )
    return store


def scaled_store(store, model_id, factor):
    """Copy of the store with one model's stacks multiplied by a scalar."""
    out = EmbeddingStore()
    for rec in store:
        if rec.model_id == model_id:
            rec = TargetEmbeddingRecord(
                rec.item_id,
                rec.context_no,
                rec.word_no,
                rec.model_id,
                tuple(
                    SubtokenEmbedding(sub.text, LayerStack(sub.stack.layers * factor))
                    for sub in rec.subtokens
                ),
            )
        out.add(rec)
    return out
