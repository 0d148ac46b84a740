"""Run a pretrained model over dataset contexts and dump target embeddings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
import numpy as np
import torch

from .align import align_spans
from .dataset_io import Item, read_dataset
from .errors import AlignmentError
from .ner import apply_replacement, ner_annotate


@dataclass(frozen=True)
class ExtractionJob:
    dataset: str
    model: str  # checkpoint name or local path
    out: str
    ner_enabled: bool = False
    language: str = "en"
    device: str = "cpu"

    def __post_init__(self):
        if not self.model:
            raise ValueError("model identifier must be non-empty")


@dataclass
class ExtractionResult:
    n_records: int
    n_layers: int
    hidden_size: int
    errors: list[str] = field(default_factory=list)
    skipped_entities: list[str] = field(default_factory=list)


def _load(job: ExtractionJob):
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(job.model)
    model = AutoModel.from_pretrained(job.model)
    model.to(job.device)
    model.eval()
    return tokenizer, model


def _context_stacks(tokenizer, model, device, context):
    """Hidden states for one context: (tokens, offsets, array [L, T, d])."""
    encoded = tokenizer(
        context,
        return_offsets_mapping=True,
        return_tensors="pt",
        truncation=False,
    )
    offsets = [tuple(pair) for pair in encoded.pop("offset_mapping")[0].tolist()]
    tokens = tokenizer.convert_ids_to_tokens(encoded["input_ids"][0])
    encoded = {k: v.to(device) for k, v in encoded.items()}
    with torch.no_grad():
        output = model(**encoded, output_hidden_states=True)
    # L matrices of shape (T, d); L = transformer layers + embedding output
    layers = np.stack(
        [h[0].cpu().numpy().astype(np.float32) for h in output.hidden_states]
    )
    return tokens, offsets, layers


def _record_obj(item_id, context_no, word_no, model_id, tokens, layers, indices):
    subtokens = []
    for idx in indices:
        stack = layers[:, idx, :].astype(np.float32).astype(float)
        subtokens.append({"text": tokens[idx] or "?", "layers": stack.tolist()})
    return {
        "item_id": item_id,
        "context": context_no,
        "word": word_no,
        "model": model_id,
        "subtokens": subtokens,
    }


def _transform_item(item: Item, language: str, annotator, result: ExtractionResult):
    """Entity-replaced contexts and spans for one item (NER path)."""
    contexts = {}
    spans = {}
    for context_no in (1, 2):
        context = item.context(context_no)
        targets = [item.spans[(context_no, 1)], item.spans[(context_no, 2)]]
        entities = ner_annotate(context, language, annotator)
        new_context, new_targets, skipped = apply_replacement(context, targets, entities)
        for ent in skipped:
            result.skipped_entities.append(
                f"{item.id}/context{context_no}: kept target over entity "
                f"{ent.span.surface!r} ({ent.label})"
            )
        contexts[context_no] = new_context
        spans[(context_no, 1)], spans[(context_no, 2)] = new_targets
    return contexts, spans


def extract(job: ExtractionJob, annotator=None) -> ExtractionResult:
    """Write one record per (item, context, word); all-or-nothing per item.

    Alignment failures are collected into the result, never silently skipped.
    A model that cannot be loaded raises.
    """
    items = read_dataset(job.dataset)
    tokenizer, model = _load(job)
    result = ExtractionResult(0, model.config.num_hidden_layers + 1, model.config.hidden_size)

    lines = []
    for item in items:
        if job.ner_enabled:
            contexts, spans = _transform_item(item, job.language, annotator, result)
        else:
            contexts = {1: item.context1, 2: item.context2}
            spans = item.spans

        item_lines = []
        try:
            for context_no in (1, 2):
                tokens, offsets, layers = _context_stacks(
                    tokenizer, model, job.device, contexts[context_no]
                )
                for word_no in (1, 2):
                    span = spans[(context_no, word_no)]
                    try:
                        indices = align_spans((span.start, span.end), offsets)
                    except AlignmentError as exc:
                        raise AlignmentError(
                            f"item {item.id!r} word{word_no} in context{context_no}: {exc}",
                            item_id=item.id,
                            word_no=word_no,
                        ) from None
                    item_lines.append(
                        _record_obj(
                            item.id, context_no, word_no, job.model, tokens, layers, indices
                        )
                    )
        except AlignmentError as exc:
            result.errors.append(str(exc))
            continue
        lines.extend(item_lines)

    with open(job.out, "w", encoding="utf-8") as handle:
        for obj in lines:
            handle.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    result.n_records = len(lines)
    return result
