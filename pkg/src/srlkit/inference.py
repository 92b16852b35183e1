"""Predicate-conditioned input assembly and BIO tagging.

Two inference paths are provided. The baseline path re-tokenizes and
re-assembles the sentence from scratch for every predicate, the way the
classic per-predicate pipeline did. The cached path encodes the sentence
once and reuses the encoding across all predicates, so only the predicate
pieces and segment layout differ between inputs. Both paths must produce
identical model inputs, and therefore identical tags, for any deterministic
backend.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from srlkit.core import BioSequence, BioTag, SpanBoundsError, SrlError, Token
from srlkit.encoding import EncodedSentence, TaggerBackend, encode_sentence_once


class DuplicatePredicateError(SrlError):
    """The same predicate index was requested twice for one sentence."""


class BackendError(SrlError):
    """A backend call failed; carries the batch identifier."""


@dataclass(frozen=True)
class ModelInput:
    """One assembled input: [CLS] sentence [SEP] predicate [SEP].

    Segment ids are 0 over CLS+sentence+SEP and 1 over predicate+SEP; the
    attention mask is all 1 before padding.
    """

    ids: tuple[int, ...]
    segment_ids: tuple[int, ...]
    attention_mask: tuple[int, ...]
    predicate_word_index: int
    first_subword_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.ids) == len(self.segment_ids) == len(self.attention_mask)):
            raise ValueError("ids, segment ids and mask must have equal length")
        flips = sum(
            1 for a, b in zip(self.segment_ids, self.segment_ids[1:]) if a != b
        )
        if flips > 1 or any(s not in (0, 1) for s in self.segment_ids):
            raise ValueError("segment ids must be a block of 0s then 1s")
        mask = self.attention_mask
        if any(m not in (0, 1) for m in mask) or list(mask) != sorted(mask, reverse=True):
            raise ValueError("attention mask must be a prefix of 1s")


@dataclass(frozen=True)
class Batch:
    """Padded, stacked model inputs plus per-row metadata."""

    ids: np.ndarray
    segment_ids: np.ndarray
    attention_mask: np.ndarray
    predicate_word_indices: tuple[int, ...]
    first_subword_indices: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]


@dataclass(frozen=True)
class TaggedSentence:
    """Per-predicate tag sequences for one sentence, in request order."""

    words: tuple[Token, ...]
    frames: tuple[tuple[int, BioSequence], ...]


def _check_predicates(predicate_indices: Sequence[int], word_count: int) -> None:
    if not predicate_indices:
        raise ValueError("predicate index list must be non-empty")
    seen = set()
    for p in predicate_indices:
        if not 0 <= p < word_count:
            raise SpanBoundsError(
                f"predicate index {p} outside sentence of {word_count} words"
            )
        if p in seen:
            raise DuplicatePredicateError(f"predicate index {p} repeated")
        seen.add(p)


def _assemble(
    enc: EncodedSentence,
    predicate_word_index: int,
    pred_pieces: Sequence[int],
    vocab,
) -> ModelInput:
    sent = enc.subword_ids
    ids = (vocab.cls_id, *sent, vocab.sep_id, *pred_pieces, vocab.sep_id)
    segment_ids = (0,) * (1 + len(sent) + 1) + (1,) * (len(pred_pieces) + 1)
    return ModelInput(
        ids=ids,
        segment_ids=segment_ids,
        attention_mask=(1,) * len(ids),
        predicate_word_index=predicate_word_index,
        first_subword_indices=enc.first_subword_index_per_word,
    )


def build_inputs_cached(
    enc: EncodedSentence,
    words: Sequence[Token],
    predicate_indices: Sequence[int],
    backend: TaggerBackend,
) -> list[ModelInput]:
    """Assemble one input per predicate from a shared sentence encoding.

    The sentence segment of every input reuses `enc.subword_ids` verbatim;
    only the predicate word is re-tokenized, once per predicate.
    """
    _check_predicates(predicate_indices, len(words))
    inputs = []
    for p in predicate_indices:
        pred_pieces = backend.tokenize(words[p].text)
        inputs.append(_assemble(enc, p, pred_pieces, backend.vocab))
    return inputs


def build_inputs_baseline(
    words: Sequence[Token],
    predicate_indices: Sequence[int],
    backend: TaggerBackend,
) -> list[ModelInput]:
    """Assemble inputs the old way: full sentence re-encoding per predicate."""
    _check_predicates(predicate_indices, len(words))
    inputs = []
    for p in predicate_indices:
        enc = encode_sentence_once(words, backend)
        pred_pieces = backend.tokenize(words[p].text)
        inputs.append(_assemble(enc, p, pred_pieces, backend.vocab))
    return inputs


def pad_and_stack(inputs: Sequence[ModelInput], pad_id: int) -> Batch:
    """Pad all rows to the max length (PAD id, segment 0, mask 0)."""
    if not inputs:
        raise ValueError("cannot stack an empty input list")
    width = max(len(m.ids) for m in inputs)

    def padded(values, fill):
        return [list(v) + [fill] * (width - len(v)) for v in values]

    return Batch(
        ids=np.array(padded([m.ids for m in inputs], pad_id), dtype=np.int64),
        segment_ids=np.array(
            padded([m.segment_ids for m in inputs], 0), dtype=np.int64
        ),
        attention_mask=np.array(
            padded([m.attention_mask for m in inputs], 0), dtype=np.int64
        ),
        predicate_word_indices=tuple(m.predicate_word_index for m in inputs),
        first_subword_indices=tuple(m.first_subword_indices for m in inputs),
        lengths=tuple(len(m.ids) for m in inputs),
    )


def unpad_batch(batch: Batch) -> list[ModelInput]:
    """Recover the original inputs from a padded batch."""
    out = []
    for row, n in enumerate(batch.lengths):
        out.append(
            ModelInput(
                ids=tuple(int(x) for x in batch.ids[row, :n]),
                segment_ids=tuple(int(x) for x in batch.segment_ids[row, :n]),
                attention_mask=tuple(int(x) for x in batch.attention_mask[row, :n]),
                predicate_word_index=batch.predicate_word_indices[row],
                first_subword_indices=batch.first_subword_indices[row],
            )
        )
    return out


def _chunks(items: list, size: int | None):
    if size is None or size <= 0 or size >= len(items):
        yield items
        return
    for i in range(0, len(items), size):
        yield items[i:i + size]


def predict_srl(
    words: Sequence[Token],
    predicate_indices: Sequence[int],
    backend: TaggerBackend,
    mode: str = "cached",
    max_batch: int | None = None,
) -> TaggedSentence:
    """Tag every requested predicate of one sentence.

    Per-word labels are the argmax over the backend's scores, which the
    backend reads at each word's first subword position. Frames come back
    in the order the predicates were requested.
    """
    words = tuple(words)
    if not predicate_indices:
        return TaggedSentence(words, ())
    if mode == "cached":
        enc = encode_sentence_once(words, backend)
        inputs = build_inputs_cached(enc, words, predicate_indices, backend)
    elif mode == "baseline":
        inputs = build_inputs_baseline(words, predicate_indices, backend)
    else:
        raise ValueError(f"unknown mode: {mode!r}")

    scores: list[np.ndarray] = []
    for chunk in _chunks(inputs, max_batch):
        batch = pad_and_stack(chunk, backend.vocab.pad_id)
        try:
            scores.extend(backend.forward(batch))
        except SrlError:
            raise
        except Exception as exc:
            batch_id = ",".join(str(p) for p in batch.predicate_word_indices)
            raise BackendError(f"forward failed for predicates [{batch_id}]: {exc}") from exc

    frames = []
    for model_input, score in zip(inputs, scores):
        best = np.asarray(score).argmax(axis=1)
        tags = tuple(BioTag.parse(backend.labels[i]) for i in best)
        frames.append((model_input.predicate_word_index, BioSequence(tags)))
    return TaggedSentence(words, tuple(frames))
