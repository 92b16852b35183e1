"""Sentence-level subword encoding, performed once per sentence and reused
across predicates, plus the pluggable tagger backend abstraction.

A backend bundles three things: a subword vocabulary with its special ids,
a context-free per-word tokenizer, and a forward pass that maps assembled
model inputs to per-word label scores. The in-process mock backend is fully
deterministic so that the cached and per-predicate inference paths can be
compared bit for bit.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from srlkit.core import SrlError, Token


class EncodingError(SrlError):
    """A word could not be encoded into subword pieces."""


@dataclass(frozen=True)
class SubwordVocab:
    """Special symbol ids of a subword vocabulary."""

    cls_id: int
    sep_id: int
    pad_id: int
    size: int

    def __post_init__(self) -> None:
        if len({self.cls_id, self.sep_id, self.pad_id}) != 3:
            raise ValueError("CLS, SEP and PAD ids must be distinct")


@dataclass(frozen=True)
class EncodedSentence:
    """Cached subword encoding of one sentence.

    `first_subword_index_per_word[k]` is the position of word k's first
    piece in the final model input, i.e. offset by 1 for the leading CLS.
    """

    subword_ids: tuple[int, ...]
    first_subword_index_per_word: tuple[int, ...]

    def __post_init__(self) -> None:
        idxs = self.first_subword_index_per_word
        if any(b <= a for a, b in zip(idxs, idxs[1:])):
            raise ValueError("first-subword indices must be strictly increasing")
        if idxs and idxs[-1] > len(self.subword_ids):
            raise ValueError("first-subword index beyond the encoded sentence")

    @property
    def word_count(self) -> int:
        return len(self.first_subword_index_per_word)


@runtime_checkable
class TaggerBackend(Protocol):
    """Capability needed to tag: tokenize words and score model inputs.

    Implementations must be deterministic given identical inputs, and
    `tokenize` must be context-free per word. `forward` receives a padded
    batch (see inference.Batch) and returns one score matrix of shape
    (word_count, len(labels)) per row, already gathered at each word's
    first subword position.
    """

    vocab: SubwordVocab
    labels: tuple[str, ...]

    def tokenize(self, word: str) -> list[int]: ...

    def forward(self, batch) -> list[np.ndarray]: ...


def encode_sentence_once(
    words: Sequence[Token], backend: TaggerBackend
) -> EncodedSentence:
    """Tokenize a sentence one word at a time and record piece offsets.

    Invokes `backend.tokenize` exactly once per word; the result is reused
    for every predicate of the sentence.
    """
    if not words:
        raise EncodingError("cannot encode an empty sentence")
    ids: list[int] = []
    firsts: list[int] = []
    for word in words:
        pieces = backend.tokenize(word.text)
        if not pieces:
            raise EncodingError(f"word {word.text!r} produced no subwords")
        firsts.append(1 + len(ids))
        ids.extend(pieces)
    return EncodedSentence(tuple(ids), tuple(firsts))


# ---------------------------------------------------------------------------
# Deterministic mock backend
# ---------------------------------------------------------------------------

MOCK_VOCAB = SubwordVocab(cls_id=1, sep_id=2, pad_id=0, size=30522)

MOCK_PIECE_LEN = 4

# Small but representative label inventory over the common PropBank roles.
MOCK_LABELS = ("O",) + tuple(
    f"{p}-{r}"
    for r in ("V", "ARG0", "ARG1", "ARG2", "ARG3",
              "ARGM-TMP", "ARGM-LOC", "ARGM-MNR", "ARGM-ADV")
    for p in ("B", "I")
)


def _digest(*parts: bytes) -> bytes:
    return hashlib.blake2b(b"\x1f".join(parts), digest_size=8).digest()


class MockBackend:
    """Hash-driven stand-in for a transformer tagger.

    Words longer than 4 characters split into consecutive 4-character
    pieces; piece ids are a stable hash avoiding the special ids. Forward
    scores hash the full predicate-conditioned input (real ids, segment
    ids, predicate position, word position), so two assembly paths that
    build identical inputs get identical scores, and any divergence shows.
    Padding columns are masked out before hashing, which keeps scores
    independent of batch composition.
    """

    def __init__(self, seed: int = 0):
        self.vocab = MOCK_VOCAB
        self.labels = MOCK_LABELS
        self._seed = str(seed).encode()

    def tokenize(self, word: str) -> list[int]:
        pieces = [
            word[i:i + MOCK_PIECE_LEN]
            for i in range(0, len(word), MOCK_PIECE_LEN)
        ] or [word]
        return [self._piece_id(p) for p in pieces]

    def _piece_id(self, piece: str) -> int:
        raw = int.from_bytes(_digest(self._seed, piece.encode()), "big")
        return 3 + raw % (self.vocab.size - 3)

    def forward(self, batch) -> list[np.ndarray]:
        out = []
        for row in range(batch.ids.shape[0]):
            n = batch.lengths[row]
            base = _digest(
                self._seed,
                batch.ids[row, :n].tobytes(),
                batch.segment_ids[row, :n].tobytes(),
                str(batch.predicate_word_indices[row]).encode(),
            )
            firsts = batch.first_subword_indices[row]
            scores = np.empty((len(firsts), len(self.labels)))
            for w, pos in enumerate(firsts):
                for l in range(len(self.labels)):
                    h = _digest(base, str(pos).encode(), str(l).encode())
                    scores[w, l] = int.from_bytes(h, "big") / 2**64
            out.append(scores)
        return out


def mock_backend(seed: int = 0) -> MockBackend:
    """Build the seeded deterministic test backend."""
    return MockBackend(seed)


class CountingBackend:
    """Wrapper that counts backend calls for benchmarking and tests."""

    def __init__(self, inner: TaggerBackend):
        self.inner = inner
        self.tokenize_calls = 0
        self.forward_calls = 0
        self.forward_rows = 0

    @property
    def vocab(self) -> SubwordVocab:
        return self.inner.vocab

    @property
    def labels(self) -> tuple[str, ...]:
        return self.inner.labels

    def tokenize(self, word: str) -> list[int]:
        self.tokenize_calls += 1
        return self.inner.tokenize(word)

    def forward(self, batch) -> list[np.ndarray]:
        self.forward_calls += 1
        self.forward_rows += batch.ids.shape[0]
        return self.inner.forward(batch)

    def reset(self) -> None:
        self.tokenize_calls = 0
        self.forward_calls = 0
        self.forward_rows = 0
