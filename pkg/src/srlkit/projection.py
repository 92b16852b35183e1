"""Cross-lingual transfer of BIO annotations through word alignments.

Source-side sequences are repaired first (fragment merging when trees are
available, boundary promotion always), then each aligned target token
inherits its source token's tag. Unaligned target tokens stay O, and the
projected sequence is boundary-repaired so every span opens with B.
"""

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from srlkit.core import BioSequence, OUTSIDE, SrlError, Token
from srlkit.diagnostics import (
    DepTree,
    SentenceDiagnosis,
    analyze_corpus,
    repair_boundary,
)


class ProjectionError(SrlError):
    """Sentence streams for projection do not line up."""


@dataclass(frozen=True)
class Alignment:
    """A set of (source index, target index) links; duplicates removed."""

    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Alignment":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    def __len__(self) -> int:
        return len(self.pairs)


class OneToOneResult(NamedTuple):
    alignment: Alignment
    dropped: frozenset


def enforce_one_to_one(align: Alignment) -> OneToOneResult:
    """Thin a many-to-many alignment down to a one-to-one mapping.

    Links are granted greedily in order of |i - j| (closest first, then
    smaller source, then smaller target); a link is kept only while both
    its endpoints are unused. The policy is deliberately replaceable: it is
    one deterministic way to pick among conflicting links, not a claim
    about alignment quality.
    """
    kept: list[tuple[int, int]] = []
    used_src: set[int] = set()
    used_tgt: set[int] = set()
    for i, j in sorted(align.pairs, key=lambda p: (abs(p[0] - p[1]), p[0], p[1])):
        if i in used_src or j in used_tgt:
            continue
        kept.append((i, j))
        used_src.add(i)
        used_tgt.add(j)
    kept_set = frozenset(kept)
    return OneToOneResult(Alignment(kept_set), frozenset(align.pairs - kept_set))


def project_tags(
    src_seq: BioSequence, align: Alignment, target_len: int
) -> BioSequence:
    """Copy tags across an injective alignment and repair boundaries."""
    tags = [OUTSIDE] * target_len
    seen_tgt = set()
    for i, j in align.pairs:
        if j in seen_tgt:
            raise ProjectionError(f"alignment is not injective at target {j}")
        seen_tgt.add(j)
        if not 0 <= i < len(src_seq) or not 0 <= j < target_len:
            raise ProjectionError(f"alignment link {i}-{j} out of range")
        tags[j] = src_seq[i]
    return repair_boundary(BioSequence(tuple(tags)))


@dataclass(frozen=True)
class ProjectedSentence:
    """Projection output for one sentence pair."""

    sentence_id: int
    target_words: tuple[Token, ...]
    frames: tuple[tuple[int, int | None, BioSequence], ...]
    provenance: tuple[int | None, ...]


def provenance_of(align: Alignment, target_len: int) -> tuple[int | None, ...]:
    by_target: dict[int, int] = {j: i for i, j in align.pairs}
    return tuple(by_target.get(j) for j in range(target_len))


def project_corpus(
    source: Sequence[SentenceDiagnosis],
    alignments: Sequence[Alignment],
    targets: Sequence[Sequence[Token]],
    use_trees: bool = True,
) -> tuple[list[ProjectedSentence], list[tuple[int, str]]]:
    """Repair source frames, then project each one onto its target sentence.

    Sentences are matched positionally; a missing alignment or target for a
    source sentence is reported and skipped rather than fatal. Returns the
    projected sentences plus the skip records.
    """
    skipped: list[tuple[int, str]] = []
    out: list[ProjectedSentence] = []

    if use_trees and any(s.tree is not None for s in source):
        source, _ = analyze_corpus(list(source))

    for pos, sent in enumerate(source):
        if pos >= len(alignments) or pos >= len(targets):
            skipped.append((sent.sentence_id, "no aligned target sentence"))
            continue
        one_to_one = enforce_one_to_one(alignments[pos]).alignment
        target_words = tuple(targets[pos])
        by_source = {i: j for i, j in one_to_one.pairs}
        frames = []
        for predicate_index, seq in sent.frames:
            repaired = repair_boundary(seq)
            projected = project_tags(repaired, one_to_one, len(target_words))
            frames.append((predicate_index, by_source.get(predicate_index), projected))
        out.append(
            ProjectedSentence(
                sentence_id=sent.sentence_id,
                target_words=target_words,
                frames=tuple(frames),
                provenance=provenance_of(one_to_one, len(target_words)),
            )
        )
    return out, skipped


def read_pharaoh(path: str) -> list[Alignment]:
    """Read Pharaoh-format alignments: one "i-j i-j ..." line per sentence."""
    alignments = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            pairs = []
            for chunk in line.split():
                i, j = chunk.split("-")
                pairs.append((int(i), int(j)))
            alignments.append(Alignment.from_pairs(pairs))
    return alignments


def read_token_lines(path: str) -> list[tuple[Token, ...]]:
    """Read one whitespace-tokenized sentence per line."""
    sentences = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            texts = line.split()
            sentences.append(tuple(Token(t, i) for i, t in enumerate(texts)))
    return sentences
