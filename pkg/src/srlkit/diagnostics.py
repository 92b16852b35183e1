"""Dependency-aware detection, classification, and repair of repeated
same-role argument spans.

PropBank-style annotation allows each semantic role to open once per
predicate, so two spans of the same role are structurally invalid. When a
dependency parse is available, the configuration of the two fragments says
whether they are pieces of one constituent: both roots sharing a head, one
fragment a prepositional modifier of the other, or one lying inside the
other's subtree. Those cases merge automatically; anything else goes to a
human review queue.
"""

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from srlkit.core import (
    BioSequence,
    BioTag,
    Frame,
    LabeledSpan,
    RoleLabel,
    SrlError,
    Token,
    decode_spans,
    frame_from_bio,
)


class TreeError(SrlError):
    """The dependency tree is malformed (cycle, zero or multiple roots)."""


ROOT = -1

# Relations treated as adposition-mediated attachment. "prep"/"pobj" cover
# Stanford-style parses, "nmod"/"obl" the UD case-marked nominals.
DEFAULT_PP_RELATIONS = frozenset({"prep", "pobj", "nmod", "obl"})


@dataclass(frozen=True)
class DepTree:
    """Per-token head index (ROOT = -1), relation, and part of speech."""

    heads: tuple[int, ...]
    relations: tuple[str, ...]
    pos: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.heads)
        if len(self.relations) != n or len(self.pos) != n:
            raise ValueError("heads, relations and pos must have equal length")
        if any(h != ROOT and not 0 <= h < n for h in self.heads):
            raise ValueError("head index outside sentence")

    def __len__(self) -> int:
        return len(self.heads)

    def check(self) -> None:
        """Raise TreeError unless there is exactly one root and no cycle."""
        roots = [i for i, h in enumerate(self.heads) if h == ROOT]
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, found {len(roots)}")
        for start in range(len(self.heads)):
            seen = set()
            node = start
            while node != ROOT:
                if node in seen:
                    raise TreeError(f"cycle through token {node}")
                seen.add(node)
                node = self.heads[node]

    def ancestors(self, i: int) -> Iterable[int]:
        node = self.heads[i]
        while node != ROOT:
            yield node
            node = self.heads[node]

    def is_descendant(self, node: int, of: int) -> bool:
        """True when `node` lies strictly below `of`."""
        return any(a == of for a in self.ancestors(node))


class ErrorBucket(enum.Enum):
    NO_BUCKET = "NO_BUCKET"
    OTHER_REPEAT = "OTHER_REPEAT"
    SAME_HEAD = "same_head"
    PP_ATTACH = "pp_attach"
    SUBTREE_ATTACH = "subtree_attach"

    @property
    def fixable(self) -> bool:
        return self in (
            ErrorBucket.SAME_HEAD, ErrorBucket.PP_ATTACH, ErrorBucket.SUBTREE_ATTACH
        )


AUTO_MERGED = "auto_merged"
REVIEW_REQUIRED = "review_required"
NO_ACTION = "none"


@dataclass(frozen=True)
class DiagnosisRecord:
    """Outcome for one repeated-span pair of one predicate."""

    predicate_index: int
    role: RoleLabel
    span_pair: tuple[LabeledSpan, LabeledSpan]
    bucket: ErrorBucket
    action: str

    def __post_init__(self) -> None:
        if (self.action == AUTO_MERGED) != self.bucket.fixable:
            raise ValueError("auto_merged exactly for fixable buckets")
        if (self.action == REVIEW_REQUIRED) != (self.bucket is ErrorBucket.OTHER_REPEAT):
            raise ValueError("review_required exactly for OTHER_REPEAT")


def find_repeated_spans(
    frame: Frame,
) -> list[tuple[RoleLabel, tuple[LabeledSpan, LabeledSpan]]]:
    """Consecutive same-role argument span pairs.

    A pair is two spans of one role with nothing but O tokens or the
    predicate's own V span between them; an intervening span of any other
    role breaks adjacency. V itself is never a repeat candidate.
    """
    spans = [s for s in frame.spans if not s.role.is_verb]
    pairs = []
    for i, earlier in enumerate(spans):
        for later in spans[i + 1:]:
            if later.role == earlier.role:
                pairs.append((earlier.role, (earlier, later)))
            break  # only the immediately next argument span can pair
    return pairs


def span_root(span: LabeledSpan, tree: DepTree) -> int:
    """The token inside the span whose head lies outside it.

    Coordination can leave several external attachments; the leftmost wins.
    """
    inside = range(span.start, span.end + 1)
    for i in inside:
        h = tree.heads[i]
        if h == ROOT or not span.start <= h <= span.end:
            return i
    raise TreeError(f"span {span} has no external attachment (cyclic heads)")


def classify_pair(
    pair: tuple[LabeledSpan, LabeledSpan],
    tree: DepTree,
    pp_relations: frozenset[str] = DEFAULT_PP_RELATIONS,
) -> ErrorBucket:
    """Assign one repeated pair to its structural bucket.

    Checked in fixed order pp_attach, same_head, subtree_attach; the first
    match wins, and anything unmatched is OTHER_REPEAT. pp_attach fires
    when either span's root attaches into the other span via an
    adposition-mediated relation, in either direction.
    """
    tree.check()
    a, b = pair
    root_a, root_b = span_root(a, tree), span_root(b, tree)

    def pp_into(root: int, other: LabeledSpan) -> bool:
        head = tree.heads[root]
        return (
            head != ROOT
            and other.start <= head <= other.end
            and tree.relations[root] in pp_relations
        )

    if pp_into(root_b, a) or pp_into(root_a, b):
        return ErrorBucket.PP_ATTACH
    if tree.heads[root_a] == tree.heads[root_b]:
        return ErrorBucket.SAME_HEAD
    if tree.is_descendant(root_a, root_b) or tree.is_descendant(root_b, root_a):
        return ErrorBucket.SUBTREE_ATTACH
    return ErrorBucket.OTHER_REPEAT


def merge_pair(
    seq: BioSequence, pair: tuple[LabeledSpan, LabeledSpan]
) -> BioSequence:
    """Merge two same-role fragments into one continuous span.

    Every token from the earlier start to the later end receives the role:
    B on the first token, I on all others. O gap tokens are absorbed;
    nothing outside the merged window changes.
    """
    earlier, later = sorted(pair, key=lambda s: s.start)
    role = earlier.role
    tags = list(seq.tags)
    tags[earlier.start] = BioTag("B", role)
    for i in range(earlier.start + 1, later.end + 1):
        tags[i] = BioTag("I", role)
    return BioSequence(tuple(tags))


def repair_boundary(seq: BioSequence) -> BioSequence:
    """Promote every span-initial I-X to B-X; nothing else changes."""
    tags = list(seq.tags)
    prev = None
    for i, tag in enumerate(tags):
        if tag.prefix == "I" and (prev is None or prev.role != tag.role or prev.prefix == "O"):
            tags[i] = BioTag("B", tag.role)
        prev = seq.tags[i]
    return BioSequence(tuple(tags))


@dataclass(frozen=True)
class SentenceDiagnosis:
    """Analyzer input: one sentence's predictions plus its parse."""

    sentence_id: int
    words: tuple[Token, ...]
    frames: tuple[tuple[int, BioSequence], ...]
    tree: DepTree | None = None


@dataclass
class AnalysisReport:
    """Bucket histogram in token units plus the full record list."""

    total_tokens: int = 0
    bucket_tokens: dict = field(default_factory=dict)
    records: list[DiagnosisRecord] = field(default_factory=list)
    unanalyzable_sentences: list[int] = field(default_factory=list)
    violations_by_role: dict = field(default_factory=dict)

    def percentages(self) -> dict[str, float]:
        from srlkit.evaluation import round2

        total = self.total_tokens or 1
        return {
            bucket.value: round2(100.0 * self.bucket_tokens.get(bucket, 0) / total)
            for bucket in ErrorBucket
        }

    def to_json_dict(self) -> dict:
        pct = self.percentages()
        return {
            "total_tokens": self.total_tokens,
            "buckets": [
                {
                    "bucket": bucket.value,
                    "tokens": self.bucket_tokens.get(bucket, 0),
                    "pct": pct[bucket.value],
                }
                for bucket in ErrorBucket
            ],
            "unanalyzable_sentences": list(self.unanalyzable_sentences),
            "violations_by_role": dict(sorted(self.violations_by_role.items())),
        }


def _analyze_frame(
    predicate_index: int,
    seq: BioSequence,
    tree: DepTree | None,
    pp_relations: frozenset[str],
) -> tuple[BioSequence, list[DiagnosisRecord]]:
    records: list[DiagnosisRecord] = []
    seen: set[tuple] = set()
    while True:
        pairs = find_repeated_spans(frame_from_bio(predicate_index, seq))
        merged_this_round = False
        for role, (a, b) in pairs:
            key = (role.text, a.start, a.end, b.start, b.end)
            if key in seen:
                continue
            seen.add(key)
            if tree is None:
                bucket, action = ErrorBucket.NO_BUCKET, NO_ACTION
            else:
                try:
                    bucket = classify_pair((a, b), tree, pp_relations)
                except TreeError:
                    bucket = ErrorBucket.OTHER_REPEAT
                action = AUTO_MERGED if bucket.fixable else (
                    REVIEW_REQUIRED if bucket is ErrorBucket.OTHER_REPEAT else NO_ACTION
                )
            records.append(
                DiagnosisRecord(predicate_index, role, (a, b), bucket, action)
            )
            if action == AUTO_MERGED:
                seq = merge_pair(seq, (a, b))
                merged_this_round = True
                break  # re-derive spans before looking further
        if not merged_this_round:
            return seq, records


def analyze_corpus(
    sentences: Iterable[SentenceDiagnosis],
    pp_relations: frozenset[str] = DEFAULT_PP_RELATIONS,
) -> tuple[list[SentenceDiagnosis], AnalysisReport]:
    """Merge fixable repeats, queue the rest, and build the bucket report.

    Token accounting: every token of both spans of a classified pair counts
    toward that pair's bucket (deduplicated per frame and bucket); all
    remaining tokens fall under NO_BUCKET. Sentences lacking a tree have
    their pairs reported but unclassified and are listed as unanalyzable.
    """
    from srlkit.core import validate_bio

    report = AnalysisReport(bucket_tokens={bucket: 0 for bucket in ErrorBucket})
    fixed_sentences: list[SentenceDiagnosis] = []
    for sent in sentences:
        fixed_frames = []
        for predicate_index, seq in sent.frames:
            report.total_tokens += len(seq)
            for violation in validate_bio(seq):
                key = violation.role.text
                report.violations_by_role[key] = (
                    report.violations_by_role.get(key, 0) + 1
                )
            new_seq, records = _analyze_frame(
                predicate_index, seq, sent.tree, pp_relations
            )
            if sent.tree is None and any(r for r in records):
                report.unanalyzable_sentences.append(sent.sentence_id)
            report.records.extend(records)
            bucket_positions: dict[ErrorBucket, set[int]] = {}
            for rec in records:
                positions = bucket_positions.setdefault(rec.bucket, set())
                for span in rec.span_pair:
                    positions.update(range(span.start, span.end + 1))
            for bucket, positions in bucket_positions.items():
                report.bucket_tokens[bucket] += len(positions)
            fixed_frames.append((predicate_index, new_seq))
        fixed_sentences.append(
            SentenceDiagnosis(sent.sentence_id, sent.words, tuple(fixed_frames), sent.tree)
        )
    classified = sum(
        tokens for bucket, tokens in report.bucket_tokens.items()
        if bucket is not ErrorBucket.NO_BUCKET
    )
    report.bucket_tokens[ErrorBucket.NO_BUCKET] = report.total_tokens - classified
    return fixed_sentences, report


def read_conllu(path: str) -> list[DepTree]:
    """Load dependency trees from CoNLL-U text (10 columns, 1-based heads)."""
    trees = []
    heads: list[int] = []
    relations: list[str] = []
    pos: list[str] = []

    def flush():
        nonlocal heads, relations, pos
        if heads:
            trees.append(DepTree(tuple(heads), tuple(relations), tuple(pos)))
            heads, relations, pos = [], [], []

    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line.strip():
                flush()
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) == 1:
                cols = line.split()
            if "-" in cols[0] or "." in cols[0]:
                continue  # multiword token / empty node rows
            head = int(cols[6])
            heads.append(ROOT if head == 0 else head - 1)
            relations.append(cols[7])
            pos.append(cols[3])
    flush()
    return trees
