"""Domain types and the BIO span algebra shared by every other module.

All types here are immutable after construction and safe to share across
threads. Tag strings follow the usual PropBank surface forms: "B-ARG0",
"I-ARGM-TMP", "O", with optional "C-"/"R-" continuation/reference prefixes
on the role.
"""

from dataclasses import dataclass, field


class SrlError(Exception):
    """Base class for errors raised by this package."""


class SpanOverlapError(SrlError):
    """Two spans that must not overlap do."""


class SpanBoundsError(SrlError):
    """A span or index falls outside the sentence."""


CORE_ROLES = ("ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "ARG5", "ARGA")

# Known ARGM functions. The inventory is open: unknown functions still parse,
# so rare corpus labels never crash ingestion.
MODIFIER_FUNCS = (
    "TMP", "LOC", "MNR", "ADV", "PRD", "DIS", "NEG", "MOD", "DIR", "EXT",
    "PRP", "PNC", "CAU", "ADJ", "COM", "DSP", "GOL", "LVB", "REC", "PRR",
)


@dataclass(frozen=True)
class Token:
    """One word of a sentence: surface text plus 0-based position."""

    text: str
    index: int

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("token text must be non-empty")
        if any(ch.isspace() for ch in self.text):
            raise ValueError(f"token text contains whitespace: {self.text!r}")
        if self.index < 0:
            raise ValueError(f"token index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class RoleLabel:
    """A semantic role: V, a core argument, or an ARGM modifier.

    `link` holds "C" (continuation) or "R" (reference) when present.
    `func` is the modifier function and is set exactly when base == "ARGM".
    """

    base: str
    func: str | None = None
    link: str | None = None

    def __post_init__(self) -> None:
        if self.base == "ARGM":
            if not self.func:
                raise ValueError("ARGM role requires a function, e.g. ARGM-TMP")
        elif self.base == "V" or self.base in CORE_ROLES:
            if self.func is not None:
                raise ValueError(f"role {self.base} cannot carry a function")
        else:
            raise ValueError(f"unknown role base: {self.base!r}")
        if self.link not in (None, "C", "R"):
            raise ValueError(f"link prefix must be C or R, got {self.link!r}")

    @classmethod
    def parse(cls, text: str) -> "RoleLabel":
        """Parse a canonical role string such as "ARG0" or "R-ARGM-TMP"."""
        link = None
        rest = text
        if rest.startswith(("C-", "R-")):
            link, rest = rest[0], rest[2:]
        if rest.startswith("ARGM-"):
            return cls("ARGM", rest[5:], link)
        return cls(rest, None, link)

    @property
    def text(self) -> str:
        body = f"ARGM-{self.func}" if self.base == "ARGM" else self.base
        return f"{self.link}-{body}" if self.link else body

    @property
    def is_verb(self) -> bool:
        return self.base == "V" and self.link is None

    @property
    def is_modifier(self) -> bool:
        return self.base == "ARGM"

    def __str__(self) -> str:
        return self.text


VERB = RoleLabel("V")


@dataclass(frozen=True)
class BioTag:
    """One BIO tag: B-<role>, I-<role>, or O (which carries no role)."""

    prefix: str
    role: RoleLabel | None

    def __post_init__(self) -> None:
        if self.prefix not in ("B", "I", "O"):
            raise ValueError(f"bad BIO prefix: {self.prefix!r}")
        if (self.prefix == "O") != (self.role is None):
            raise ValueError("O carries no role; B/I require one")

    @classmethod
    def parse(cls, text: str) -> "BioTag":
        if text == "O":
            return OUTSIDE
        if len(text) > 2 and text[1] == "-" and text[0] in ("B", "I"):
            return cls(text[0], RoleLabel.parse(text[2:]))
        raise ValueError(f"bad BIO tag: {text!r}")

    @property
    def text(self) -> str:
        return "O" if self.role is None else f"{self.prefix}-{self.role.text}"

    def __str__(self) -> str:
        return self.text


OUTSIDE = BioTag("O", None)


@dataclass(frozen=True)
class BioSequence:
    """A per-word tag sequence. Need not be valid: orphan I-X tags are
    tolerated and handled by `decode_spans` under the documented repair
    convention."""

    tags: tuple[BioTag, ...]

    @classmethod
    def from_strings(cls, texts: list[str] | tuple[str, ...]) -> "BioSequence":
        return cls(tuple(BioTag.parse(t) for t in texts))

    def to_strings(self) -> list[str]:
        return [t.text for t in self.tags]

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self):
        return iter(self.tags)

    def __getitem__(self, i: int) -> BioTag:
        return self.tags[i]


@dataclass(frozen=True)
class LabeledSpan:
    """A role-labeled token interval, inclusive on both ends."""

    role: RoleLabel
    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise SpanBoundsError(
                f"bad span bounds: start={self.start}, end={self.end}"
            )

    def __len__(self) -> int:
        return self.end - self.start + 1

    def overlaps(self, other: "LabeledSpan") -> bool:
        return self.start <= other.end and other.start <= self.end


@dataclass(frozen=True)
class Frame:
    """All spans predicted (or annotated) for one predicate.

    Construction rejects overlapping spans. Gold frames additionally carry
    exactly one V span; model output may not, so that property is exposed as
    `has_unique_verb` rather than enforced here.
    """

    predicate_index: int
    spans: tuple[LabeledSpan, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.spans, key=lambda s: (s.start, s.end)))
        object.__setattr__(self, "spans", ordered)
        for a, b in zip(ordered, ordered[1:]):
            if a.overlaps(b):
                raise SpanOverlapError(f"overlapping spans: {a} / {b}")

    @property
    def has_unique_verb(self) -> bool:
        return sum(1 for s in self.spans if s.role.is_verb) == 1

    def verb_span(self) -> LabeledSpan | None:
        for s in self.spans:
            if s.role.is_verb:
                return s
        return None


@dataclass(frozen=True)
class SrlInstance:
    """One predicate's view of a sentence: tokens, predicate index, labels."""

    words: tuple[Token, ...]
    predicate_word_idx: int
    labels: BioSequence

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.words):
            raise ValueError(
                f"{len(self.labels)} labels for {len(self.words)} words"
            )
        if not 0 <= self.predicate_word_idx < len(self.words):
            raise SpanBoundsError(
                f"predicate index {self.predicate_word_idx} outside sentence"
            )

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SrlInstance":
        words = tuple(Token(w, i) for i, w in enumerate(obj["words"]))
        return cls(
            words=words,
            predicate_word_idx=int(obj["predicate_word_idx"]),
            labels=BioSequence.from_strings(obj["labels"]),
        )

    def to_json_dict(self) -> dict:
        return {
            "words": [w.text for w in self.words],
            "predicate_word_idx": self.predicate_word_idx,
            "labels": self.labels.to_strings(),
        }


def decode_spans(seq: BioSequence) -> list[LabeledSpan]:
    """Convert a BIO sequence to labeled spans.

    Total on every input: an I-X with no open X span (an orphan) opens a new
    span exactly as B-X would, mirroring the boundary-repair convention used
    elsewhere in the toolkit.

    >>> [str(s.role) for s in decode_spans(BioSequence.from_strings(
    ...     ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "O"]))]
    ['ARG0', 'V', 'ARG2', 'ARG1']
    """
    spans: list[LabeledSpan] = []
    open_role: RoleLabel | None = None
    open_start = 0
    for i, tag in enumerate(seq):
        opens = tag.prefix == "B" or (
            tag.prefix == "I" and tag.role != open_role
        )
        if tag.prefix == "O" or opens:
            if open_role is not None:
                spans.append(LabeledSpan(open_role, open_start, i - 1))
                open_role = None
        if opens:
            open_role = tag.role
            open_start = i
    if open_role is not None:
        spans.append(LabeledSpan(open_role, open_start, len(seq) - 1))
    return spans


def encode_spans(spans: list[LabeledSpan], length: int) -> BioSequence:
    """Render spans back into a valid BIO sequence of the given length.

    Inverse of `decode_spans` on valid sequences.

    >>> encode_spans([LabeledSpan(RoleLabel.parse("ARG1"), 3, 4)], 6).to_strings()
    ['O', 'O', 'O', 'B-ARG1', 'I-ARG1', 'O']
    """
    ordered = sorted(spans, key=lambda s: s.start)
    for a, b in zip(ordered, ordered[1:]):
        if a.overlaps(b):
            raise SpanOverlapError(f"overlapping spans: {a} / {b}")
    tags = [OUTSIDE] * length
    for span in ordered:
        if span.end >= length:
            raise SpanBoundsError(f"span {span} exceeds length {length}")
        tags[span.start] = BioTag("B", span.role)
        for i in range(span.start + 1, span.end + 1):
            tags[i] = BioTag("I", span.role)
    return BioSequence(tuple(tags))


ORPHAN_I = "orphan_i"
DUPLICATE_ROLE = "duplicate_role"


@dataclass(frozen=True)
class BioViolation:
    """One structural problem in a tag sequence."""

    position: int
    kind: str
    role: RoleLabel


def validate_bio(seq: BioSequence) -> list[BioViolation]:
    """Report structural violations without repairing anything.

    Two kinds are flagged: an I-X not preceded by B-X/I-X of the same role
    (orphan), and a second B-X opening for a role string already opened in
    the frame (duplicate). Duplicates are matched on the full role string,
    so C-ARG1 and ARG1 never collide.
    """
    violations: list[BioViolation] = []
    prev: BioTag = OUTSIDE
    seen_openers: set[str] = set()
    for i, tag in enumerate(seq):
        if tag.prefix == "I":
            if prev.prefix == "O" or prev.role != tag.role:
                violations.append(BioViolation(i, ORPHAN_I, tag.role))
        if tag.prefix == "B":
            key = tag.role.text
            if key in seen_openers:
                violations.append(BioViolation(i, DUPLICATE_ROLE, tag.role))
            seen_openers.add(key)
        prev = tag
    return violations


def frame_from_bio(predicate_index: int, seq: BioSequence) -> Frame:
    """Decode a tag sequence into a Frame for the given predicate."""
    return Frame(predicate_index, tuple(decode_spans(seq)))
