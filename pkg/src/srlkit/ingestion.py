"""Column-format gold annotations to per-predicate JSON instances.

Input is a simplified CoNLL-style layout: blank-line-separated sentences,
one token per row, first field the surface form, every following field one
predicate's span annotation in bracket notation ("(ARG0*" opens, "*)"
closes, "(V*)" is a single-token predicate). Malformed sentences are
skipped and accounted for, never fatal.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from srlkit.core import (
    BioSequence,
    LabeledSpan,
    RoleLabel,
    SrlError,
    SrlInstance,
    Token,
    encode_spans,
)


class ColumnFormatError(SrlError):
    """A sentence block violates the column or bracket grammar."""


# Trace/null placeholders removed from the token stream. "*..." covers
# empty-category markers like *T*-1 or *PRO*; "%" covers bare percent
# artifacts. Override with your own regexes when a corpus needs more.
DEFAULT_ARTIFACT_PATTERNS = (r"\*.*", r"%")

_CELL_RE = re.compile(r"^((?:\([A-Za-z0-9\-]+)*)\*(\)*)$")


def compile_artifact_patterns(patterns: Iterable[str]) -> list[re.Pattern]:
    return [re.compile(p) for p in patterns]


def is_artifact(text: str, compiled: list[re.Pattern]) -> bool:
    return any(p.fullmatch(text) for p in compiled)


def clean_tokens(
    raw: list[str], patterns: Iterable[str] = DEFAULT_ARTIFACT_PATTERNS
) -> list[Token]:
    """Drop trace/null placeholder tokens and re-pack indices densely."""
    compiled = compile_artifact_patterns(patterns)
    kept = [t for t in raw if not is_artifact(t, compiled)]
    return [Token(t, i) for i, t in enumerate(kept)]


@dataclass(frozen=True)
class ColumnSentence:
    """One sentence block: rows of (form, annotation cells)."""

    rows: tuple[tuple[str, tuple[str, ...]], ...]
    predicate_count: int

    @classmethod
    def from_lines(cls, lines: list[str]) -> "ColumnSentence":
        rows = []
        width = None
        for line in lines:
            fields = line.split()
            if not fields:
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ColumnFormatError(
                    f"ragged row: expected {width} fields, got {len(fields)}"
                )
            rows.append((fields[0], tuple(fields[1:])))
        if not rows:
            raise ColumnFormatError("empty sentence block")
        return cls(tuple(rows), width - 1)


def _column_spans(cells: list[str]) -> list[LabeledSpan]:
    """Outermost spans of one annotation column; nesting is flattened."""
    stack: list[tuple[RoleLabel, int]] = []
    spans: list[LabeledSpan] = []
    for i, cell in enumerate(cells):
        m = _CELL_RE.match(cell)
        if not m:
            raise ColumnFormatError(f"bad annotation cell: {cell!r}")
        opens = [RoleLabel.parse(r) for r in re.findall(r"\(([A-Za-z0-9\-]+)", m.group(1))]
        closes = len(m.group(2))
        for role in opens:
            stack.append((role, i))
        for _ in range(closes):
            if not stack:
                raise ColumnFormatError(f"unbalanced brackets: extra close at row {i}")
            role, start = stack.pop()
            if not stack:
                spans.append(LabeledSpan(role, start, i))
    if stack:
        raise ColumnFormatError(
            f"unbalanced brackets: {len(stack)} span(s) never closed"
        )
    return spans


def _remap_spans(
    spans: list[LabeledSpan], old_to_new: dict[int, int], n_rows: int
) -> list[LabeledSpan]:
    """Clip spans to the surviving rows after artifact removal."""
    out = []
    for span in spans:
        starts = [old_to_new[i] for i in range(span.start, span.end + 1) if i in old_to_new]
        if not starts:
            continue  # the whole span was artifact material
        out.append(LabeledSpan(span.role, starts[0], starts[-1]))
    return out


def parse_column_annotations(
    sent: ColumnSentence,
    patterns: Iterable[str] = DEFAULT_ARTIFACT_PATTERNS,
) -> list[SrlInstance]:
    """One SrlInstance per predicate column.

    Raises ColumnFormatError on unbalanced brackets, a missing (V*, or a
    predicate sitting on an artifact row; callers skip the sentence and
    record the reason.
    """
    compiled = compile_artifact_patterns(patterns)
    forms = [form for form, _ in sent.rows]
    old_to_new = {}
    for i, form in enumerate(forms):
        if not is_artifact(form, compiled):
            old_to_new[i] = len(old_to_new)
    words = tuple(
        Token(forms[i], new) for i, new in sorted(old_to_new.items())
    )
    if not words:
        raise ColumnFormatError("sentence empty after artifact removal")

    instances = []
    for col in range(sent.predicate_count):
        cells = [row_cells[col] for _, row_cells in sent.rows]
        spans = _column_spans(cells)
        verb_spans = [s for s in spans if s.role.is_verb]
        if len(verb_spans) != 1:
            raise ColumnFormatError(
                f"column {col}: expected exactly one (V* span, got {len(verb_spans)}"
            )
        if verb_spans[0].start not in old_to_new:
            raise ColumnFormatError(
                f"column {col}: predicate row is an artifact token"
            )
        predicate_word_idx = old_to_new[verb_spans[0].start]
        mapped = _remap_spans(spans, old_to_new, len(forms))
        labels = encode_spans(mapped, len(words))
        instances.append(SrlInstance(words, predicate_word_idx, labels))
    return instances


@dataclass(frozen=True)
class SentenceParse:
    """Per-sentence parse outcome: instances, or a skip reason."""

    sentence_id: int
    instances: tuple[SrlInstance, ...]
    skip_reason: str | None = None


@dataclass(frozen=True)
class IngestReport:
    sentences_read: int
    instances_emitted: int
    sentences_skipped: int
    skip_reasons: tuple[tuple[int, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "sentences_read": self.sentences_read,
            "instances_emitted": self.instances_emitted,
            "sentences_skipped": self.sentences_skipped,
            "skip_reasons": [
                {"sentence": sid, "reason": why} for sid, why in self.skip_reasons
            ],
        }


def read_column_blocks(text: str) -> Iterator[list[str]]:
    """Split file text into sentence blocks on blank lines."""
    block: list[str] = []
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            block.append(line)
        elif block:
            yield block
            block = []
    if block:
        yield block


def parse_corpus(
    blocks: Iterable[list[str]],
    patterns: Iterable[str] = DEFAULT_ARTIFACT_PATTERNS,
) -> Iterator[SentenceParse]:
    """Parse every sentence block, converting failures into skip records."""
    for sid, lines in enumerate(blocks):
        try:
            sent = ColumnSentence.from_lines(lines)
            yield SentenceParse(sid, tuple(parse_column_annotations(sent, patterns)))
        except SrlError as exc:
            yield SentenceParse(sid, (), skip_reason=str(exc))


def emit_instances(parsed: Iterable[SentenceParse], sink: TextIO) -> IngestReport:
    """Write one JSON line per instance and account for every sentence."""
    read = emitted = skipped = 0
    reasons: list[tuple[int, str]] = []
    for result in parsed:
        read += 1
        if result.skip_reason is not None:
            skipped += 1
            reasons.append((result.sentence_id, result.skip_reason))
            continue
        for inst in result.instances:
            sink.write(json.dumps(inst.to_json_dict(), ensure_ascii=False) + "\n")
            emitted += 1
    return IngestReport(read, emitted, skipped, tuple(reasons))


def ingest_file(
    input_path: str,
    output_path: str,
    patterns: Iterable[str] = DEFAULT_ARTIFACT_PATTERNS,
) -> IngestReport:
    with open(input_path, encoding="utf-8") as f:
        blocks = list(read_column_blocks(f.read()))
    with open(output_path, "w", encoding="utf-8") as out:
        return emit_instances(parse_corpus(blocks, patterns), out)
