"""Span-level scoring, two-system agreement partitions, and missing-role
distributions.

Scoring follows the CoNLL convention: a predicted span is a true positive
exactly when a gold span with the same role, start, and end exists for the
same predicate. V spans are excluded by default, and C-/R- prefixed roles
are scored as labels of their own unless folding is requested.
"""

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from srlkit.core import Frame, LabeledSpan, RoleLabel, SrlError


class FrameAlignmentError(SrlError):
    """Predicted and gold frames disagree on sentences or predicates."""


def round2(x: float) -> float:
    """Round half up to two decimals, the convention used in all reports."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _span_key(span: LabeledSpan, fold_cr: bool) -> tuple[str, int, int]:
    role = span.role
    if fold_cr and role.link is not None:
        role = RoleLabel(role.base, role.func, None)
    return (role.text, span.start, span.end)


def _frame_keys(frame: Frame, include_v: bool, fold_cr: bool) -> set:
    return {
        _span_key(s, fold_cr)
        for s in frame.spans
        if include_v or not s.role.is_verb
    }


@dataclass(frozen=True)
class ScoreReport:
    precision: float
    recall: float
    f1: float
    true_positives: int
    predicted_spans: int
    gold_spans: int

    def to_json_dict(self) -> dict:
        return {
            "precision": round2(self.precision),
            "recall": round2(self.recall),
            "f1": round2(self.f1),
            "true_positives": self.true_positives,
            "predicted_spans": self.predicted_spans,
            "gold_spans": self.gold_spans,
        }


def score_spans(
    pred: Sequence[Frame],
    gold: Sequence[Frame],
    include_v: bool = False,
    fold_cr: bool = False,
) -> ScoreReport:
    """Micro-averaged exact-match P/R/F1 over aligned frame lists."""
    if len(pred) != len(gold):
        raise FrameAlignmentError(
            f"{len(pred)} predicted frames vs {len(gold)} gold frames"
        )
    mismatched = [
        i for i, (p, g) in enumerate(zip(pred, gold))
        if p.predicate_index != g.predicate_index
    ]
    if mismatched:
        raise FrameAlignmentError(f"predicate mismatch at positions {mismatched}")

    tp = n_pred = n_gold = 0
    for p, g in zip(pred, gold):
        pk = _frame_keys(p, include_v, fold_cr)
        gk = _frame_keys(g, include_v, fold_cr)
        tp += len(pk & gk)
        n_pred += len(pk)
        n_gold += len(gk)
    precision = 100.0 * tp / n_pred if n_pred else 0.0
    recall = 100.0 * tp / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ScoreReport(precision, recall, f1, tp, n_pred, n_gold)


@dataclass(frozen=True)
class AgreementCell:
    count: int
    pct_within: float
    pct_total: float


@dataclass(frozen=True)
class AgreementReport:
    """Token partition over two systems measured against gold.

    Agreement tokens (a == b) split into both_correct/both_wrong;
    disagreement tokens into a_correct/b_correct/neither.
    """

    total: int
    agreement: int
    disagreement: int
    both_correct: AgreementCell
    both_wrong: AgreementCell
    a_correct: AgreementCell
    b_correct: AgreementCell
    neither: AgreementCell

    def to_json_dict(self) -> dict:
        def cell(c: AgreementCell) -> dict:
            return {
                "count": c.count,
                "pct_within": round2(c.pct_within),
                "pct_total": round2(c.pct_total),
            }

        total = self.total or 1
        return {
            "total_tokens": self.total,
            "agreement": {
                "tokens": self.agreement,
                "pct_total": round2(100.0 * self.agreement / total),
                "both_correct": cell(self.both_correct),
                "both_wrong": cell(self.both_wrong),
            },
            "disagreement": {
                "tokens": self.disagreement,
                "pct_total": round2(100.0 * self.disagreement / total),
                "a_correct": cell(self.a_correct),
                "b_correct": cell(self.b_correct),
                "neither": cell(self.neither),
            },
        }


def agreement_partition(
    sys_a: Sequence[str], sys_b: Sequence[str], gold: Sequence[str]
) -> AgreementReport:
    """Partition every token into one of the five agreement cells."""
    if not (len(sys_a) == len(sys_b) == len(gold)):
        raise FrameAlignmentError(
            f"stream lengths differ: {len(sys_a)}/{len(sys_b)}/{len(gold)}"
        )
    counts = {"both_correct": 0, "both_wrong": 0,
              "a_correct": 0, "b_correct": 0, "neither": 0}
    for a, b, g in zip(sys_a, sys_b, gold):
        if a == b:
            counts["both_correct" if a == g else "both_wrong"] += 1
        elif a == g:
            counts["a_correct"] += 1
        elif b == g:
            counts["b_correct"] += 1
        else:
            counts["neither"] += 1

    total = len(gold)
    agreement = counts["both_correct"] + counts["both_wrong"]
    disagreement = total - agreement

    def cell(name: str, within: int) -> AgreementCell:
        c = counts[name]
        return AgreementCell(
            count=c,
            pct_within=100.0 * c / within if within else 0.0,
            pct_total=100.0 * c / total if total else 0.0,
        )

    return AgreementReport(
        total=total,
        agreement=agreement,
        disagreement=disagreement,
        both_correct=cell("both_correct", agreement),
        both_wrong=cell("both_wrong", agreement),
        a_correct=cell("a_correct", disagreement),
        b_correct=cell("b_correct", disagreement),
        neither=cell("neither", disagreement),
    )


@dataclass(frozen=True)
class MissingRoleReport:
    """Gold spans with no same-role overlapping prediction, by role."""

    total_missing: int
    by_role: dict
    argm_breakdown: dict

    def to_json_dict(self) -> dict:
        total = self.total_missing or 1
        argm_total = sum(self.argm_breakdown.values()) or 1
        return {
            "total_missing": self.total_missing,
            "by_role": {
                role: {"count": n, "pct": round2(100.0 * n / total)}
                for role, n in sorted(
                    self.by_role.items(), key=lambda kv: (-kv[1], kv[0])
                )
            },
            "argm_breakdown": {
                role: {"count": n, "pct": round2(100.0 * n / argm_total)}
                for role, n in sorted(
                    self.argm_breakdown.items(), key=lambda kv: (-kv[1], kv[0])
                )
            },
        }


def missing_roles(
    pred: Sequence[Frame], gold: Sequence[Frame]
) -> MissingRoleReport:
    """Histogram of gold spans missed entirely by the predictions.

    A gold span is missing when no predicted span of the same role overlaps
    it; boundary errors with the right role do not count as misses here.
    """
    if len(pred) != len(gold):
        raise FrameAlignmentError(
            f"{len(pred)} predicted frames vs {len(gold)} gold frames"
        )
    by_role: dict[str, int] = {}
    argm: dict[str, int] = {}
    total = 0
    for p, g in zip(pred, gold):
        for gold_span in g.spans:
            same_role = [s for s in p.spans if s.role == gold_span.role]
            if any(s.overlaps(gold_span) for s in same_role):
                continue
            total += 1
            key = gold_span.role.text
            by_role[key] = by_role.get(key, 0) + 1
            if gold_span.role.is_modifier:
                argm[key] = argm.get(key, 0) + 1
    return MissingRoleReport(total, by_role, argm)
