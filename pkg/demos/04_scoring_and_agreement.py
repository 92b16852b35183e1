"""Span scoring, system agreement, and missing-role analysis.

Exact-match P/R/F1 is the CoNLL convention: a predicted span counts only
when role, start, and end all match a gold span of the same predicate. The
agreement partition compares two systems token by token against gold, and
missing_roles asks which gold roles a system fails to cover at all.
"""

from srlkit.core import BioSequence, frame_from_bio
from srlkit.evaluation import agreement_partition, missing_roles, score_spans

gold_tags = ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "O"]
pred_tags = ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "I-ARG1"]  # end off by one

gold = [frame_from_bio(1, BioSequence.from_strings(gold_tags))]
pred = [frame_from_bio(1, BioSequence.from_strings(pred_tags))]

report = score_spans(pred, gold)
print(f"P={report.precision:.2f}  R={report.recall:.2f}  F1={report.f1:.2f}")
print("the shifted ARG1 end is both a false positive and a false negative")

# Token-level agreement of two systems measured against gold.
sys_a = ["B-ARG0", "B-V", "O", "B-ARG1", "I-ARG1", "O"]
sys_b = ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "O"]
gold_stream = ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "O"]
agreement = agreement_partition(sys_a, sys_b, gold_stream)
d = agreement.to_json_dict()
print("\nagreement cells:")
print("  both correct:", d["agreement"]["both_correct"])
print("  b correct:   ", d["disagreement"]["b_correct"])

# Which gold roles does a system miss outright?
pred_missing = [frame_from_bio(1, BioSequence.from_strings(
    ["B-ARG0", "B-V", "O", "O", "O", "O"]
))]
misses = missing_roles(pred_missing, gold)
print("\nmissing roles:", misses.to_json_dict()["by_role"])
