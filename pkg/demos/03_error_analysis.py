"""Dependency-aware repair of repeated same-role spans.

PropBank allows each role to open once per predicate, so two ARG1 spans
for one verb are structurally invalid. Given a dependency parse, the
analyzer decides whether the fragments are really one constituent (shared
head, prepositional modification, subtree containment) and merges those
automatically; anything else is queued for human review.
"""

from srlkit.core import BioSequence, Token
from srlkit.diagnostics import (
    DepTree,
    ROOT,
    SentenceDiagnosis,
    analyze_corpus,
    repair_boundary,
)

# "a long section of road": the model split one ARG1 into two fragments.
words = tuple(Token(t, i) for i, t in enumerate(
    ["a", "long", "section", "of", "road", "collapsed"]
))
predicted = BioSequence.from_strings(
    ["B-ARG1", "I-ARG1", "I-ARG1", "B-ARG1", "I-ARG1", "B-V"]
)
tree = DepTree(
    heads=(2, 2, 5, 4, 2, ROOT),
    relations=("det", "amod", "nsubj", "case", "nmod", "root"),
    pos=("DET", "ADJ", "NOUN", "ADP", "NOUN", "VERB"),
)

fixed, report = analyze_corpus(
    [SentenceDiagnosis(0, words, ((5, predicted),), tree)]
)
(record,) = report.records
print("detected pair:", [(s.start, s.end) for s in record.span_pair])
print("bucket:       ", record.bucket.value)
print("action:       ", record.action)
print("before:       ", " ".join(predicted.to_strings()))
print("after:        ", " ".join(fixed[0].frames[0][1].to_strings()))

print()
for bucket, tokens in report.bucket_tokens.items():
    print(f"  {bucket.value:<16} {tokens:>3} tokens")

# Boundary repair is the other half: a span that opens with I gets its B back.
broken = BioSequence.from_strings(
    ["I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP"]
)
print("\nboundary repair:", repair_boundary(broken).to_strings()[0], "...")
