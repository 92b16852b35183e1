"""Cross-lingual projection: repair the source, thin the alignment, transfer.

Word aligners emit many-to-many links; projection needs one-to-one. The
enforcement step keeps the closest links greedily and reports what it
dropped. Tags then copy across the surviving links, unaligned target
tokens stay O, and boundary repair gives every projected span its B.
"""

from srlkit.core import BioSequence, Token
from srlkit.diagnostics import SentenceDiagnosis
from srlkit.projection import Alignment, enforce_one_to_one, project_corpus

# A temporal span tagged English-side with a broken opener (all I tags).
english = tuple(Token(t, i) for i, t in enumerate(
    "prices also fell in the panic period after the october 1987 crash".split()
))
source_tags = BioSequence.from_strings(
    ["O", "O", "B-V", "O", "O", "O", "O",
     "I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP"]
)

# Raw aligner output: target 7 is claimed twice (by sources 9 and 11).
raw_links = Alignment.from_pairs(
    [(7, 5), (8, 6), (9, 7), (9, 9), (10, 10), (11, 7)]
)
result = enforce_one_to_one(raw_links)
print("kept:   ", sorted(result.alignment.pairs))
print("dropped:", sorted(result.dropped))

# Transfer over a divergence-corrected sentence pair.
french = tuple(Token(t, i) for i, t in enumerate(
    "les prix chutent pendant la après l' écrasement octobre 1987".split()
))
alignment = Alignment.from_pairs(
    [(2, 2), (7, 5), (8, 6), (9, 8), (10, 9), (11, 7)]
)
sent = SentenceDiagnosis(0, english, ((2, source_tags),), None)
projected, _ = project_corpus([sent], [alignment], [french])

(out,) = projected
_, tgt_predicate, labels = out.frames[0]
print("\ntarget predicate index:", tgt_predicate)
for token, tag, src in zip(french, labels, out.provenance):
    origin = english[src].text if src is not None else "-"
    print(f"  {token.text:<12} {tag.text:<12} from {origin}")
