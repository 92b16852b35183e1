"""BIO span algebra: decoding, re-encoding, and structural validation.

Walks through the tag sequences that every other part of the toolkit is
built on: turning per-token tags into labeled spans, round-tripping them,
and flagging the two kinds of structural violations.
"""

from srlkit import BioSequence, decode_spans, encode_spans, validate_bio

# One predicate's view of "Mary gave me a present .": the agent, the verb,
# the recipient, and a two-token theme.
labels = ["B-ARG0", "B-V", "B-ARG2", "B-ARG1", "I-ARG1", "O"]
sentence = ["Mary", "gave", "me", "a", "present", "."]

seq = BioSequence.from_strings(labels)
print("tags:     ", " ".join(labels))
print("sentence: ", " ".join(sentence))
print()

spans = decode_spans(seq)
for span in spans:
    text = " ".join(sentence[span.start:span.end + 1])
    print(f"  {span.role.text:<6} [{span.start},{span.end}]  {text!r}")

# Decoding and encoding are inverses on valid sequences.
assert encode_spans(spans, len(seq)).to_strings() == labels
print("\nround trip: encode(decode(s)) == s")

# Orphan I tags do not crash decoding; they open a span, mirroring the
# boundary repair the diagnostics module applies.
broken = BioSequence.from_strings(["I-ARGM-TMP", "I-ARGM-TMP", "O"])
print("\norphan opener decodes as:", decode_spans(broken))

# validate_bio reports problems without repairing anything.
fragmented = BioSequence.from_strings(["B-ARG0", "B-ARG0", "I-ARG0", "I-ARG1"])
for v in validate_bio(fragmented):
    print(f"violation at {v.position}: {v.kind} ({v.role.text})")
