"""Structured semantic role labeling toolkit.

Subpackages cover the full span-based SRL pipeline at inference time:
column-format ingestion, sentence-level encoding with caching, predicate-
conditioned tagging, BIO span algebra and repair, dependency-aware error
analysis, span scoring, and cross-lingual projection through word
alignments.
"""

from srlkit.core import (
    BioSequence,
    BioTag,
    Frame,
    LabeledSpan,
    RoleLabel,
    SrlInstance,
    Token,
    decode_spans,
    encode_spans,
    frame_from_bio,
    validate_bio,
)

__all__ = [
    "BioSequence",
    "BioTag",
    "Frame",
    "LabeledSpan",
    "RoleLabel",
    "SrlInstance",
    "Token",
    "decode_spans",
    "encode_spans",
    "frame_from_bio",
    "validate_bio",
]

__version__ = "0.1.0"
