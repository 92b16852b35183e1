"""Tagger bridge: newline-delimited JSON server for SRL inference engines.

The engine side stays free of any deep-learning stack; this process owns
the model. Three request kinds are served: `hello` (label vocabulary and
special ids), `tokenize` (word to subword ids), and `forward` (padded
batch to per-word label scores, gathered at each word's first subword).
"""

from srl_bridge.models import HashModel, load_model
from srl_bridge.server import serve

__all__ = ["HashModel", "load_model", "serve"]

__version__ = "0.1.0"
