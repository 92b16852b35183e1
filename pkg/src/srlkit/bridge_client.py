"""Client for an external tagger process speaking newline-delimited JSON.

The wire protocol mirrors the in-process backend exactly: a `hello`
handshake fixes the label vocabulary and special ids, `tokenize` maps one
word to subword ids, and `forward` scores a padded batch, returning
per-word score matrices (the server performs the first-subword gather).
One request is in flight per connection at a time.
"""

import json
import os
import socket

import numpy as np

from srlkit.core import SrlError
from srlkit.encoding import SubwordVocab

BRIDGE_ADDR_ENV = "SRLKIT_BRIDGE"


class BridgeProtocolError(SrlError):
    """The bridge answered with an error or an ill-formed message."""


class BridgeBackend:
    """TaggerBackend implementation backed by a remote process."""

    def __init__(self, address: str, timeout: float = 60.0):
        host, _, port = address.rpartition(":")
        self._sock = socket.create_connection((host or "127.0.0.1", int(port)),
                                              timeout=timeout)
        self._reader = self._sock.makefile("r", encoding="utf-8")
        self._writer = self._sock.makefile("w", encoding="utf-8")
        self._next_id = 0
        hello = self._request({"op": "hello"})
        self.labels = tuple(hello["labels"])
        specials = hello["specials"]
        self.vocab = SubwordVocab(
            cls_id=int(specials["cls"]),
            sep_id=int(specials["sep"]),
            pad_id=int(specials["pad"]),
            size=int(specials.get("size", 0)) or 1 << 30,
        )

    @classmethod
    def from_env(cls) -> "BridgeBackend":
        address = os.environ.get(BRIDGE_ADDR_ENV)
        if not address:
            raise BridgeProtocolError(
                f"no bridge address: set {BRIDGE_ADDR_ENV}=host:port"
            )
        return cls(address)

    def _request(self, payload: dict) -> dict:
        request_id = self._next_id
        self._next_id += 1
        payload = {"id": request_id, **payload}
        self._writer.write(json.dumps(payload) + "\n")
        self._writer.flush()
        line = self._reader.readline()
        if not line:
            raise BridgeProtocolError("bridge closed the connection")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BridgeProtocolError(f"ill-formed reply: {line!r}") from exc
        if reply.get("error"):
            err = reply["error"]
            raise BridgeProtocolError(f"{err.get('kind')}: {err.get('detail')}")
        if reply.get("id") != request_id:
            raise BridgeProtocolError(
                f"reply id {reply.get('id')} does not echo request {request_id}"
            )
        return reply

    def tokenize(self, word: str) -> list[int]:
        return [int(x) for x in self._request({"op": "tokenize", "word": word})["ids"]]

    def forward(self, batch) -> list[np.ndarray]:
        payload = {
            "op": "forward",
            "batch": {
                "ids": batch.ids.tolist(),
                "segment_ids": batch.segment_ids.tolist(),
                "attention_mask": batch.attention_mask.tolist(),
                "predicate_word_index": list(batch.predicate_word_indices),
                "first_subword_indices": [
                    list(f) for f in batch.first_subword_indices
                ],
            },
        }
        scores = self._request(payload)["scores"]
        return [np.asarray(s, dtype=np.float64) for s in scores]

    def close(self) -> None:
        try:
            self._writer.close()
            self._reader.close()
        finally:
            self._sock.close()

    def __enter__(self) -> "BridgeBackend":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
