"""Wire-protocol behavior of the bridge server, one message at a time."""

import json
import socket
import subprocess
import sys
import time

import pytest

from srl_bridge.models import HashModel
from srl_bridge.server import handle_request


class BridgeProcess:
    """Spawn `python -m srl_bridge` and talk raw lines to it."""

    def __init__(self, *args: str):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "srl_bridge", *args],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
        )
        banner = self.proc.stdout.readline()
        assert banner.startswith("LISTENING "), banner
        self.port = int(banner.split()[1])
        self.sock = socket.create_connection(("127.0.0.1", self.port), timeout=20)
        self.reader = self.sock.makefile("r", encoding="utf-8")
        self.writer = self.sock.makefile("w", encoding="utf-8")

    def send_line(self, line: str) -> dict:
        self.writer.write(line + "\n")
        self.writer.flush()
        return json.loads(self.reader.readline())

    def request(self, obj: dict) -> dict:
        return self.send_line(json.dumps(obj))

    def close(self):
        self.sock.close()
        self.proc.terminate()
        self.proc.wait(timeout=10)


@pytest.fixture(scope="module")
def bridge():
    proc = BridgeProcess("--model", "hash:7", "--port", "0")
    yield proc
    proc.close()


def test_hello_advertises_labels_and_specials(bridge):
    reply = bridge.request({"id": 1, "op": "hello"})
    assert reply["id"] == 1
    assert "B-ARG0" in reply["labels"]
    assert "O" in reply["labels"]
    specials = reply["specials"]
    assert len({specials["cls"], specials["sep"], specials["pad"]}) == 3


def test_tokenize_echoes_id_and_is_deterministic(bridge):
    first = bridge.request({"id": 10, "op": "tokenize", "word": "temperament"})
    second = bridge.request({"id": 11, "op": "tokenize", "word": "temperament"})
    assert first["id"] == 10 and second["id"] == 11
    assert first["ids"] == second["ids"]
    assert len(first["ids"]) == 3  # 11 chars under the 4-char piece rule


def _tiny_batch():
    return {
        "ids": [[1, 9, 9, 2, 9, 2]],
        "segment_ids": [[0, 0, 0, 0, 1, 1]],
        "attention_mask": [[1, 1, 1, 1, 1, 1]],
        "predicate_word_index": [0],
        "first_subword_indices": [[1, 2]],
    }


def test_identical_forward_requests_score_identically(bridge):
    a = bridge.request({"id": 20, "op": "forward", "batch": _tiny_batch()})
    b = bridge.request({"id": 21, "op": "forward", "batch": _tiny_batch()})
    assert a["scores"] == b["scores"]
    assert len(a["scores"][0]) == 2  # one score row per word


def test_padding_does_not_change_scores(bridge):
    padded = _tiny_batch()
    padded["ids"][0] += [0, 0]
    padded["segment_ids"][0] += [0, 0]
    padded["attention_mask"][0] += [0, 0]
    plain = bridge.request({"id": 30, "op": "forward", "batch": _tiny_batch()})
    with_pad = bridge.request({"id": 31, "op": "forward", "batch": padded})
    assert plain["scores"] == with_pad["scores"]


def test_malformed_line_keeps_connection_alive(bridge):
    reply = bridge.send_line("{this is not json")
    assert reply["error"]["kind"] == "parse_error"
    after = bridge.request({"id": 40, "op": "hello"})
    assert after["id"] == 40 and "labels" in after


def test_unknown_op_and_missing_fields_are_structured_errors(bridge):
    assert bridge.request({"id": 50, "op": "explode"})["error"]["kind"] == "unknown_op"
    assert bridge.request({"id": 51, "op": "tokenize"})["error"]["kind"] == "bad_request"
    bad_forward = bridge.request({"id": 52, "op": "forward", "batch": {"ids": []}})
    assert bad_forward["error"]["kind"] == "bad_request"


def test_handler_unit_level_roundtrip():
    model = HashModel(3)
    reply = handle_request(model, {"id": 0, "op": "hello"})
    assert reply["labels"] == list(model.labels)
    reply = handle_request(model, {"id": 1, "op": "tokenize", "word": "go"})
    assert reply["ids"] == model.tokenize("go")


def test_seed_changes_scores_but_not_protocol():
    a = HashModel(1).forward(_tiny_batch())
    b = HashModel(2).forward(_tiny_batch())
    assert a != b
    assert len(a) == len(b) == 1
