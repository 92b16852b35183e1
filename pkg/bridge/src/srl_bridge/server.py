"""Newline-delimited JSON server.

One line in, one line out; replies echo the request id. A malformed
request produces a structured error reply and keeps the connection alive.
Each connection handles one request at a time; engines that want
parallelism open more connections.
"""

import json
import socketserver


def _error(request_id, kind: str, detail: str) -> dict:
    return {"id": request_id, "error": {"kind": kind, "detail": detail}}


def handle_request(model, request: dict) -> dict:
    request_id = request.get("id")
    op = request.get("op")
    if op == "hello":
        return {"id": request_id, "labels": list(model.labels),
                "specials": dict(model.specials)}
    if op == "tokenize":
        word = request.get("word")
        if not isinstance(word, str):
            return _error(request_id, "bad_request", "tokenize needs a 'word' string")
        return {"id": request_id, "ids": model.tokenize(word)}
    if op == "forward":
        batch = request.get("batch")
        required = ("ids", "segment_ids", "attention_mask",
                    "predicate_word_index", "first_subword_indices")
        if not isinstance(batch, dict) or any(k not in batch for k in required):
            return _error(request_id, "bad_request",
                          f"forward needs a batch with keys {required}")
        try:
            return {"id": request_id, "scores": model.forward(batch)}
        except Exception as exc:
            return _error(request_id, "model_error", f"{type(exc).__name__}: {exc}")
    return _error(request_id, "unknown_op", f"unsupported op: {op!r}")


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            try:
                request = json.loads(line)
            except json.JSONDecodeError as exc:
                reply = _error(None, "parse_error", str(exc))
            else:
                reply = handle_request(self.server.model, request)
            self.wfile.write((json.dumps(reply) + "\n").encode("utf-8"))
            self.wfile.flush()


class BridgeServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def serve(model, host: str = "127.0.0.1", port: int = 0) -> None:
    """Serve the model until interrupted; prints the bound port on startup."""
    with BridgeServer((host, port), _Handler) as server:
        server.model = model
        print(f"LISTENING {server.server_address[1]}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
