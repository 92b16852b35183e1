"""Models the bridge can serve.

A model provides four things: the label vocabulary (fixed order), the
special subword ids, per-word tokenization, and a forward pass over a
padded batch that returns per-word score rows (the first-subword gather
happens here, so the wire format stays subword-agnostic).

`hash:<seed>` is a deterministic stand-in used for protocol conformance
testing; `hf:<name-or-path>` serves a transformers token-classification
checkpoint fine-tuned for SRL.
"""

import hashlib

LABELS = ("O",) + tuple(
    f"{p}-{r}"
    for r in ("V", "ARG0", "ARG1", "ARG2", "ARG3",
              "ARGM-TMP", "ARGM-LOC", "ARGM-MNR", "ARGM-ADV")
    for p in ("B", "I")
)


def _digest(*parts: bytes) -> bytes:
    return hashlib.blake2b(b"\x1e".join(parts), digest_size=8, key=b"bridge").digest()


class HashModel:
    """Deterministic scoring model with no learned weights.

    Words longer than 4 characters split into consecutive 4-character
    pieces. Scores hash the unpadded row content plus the predicate
    position, so identical requests always score identically and padding
    never leaks into the result.
    """

    piece_len = 4
    vocab_size = 30522

    def __init__(self, seed: int = 0):
        self._seed = str(seed).encode()
        self.labels = LABELS
        self.specials = {"cls": 1, "sep": 2, "pad": 0, "size": self.vocab_size}

    def tokenize(self, word: str) -> list[int]:
        pieces = [
            word[i:i + self.piece_len]
            for i in range(0, len(word), self.piece_len)
        ] or [word]
        out = []
        for piece in pieces:
            raw = int.from_bytes(_digest(self._seed, piece.encode()), "big")
            out.append(3 + raw % (self.vocab_size - 3))
        return out

    def forward(self, batch: dict) -> list[list[list[float]]]:
        scores = []
        n_rows = len(batch["ids"])
        for row in range(n_rows):
            mask = batch["attention_mask"][row]
            n = sum(1 for m in mask if m)
            ids = batch["ids"][row][:n]
            tt = batch["segment_ids"][row][:n]
            p = batch["predicate_word_index"][row]
            base = _digest(
                self._seed,
                ",".join(map(str, ids)).encode(),
                ",".join(map(str, tt)).encode(),
                str(p).encode(),
            )
            row_scores = []
            for pos in batch["first_subword_indices"][row]:
                word_scores = []
                for label_index in range(len(self.labels)):
                    h = _digest(base, str(pos).encode(), str(label_index).encode())
                    word_scores.append(int.from_bytes(h, "big") / 2 ** 64)
                row_scores.append(word_scores)
            scores.append(row_scores)
        return scores


class HfSrlModel:
    """Token-classification checkpoint served behind the same interface.

    Loads with dropout disabled and a fixed seed so identical requests get
    identical scores. Whether a given checkpoint reproduces gold labels is
    checkpoint-specific; the protocol does not depend on it.
    """

    def __init__(self, name_or_path: str, device: str = "cpu"):
        import torch
        from transformers import AutoModelForTokenClassification, AutoTokenizer

        torch.manual_seed(0)
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(name_or_path)
        self._model = AutoModelForTokenClassification.from_pretrained(name_or_path)
        self._model.to(device).eval()
        self._device = device
        id2label = self._model.config.id2label
        self.labels = tuple(id2label[i] for i in range(len(id2label)))
        self.specials = {
            "cls": self._tokenizer.cls_token_id,
            "sep": self._tokenizer.sep_token_id,
            "pad": self._tokenizer.pad_token_id,
            "size": getattr(self._tokenizer, "vocab_size", 0),
        }

    def tokenize(self, word: str) -> list[int]:
        ids = self._tokenizer(word, add_special_tokens=False)["input_ids"]
        return [int(i) for i in ids]

    def forward(self, batch: dict) -> list[list[list[float]]]:
        torch = self._torch
        with torch.no_grad():
            logits = self._model(
                input_ids=torch.tensor(batch["ids"], device=self._device),
                token_type_ids=torch.tensor(batch["segment_ids"], device=self._device),
                attention_mask=torch.tensor(batch["attention_mask"], device=self._device),
            ).logits
        scores = []
        for row, firsts in enumerate(batch["first_subword_indices"]):
            gathered = logits[row, list(firsts), :]
            scores.append([[float(x) for x in word] for word in gathered])
        return scores


def load_model(spec: str, device: str = "cpu"):
    """Build a model from a spec string: "hash:<seed>" or "hf:<name>"."""
    kind, _, rest = spec.partition(":")
    if kind == "hash":
        return HashModel(int(rest or "0"))
    if kind == "hf":
        if not rest:
            raise ValueError("hf model spec needs a checkpoint name or path")
        return HfSrlModel(rest, device)
    raise ValueError(f"unknown model spec: {spec!r} (use hash:<seed> or hf:<name>)")
