"""Command-line entry point: ingest, tag, analyze, score, agreement,
project, and bench subcommands, composable through JSON Lines files.

Exit codes: 0 success, 2 usage, 3 unreadable/unwritable file, 4 malformed
data, 5 backend or protocol failure, 1 anything else. Failures print one
structured JSON error line on stderr.
"""

import argparse
import concurrent.futures
import json
import sys
import time

from srlkit.bridge_client import BRIDGE_ADDR_ENV, BridgeBackend, BridgeProtocolError
from srlkit.core import BioSequence, SrlError, Token, frame_from_bio
from srlkit.diagnostics import (
    REVIEW_REQUIRED,
    SentenceDiagnosis,
    analyze_corpus,
    read_conllu,
)
from srlkit.encoding import CountingBackend, mock_backend
from srlkit.evaluation import agreement_partition, round2, score_spans
from srlkit.inference import BackendError, predict_srl
from srlkit.ingestion import DEFAULT_ARTIFACT_PATTERNS, ingest_file
from srlkit.projection import (
    Alignment,
    project_corpus,
    read_pharaoh,
    read_token_lines,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_BACKEND = 5
EXIT_OTHER = 1

EPILOG = """exit codes:
  0  success
  2  usage error (unknown flag, missing argument)
  3  file could not be read or written
  4  malformed input data
  5  backend or bridge protocol failure
  1  any other failure

environment:
  %s   bridge address as host:port for --backend bridge
""" % BRIDGE_ADDR_ENV


def _fail(kind: str, detail: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "detail": detail}) + "\n")
    return code


def read_jsonl(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def write_jsonl(path: str, objs) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for obj in objs:
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")


def group_sentences(objs: list[dict]) -> list[tuple[tuple[Token, ...], list[int]]]:
    """Group consecutive instance lines with identical words into sentences.

    Returns (words, line numbers) per sentence; predicates stay in file
    order within each group.
    """
    groups: list[tuple[tuple[Token, ...], list[int]]] = []
    prev_words = None
    for lineno, obj in enumerate(objs):
        texts = list(obj["words"])
        if texts != prev_words:
            words = tuple(Token(t, i) for i, t in enumerate(texts))
            groups.append((words, []))
            prev_words = texts
        groups[-1][1].append(lineno)
    return groups


def _labels_field(obj: dict) -> str:
    return "predicted_labels" if "predicted_labels" in obj else "labels"


def _make_backend(args):
    if args.backend == "mock":
        return mock_backend(args.seed)
    return BridgeBackend.from_env() if args.bridge is None else BridgeBackend(args.bridge)


def render_table(rows: list[tuple]) -> str:
    widths = [max(len(str(r[c])) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_ingest(args) -> int:
    patterns = DEFAULT_ARTIFACT_PATTERNS
    if args.artifact_patterns:
        with open(args.artifact_patterns, encoding="utf-8") as f:
            patterns = tuple(line.strip() for line in f if line.strip())
    report = ingest_file(args.input, args.output, patterns)
    print(json.dumps(report.to_json_dict()))
    return EXIT_OK


def _tag_sentences(objs, groups, args):
    def tag_slice(backend, items):
        done = []
        for words, linenos in items:
            predicates = [objs[i]["predicate_word_idx"] for i in linenos]
            done.append((linenos, predict_srl(
                words, predicates, backend, mode=args.mode,
                max_batch=args.max_batch,
            )))
        return done

    if args.jobs <= 1:
        yield from tag_slice(_make_backend(args), groups)
        return
    # One backend lease per worker, each worker a disjoint sentence slice,
    # so no backend instance ever sees concurrent calls.
    slices = [groups[i::args.jobs] for i in range(args.jobs)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = [
            pool.submit(tag_slice, _make_backend(args), s) for s in slices if s
        ]
        for future in futures:
            yield from future.result()


def cmd_tag(args) -> int:
    objs = read_jsonl(args.instances)
    groups = group_sentences(objs)
    out = [dict(obj) for obj in objs]
    for linenos, tagged in _tag_sentences(objs, groups, args):
        for lineno, (_, seq) in zip(linenos, tagged.frames):
            out[lineno]["predicted_labels"] = seq.to_strings()
    write_jsonl(args.output, out)
    print(json.dumps({"sentences": len(groups), "predictions": len(objs)}))
    return EXIT_OK


def cmd_bench(args) -> int:
    objs = read_jsonl(args.instances)
    groups = group_sentences(objs)
    total_predicates = len(objs)
    report = {
        "sentences": len(groups),
        "predictions": total_predicates,
        "mean_predicates": round2(total_predicates / len(groups)) if groups else 0.0,
        "repeat": args.repeat,
        "modes": {},
    }
    for mode in ("cached", "baseline"):
        counter = CountingBackend(mock_backend(args.seed))
        wall = []
        for _ in range(args.repeat):
            counter.reset()
            start = time.perf_counter()
            for words, linenos in groups:
                predicates = [objs[i]["predicate_word_idx"] for i in linenos]
                predict_srl(words, predicates, counter, mode=mode,
                            max_batch=args.max_batch)
            wall.append(time.perf_counter() - start)
        report["modes"][mode] = {
            "wall_clock_s": [round(w, 6) for w in wall],
            "tokenize_calls": counter.tokenize_calls,
            "sentence_tokenize_calls": counter.tokenize_calls - total_predicates,
            "forward_calls": counter.forward_calls,
            "forward_rows": counter.forward_rows,
        }
    cached = report["modes"]["cached"]["sentence_tokenize_calls"]
    baseline = report["modes"]["baseline"]["sentence_tokenize_calls"]
    report["sentence_tokenize_ratio"] = round2(baseline / cached) if cached else 0.0
    text = json.dumps(report, indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    print(text)
    return EXIT_OK


def cmd_analyze(args) -> int:
    objs = read_jsonl(args.pred)
    groups = group_sentences(objs)
    trees = read_conllu(args.deps) if args.deps else []
    if trees and len(trees) != len(groups):
        raise SrlError(
            f"{len(trees)} dependency trees for {len(groups)} sentences"
        )
    sentences = []
    for sid, (words, linenos) in enumerate(groups):
        frames = tuple(
            (
                objs[i]["predicate_word_idx"],
                BioSequence.from_strings(objs[i][_labels_field(objs[i])]),
            )
            for i in linenos
        )
        tree = trees[sid] if trees else None
        sentences.append(SentenceDiagnosis(sid, words, frames, tree))
    fixed, report = analyze_corpus(sentences)

    out = [dict(obj) for obj in objs]
    for (words, linenos), sent in zip(groups, fixed):
        for lineno, (_, seq) in zip(linenos, sent.frames):
            out[lineno][_labels_field(out[lineno])] = seq.to_strings()
    write_jsonl(args.out_fixed, out)

    review = [
        {
            "predicate_word_idx": rec.predicate_index,
            "role": rec.role.text,
            "spans": [[s.start, s.end] for s in rec.span_pair],
            "bucket": rec.bucket.value,
        }
        for rec in report.records
        if rec.action == REVIEW_REQUIRED
    ]
    write_jsonl(args.out_review, review)
    with open(args.report, "w", encoding="utf-8") as f:
        json.dump(report.to_json_dict(), f, indent=2)
        f.write("\n")
    print(json.dumps(report.to_json_dict()["buckets"]))
    return EXIT_OK


def _aligned_frames(pred_objs, gold_objs):
    if len(pred_objs) != len(gold_objs):
        raise SrlError(
            f"{len(pred_objs)} predicted lines vs {len(gold_objs)} gold lines"
        )
    bad = [
        i for i, (p, g) in enumerate(zip(pred_objs, gold_objs))
        if p["words"] != g["words"] or p["predicate_word_idx"] != g["predicate_word_idx"]
    ]
    if bad:
        raise SrlError(f"pred/gold misaligned at lines {bad[:10]}")
    pred = [
        frame_from_bio(p["predicate_word_idx"],
                       BioSequence.from_strings(p[_labels_field(p)]))
        for p in pred_objs
    ]
    gold = [
        frame_from_bio(g["predicate_word_idx"],
                       BioSequence.from_strings(g["labels"]))
        for g in gold_objs
    ]
    return pred, gold


def cmd_score(args) -> int:
    pred, gold = _aligned_frames(read_jsonl(args.pred), read_jsonl(args.gold))
    report = score_spans(pred, gold, include_v=args.include_v, fold_cr=args.fold_cr)
    d = report.to_json_dict()
    print(render_table([
        ("metric", "value"),
        ("precision", f"{d['precision']:.2f}"),
        ("recall", f"{d['recall']:.2f}"),
        ("f1", f"{d['f1']:.2f}"),
        ("true_positives", d["true_positives"]),
        ("predicted_spans", d["predicted_spans"]),
        ("gold_spans", d["gold_spans"]),
    ]))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(d, f, indent=2)
            f.write("\n")
    return EXIT_OK


def cmd_agreement(args) -> int:
    a_objs = read_jsonl(args.a)
    b_objs = read_jsonl(args.b)
    gold_objs = read_jsonl(args.gold)
    if not (len(a_objs) == len(b_objs) == len(gold_objs)):
        raise SrlError("instance files differ in length")
    stream = lambda objs, fld: [t for o in objs for t in o[fld(o)]]
    report = agreement_partition(
        stream(a_objs, _labels_field),
        stream(b_objs, _labels_field),
        stream(gold_objs, lambda o: "labels"),
    )
    d = report.to_json_dict()
    rows = [("partition", "subcase", "% within", "% of total")]
    for part in ("agreement", "disagreement"):
        for sub, cell in d[part].items():
            if isinstance(cell, dict) and "pct_within" in cell:
                rows.append((part, sub, f"{cell['pct_within']:.2f}",
                             f"{cell['pct_total']:.2f}"))
    print(render_table(rows))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(d, f, indent=2)
            f.write("\n")
    return EXIT_OK


def cmd_project(args) -> int:
    objs = read_jsonl(args.src)
    groups = group_sentences(objs)
    targets = read_token_lines(args.tgt)
    alignments = read_pharaoh(args.align)
    trees = read_conllu(args.deps) if args.deps else []
    if trees and len(trees) != len(groups):
        raise SrlError(f"{len(trees)} trees for {len(groups)} sentences")
    sentences = []
    for sid, (words, linenos) in enumerate(groups):
        frames = tuple(
            (
                objs[i]["predicate_word_idx"],
                BioSequence.from_strings(objs[i][_labels_field(objs[i])]),
            )
            for i in linenos
        )
        sentences.append(SentenceDiagnosis(
            sid, words, frames, trees[sid] if trees else None
        ))
    projected, skipped = project_corpus(sentences, alignments, targets)
    out = []
    for sent in projected:
        for src_idx, tgt_idx, seq in sent.frames:
            out.append({
                "words": [w.text for w in sent.target_words],
                "predicate_word_idx": tgt_idx,
                "labels": seq.to_strings(),
                "src_predicate_word_idx": src_idx,
                "provenance": list(sent.provenance),
            })
    write_jsonl(args.out, out)
    print(json.dumps({"projected_sentences": len(projected),
                      "skipped": [{"sentence": s, "reason": r} for s, r in skipped]}))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srlkit",
        description=__doc__.splitlines()[0],
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="column-format gold file to instance JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--artifact-patterns",
                   help="file with one artifact-token regex per line")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tag", help="predict BIO labels for instance JSONL")
    p.add_argument("--instances", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--backend", choices=("mock", "bridge"), default="mock")
    p.add_argument("--mode", choices=("cached", "baseline"), default="cached")
    p.add_argument("--seed", type=int, default=0, help="mock backend seed")
    p.add_argument("--bridge", help=f"bridge address (default ${BRIDGE_ADDR_ENV})")
    p.add_argument("--max-batch", type=int, default=None,
                   help="split sentences with more predicates than this")
    p.add_argument("--jobs", type=int, default=1,
                   help="sentence-level parallelism (default 1, deterministic)")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("bench", help="instrumented cached-vs-baseline comparison")
    p.add_argument("--instances", required=True)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-batch", type=int, default=None)
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="dependency-aware repeated-span repair")
    p.add_argument("--pred", required=True)
    p.add_argument("--deps", help="CoNLL-U trees, one sentence per block")
    p.add_argument("--out-fixed", required=True)
    p.add_argument("--out-review", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("score", help="span-level P/R/F1 against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--include-v", action="store_true")
    p.add_argument("--fold-cr", action="store_true",
                   help="fold C-/R- roles into their base role")
    p.add_argument("--report")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("agreement", help="two-system token agreement partition")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("project", help="project tags across word alignments")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True, help="target tokens, one sentence per line")
    p.add_argument("--align", required=True, help="Pharaoh i-j alignments")
    p.add_argument("--deps", help="CoNLL-U trees for source-side repair")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BridgeProtocolError, BackendError) as exc:
        return _fail("backend", str(exc), EXIT_BACKEND)
    except FileNotFoundError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except (SrlError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail("data", f"{type(exc).__name__}: {exc}", EXIT_DATA)
    except Exception as exc:  # pragma: no cover
        return _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_OTHER)


if __name__ == "__main__":
    sys.exit(main())
