"""End-to-end behavior of the srlkit command-line interface."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from srlkit.cli import main

FIXTURE = Path(__file__).parent / "fixtures" / "column_corpus.txt"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def instances(tmp_path, capsys):
    path = tmp_path / "instances.jsonl"
    code, out, _ = run(capsys, "ingest", "--input", str(FIXTURE),
                       "--output", str(path))
    assert code == 0
    return path


def test_ingest_reports_counts(tmp_path, capsys):
    out_path = tmp_path / "out.jsonl"
    code, out, _ = run(capsys, "ingest", "--input", str(FIXTURE),
                       "--output", str(out_path))
    assert code == 0
    report = json.loads(out)
    assert report["instances_emitted"] == 23
    assert report["sentences_skipped"] == 0
    assert len(out_path.read_text().splitlines()) == 23


def test_tag_adds_predicted_labels(tmp_path, capsys, instances):
    tagged = tmp_path / "tagged.jsonl"
    code, out, _ = run(capsys, "tag", "--instances", str(instances),
                       "--output", str(tagged), "--backend", "mock",
                       "--mode", "cached", "--seed", "5")
    assert code == 0
    lines = [json.loads(l) for l in tagged.read_text().splitlines()]
    assert len(lines) == 23
    for obj in lines:
        assert len(obj["predicted_labels"]) == len(obj["words"])


def test_tag_modes_agree_via_cli(tmp_path, capsys, instances):
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    run(capsys, "tag", "--instances", str(instances), "--output", str(out_a),
        "--mode", "cached", "--seed", "3")
    run(capsys, "tag", "--instances", str(instances), "--output", str(out_b),
        "--mode", "baseline", "--seed", "3")
    assert out_a.read_bytes() == out_b.read_bytes()


def test_score_identity_prints_100_and_exits_zero(tmp_path, capsys, instances):
    code, out, _ = run(capsys, "score", "--pred", str(instances),
                       "--gold", str(instances))
    assert code == 0
    assert "100.00" in out
    assert "f1" in out


def test_score_report_json(tmp_path, capsys, instances):
    report_path = tmp_path / "score.json"
    code, _, _ = run(capsys, "score", "--pred", str(instances),
                     "--gold", str(instances), "--report", str(report_path))
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["f1"] == 100.0
    assert report["true_positives"] == report["gold_spans"]


def test_bench_ratio_reflects_predicate_count(tmp_path, capsys, instances):
    code, out, _ = run(capsys, "bench", "--instances", str(instances),
                       "--repeat", "3")
    assert code == 0
    report = json.loads(out)
    assert report["modes"]["cached"]["sentence_tokenize_calls"] > 0
    assert report["sentence_tokenize_ratio"] >= report["mean_predicates"]
    assert len(report["modes"]["baseline"]["wall_clock_s"]) == 3


def test_agreement_against_self_is_all_both_correct(tmp_path, capsys, instances):
    code, out, _ = run(capsys, "agreement", "--a", str(instances),
                       "--b", str(instances), "--gold", str(instances))
    assert code == 0
    assert "both_correct" in out
    assert "100.00" in out


def test_analyze_merges_and_reports(tmp_path, capsys):
    pred = tmp_path / "pred.jsonl"
    pred.write_text(json.dumps({
        "words": ["a", "long", "section", "of", "road"],
        "predicate_word_idx": 2,
        "labels": ["O", "O", "B-V", "O", "O"],
        "predicted_labels": ["B-ARG1", "I-ARG1", "I-ARG1", "B-ARG1", "I-ARG1"],
    }) + "\n")
    deps = tmp_path / "deps.conllu"
    deps.write_text(
        "1\ta\t_\tDET\t_\t_\t3\tdet\t_\t_\n"
        "2\tlong\t_\tADJ\t_\t_\t3\tamod\t_\t_\n"
        "3\tsection\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "4\tof\t_\tADP\t_\t_\t5\tcase\t_\t_\n"
        "5\troad\t_\tNOUN\t_\t_\t3\tnmod\t_\t_\n\n"
    )
    fixed = tmp_path / "fixed.jsonl"
    review = tmp_path / "review.jsonl"
    report_path = tmp_path / "report.json"
    code, _, _ = run(capsys, "analyze", "--pred", str(pred), "--deps", str(deps),
                     "--out-fixed", str(fixed), "--out-review", str(review),
                     "--report", str(report_path))
    assert code == 0
    obj = json.loads(fixed.read_text())
    assert obj["predicted_labels"] == [
        "B-ARG1", "I-ARG1", "I-ARG1", "I-ARG1", "I-ARG1",
    ]
    report = json.loads(report_path.read_text())
    buckets = {b["bucket"]: b for b in report["buckets"]}
    assert buckets["pp_attach"]["tokens"] == 5
    assert review.read_text() == ""


def test_project_cli(tmp_path, capsys):
    src = tmp_path / "src.jsonl"
    src.write_text(json.dumps({
        "words": ["after", "the", "crash"],
        "predicate_word_idx": 0,
        "labels": ["I-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP"],
    }) + "\n")
    tgt = tmp_path / "tgt.txt"
    tgt.write_text("apres l' ecrasement\n")
    align = tmp_path / "align.txt"
    align.write_text("0-0 1-1 2-2\n")
    out = tmp_path / "projected.jsonl"
    code, _, _ = run(capsys, "project", "--src", str(src), "--tgt", str(tgt),
                     "--align", str(align), "--out", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["labels"] == ["B-ARGM-TMP", "I-ARGM-TMP", "I-ARGM-TMP"]
    assert obj["provenance"] == [0, 1, 2]


def test_pipeline_is_byte_stable(tmp_path, capsys, instances):
    outputs = []
    for run_dir in ("one", "two"):
        d = tmp_path / run_dir
        d.mkdir()
        tagged = d / "tagged.jsonl"
        fixed = d / "fixed.jsonl"
        review = d / "review.jsonl"
        report = d / "report.json"
        score_json = d / "score.json"
        assert run(capsys, "tag", "--instances", str(instances), "--output",
                   str(tagged), "--seed", "1")[0] == 0
        assert run(capsys, "analyze", "--pred", str(tagged), "--out-fixed",
                   str(fixed), "--out-review", str(review), "--report",
                   str(report))[0] == 0
        assert run(capsys, "score", "--pred", str(fixed), "--gold",
                   str(instances), "--report", str(score_json))[0] == 0
        outputs.append(
            tuple(p.read_bytes() for p in (tagged, fixed, review, report, score_json))
        )
    assert outputs[0] == outputs[1]


def test_missing_file_exits_3(tmp_path, capsys):
    code, _, err = run(capsys, "score", "--pred", str(tmp_path / "nope.jsonl"),
                       "--gold", str(tmp_path / "nope.jsonl"))
    assert code == 3
    assert json.loads(err)["error"] == "io"


def test_malformed_data_exits_4(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json}\n")
    code, _, err = run(capsys, "score", "--pred", str(bad), "--gold", str(bad))
    assert code == 4
    assert json.loads(err)["error"] == "data"


def test_jobs_flag_is_deterministic(tmp_path, capsys, instances):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "parallel.jsonl"
    run(capsys, "tag", "--instances", str(instances), "--output", str(serial),
        "--seed", "2")
    run(capsys, "tag", "--instances", str(instances), "--output", str(parallel),
        "--seed", "2", "--jobs", "4")
    assert serial.read_bytes() == parallel.read_bytes()


def test_usage_error_exits_2():
    proc = subprocess.run(
        [sys.executable, "-m", "srlkit.cli", "score", "--nope"],
        capture_output=True,
    )
    assert proc.returncode == 2


def test_help_documents_exit_codes():
    proc = subprocess.run(
        [sys.executable, "-m", "srlkit.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "exit codes" in proc.stdout
    assert "SRLKIT_BRIDGE" in proc.stdout
