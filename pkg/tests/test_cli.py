import json

import pytest

from ctxsim.cli import main
from helpers import DATA_DIR

DATASET = str(DATA_DIR / "fixture_dataset.tsv")
STORE = str(DATA_DIR / "fixture_store.jsonl")
SWEEP = str(DATA_DIR / "fixture_sweep.jsonl")


def test_validate_ok(capsys):
    code = main(
        ["validate", "--dataset", DATASET, "--embeddings", STORE, "--sweep-file", SWEEP]
    )
    assert code == 0
    assert "OK" in capsys.readouterr().out


def test_validate_without_configs(capsys):
    assert main(["validate", "--dataset", DATASET]) == 0


def test_validate_reports_problems(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    text = (DATA_DIR / "fixture_dataset.tsv").read_text().replace("\t-9.1", "\t-5.0", 1)
    bad.write_text(text)
    code = main(["validate", "--dataset", str(bad)])
    assert code == 1
    assert "gold.change" in capsys.readouterr().out


def test_validate_flags_coverage(tmp_path, capsys):
    code = main(
        ["validate", "--dataset", DATASET, "--embeddings", STORE, "--config", "ghost@last1@first"]
    )
    assert code == 1
    out = capsys.readouterr().out
    assert out.count("missing") == 16


def test_predict_writes_answers(tmp_path):
    out = tmp_path / "answers.tsv"
    code = main(
        [
            "predict",
            "--dataset", DATASET,
            "--embeddings", STORE,
            "--config", "toy-a@avg:2@first",
            "--subtask", "1",
            "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("en1\t")


def test_predict_requires_subtask(capsys):
    code = main(
        ["predict", "--dataset", DATASET, "--embeddings", STORE, "--config", "toy-a@avg:2@first"]
    )
    assert code == 1
    assert "subtask" in capsys.readouterr().err


def test_predict_negate_change_flag(tmp_path):
    args = [
        "predict",
        "--dataset", DATASET,
        "--embeddings", STORE,
        "--config", "toy-a@avg:2@first",
        "--subtask", "1",
    ]
    plain = tmp_path / "plain.tsv"
    flipped = tmp_path / "flipped.tsv"
    assert main(args + ["--out", str(plain)]) == 0
    assert main(args + ["--negate-change", "--out", str(flipped)]) == 0
    for a, b in zip(plain.read_text().splitlines(), flipped.read_text().splitlines()):
        assert float(a.split("\t")[1]) == -float(b.split("\t")[1])


def test_evaluate_prints_table(capsys):
    code = main(
        ["evaluate", "--dataset", DATASET, "--embeddings", STORE, "--config", "toy-a@avg:2@first"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "Subtask 1" in out and "Subtask 2" in out


def test_evaluate_requires_gold(tmp_path, capsys):
    text = (DATA_DIR / "fixture_dataset.tsv").read_text()
    lines = [line.split("\t")[:5] for line in text.splitlines()]
    no_gold = tmp_path / "no_gold.tsv"
    no_gold.write_text("\n".join("\t".join(cells) for cells in lines) + "\n")
    code = main(
        ["evaluate", "--dataset", str(no_gold), "--embeddings", STORE, "--config", "toy-a@avg:2@first"]
    )
    assert code == 1
    assert "gold" in capsys.readouterr().err


def test_sweep_writes_report(tmp_path, capsys):
    out = tmp_path / "report.jsonl"
    code = main(
        [
            "sweep",
            "--dataset", DATASET,
            "--embeddings", STORE,
            "--sweep-file", SWEEP,
            "--out", str(out),
        ]
    )
    assert code == 0
    lines = [json.loads(line) for line in out.read_text().splitlines()]
    assert lines[0]["kind"] == "meta"
    assert sum(1 for ln in lines if ln["kind"] == "config") == 6


def test_sweep_accepts_single_config(capsys):
    code = main(
        ["sweep", "--dataset", DATASET, "--embeddings", STORE, "--config", "toy-a@avg:2@first"]
    )
    assert code == 0
    assert "toy-a@avg:2@first" in capsys.readouterr().out


def test_conflicting_config_sources(capsys):
    code = main(
        [
            "sweep",
            "--dataset", DATASET,
            "--embeddings", STORE,
            "--config", "toy-a@avg:2@first",
            "--sweep-file", SWEEP,
        ]
    )
    assert code == 1


def test_missing_embeddings_is_validation_failure(capsys):
    code = main(
        ["sweep", "--dataset", DATASET, "--sweep-file", SWEEP]
    )
    assert code == 1
    assert "missing" in capsys.readouterr().err


def test_degenerate_vector_is_runtime_error(tmp_path, capsys):
    store_path = tmp_path / "zero.jsonl"
    rows = []
    for item in ("en1", "en2", "en3", "en4"):
        for c in (1, 2):
            for w in (1, 2):
                vec = [0.0, 0.0] if (item, c, w) == ("en1", 1, 1) else [1.0, 2.0]
                rows.append(
                    json.dumps(
                        {
                            "item_id": item,
                            "context": c,
                            "word": w,
                            "model": "z",
                            "subtokens": [{"text": "t", "layers": [vec]}],
                        }
                    )
                )
    store_path.write_text("\n".join(rows) + "\n")
    code = main(
        [
            "predict",
            "--dataset", DATASET,
            "--embeddings", str(store_path),
            "--config", "z@last1@first",
            "--subtask", "2",
        ]
    )
    assert code == 2
    assert "zero norm" in capsys.readouterr().err


def test_repeatable_embeddings_flag(tmp_path):
    text = (DATA_DIR / "fixture_store.jsonl").read_text().splitlines()
    half_a = tmp_path / "a.jsonl"
    half_b = tmp_path / "b.jsonl"
    half_a.write_text("\n".join(text[: len(text) // 2]) + "\n")
    half_b.write_text("\n".join(text[len(text) // 2 :]) + "\n")
    code = main(
        [
            "validate",
            "--dataset", DATASET,
            "--embeddings", str(half_a),
            "--embeddings", str(half_b),
            "--sweep-file", SWEEP,
        ]
    )
    assert code == 0


def test_unreadable_dataset_is_runtime_error(capsys):
    assert main(["validate", "--dataset", "/nonexistent/nope.tsv"]) == 2
