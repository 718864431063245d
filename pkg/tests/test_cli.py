import json
import subprocess
import sys

import pytest

from propspan.checkpoint import load_params
from propspan.cli import main
from propspan.dataio import read_dataset, write_dataset, write_parallel
from propspan.synthetic import make_parallel_corpus, make_tagging_dataset


@pytest.fixture
def data(tmp_path):
    path = tmp_path / "train.jsonl"
    write_dataset(make_tagging_dataset(16, 0), path)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_score_task2_self(data, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run("score-task2", "--gold", data, "--pred", data, "--out", out) == 0
    assert "micro" in capsys.readouterr().out
    assert json.loads(out.read_text())["f1"] == 1.0


def test_score_task1_structured(data, capsys):
    assert run("score-task1", "--gold", data, "--pred", data, "--format", "structured") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["f1"] == 1.0 and "macro_f1" in report


def test_stats_command(data, tmp_path):
    out = tmp_path / "s.json"
    assert run("stats", "--data", data, "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["n_examples"] == 16 and rep["std_convention"] == "population"


def test_usage_errors_exit_2(data, capsys):
    with pytest.raises(SystemExit) as exc:
        run("score-task2", "--gold", data)
    assert exc.value.code == 2
    assert "--pred" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run("predict", "--data", data, "--init", "x", "--out", "y", "--threshold", "1.5")
    assert exc.value.code == 2
    assert "--threshold" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run("frobnicate")
    assert exc.value.code == 2


def test_validation_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "1", "text": "abc", "spans": [{"start": 0, "end": 9, "technique": "Doubt"}]}\n')
    assert run("stats", "--data", bad) == 1
    assert "invalid" in capsys.readouterr().err
    assert run("stats", "--data", tmp_path / "missing.jsonl") == 1


def test_unknown_prediction_id_exit_1(data, tmp_path):
    other = tmp_path / "other.jsonl"
    anns = read_dataset(data)
    write_dataset([anns[0].__class__("nope", "x", ())], other)
    assert run("score-task2", "--gold", data, "--pred", other) == 1


def test_train_predict_and_continue(data, tmp_path):
    ck = tmp_path / "a.ckpt"
    assert run("train", "--data", data, "--out", ck, "--epochs", 2, "--vocab", 128, "--embed-dim", 4,
               "--hidden", 4, "--window", 1, "--report", tmp_path / "t.json") == 0
    first = load_params(ck)
    assert first.dims.vocab == 128
    assert len(json.loads((tmp_path / "t.json").read_text())["losses"]) == 2
    ck2 = tmp_path / "b.ckpt"
    assert run("train", "--data", data, "--init", ck, "--out", ck2, "--epochs", 1) == 0
    cont = load_params(ck2)
    assert cont.dims == first.dims
    assert not cont.equals(first)
    preds = tmp_path / "p.jsonl"
    assert run("predict", "--data", data, "--init", ck2, "--out", preds) == 0
    got = read_dataset(preds)
    assert [a.id for a in got] == [a.id for a in read_dataset(data)]
    assert all(a.labels is not None for a in got)
    assert run("score-task2", "--gold", data, "--pred", preds) == 0
    assert run("score-task1", "--gold", data, "--pred", preds) == 0


def test_train_deterministic_bytes(data, tmp_path):
    a, b = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    for ck in (a, b):
        assert run("train", "--data", data, "--out", ck, "--epochs", 2, "--seed", 5) == 0
    assert a.read_bytes() == b.read_bytes()


def test_project_and_filter(tmp_path):
    corpus = make_parallel_corpus(12, seed=4, no_propaganda_rate=0.5)
    write_parallel(corpus, tmp_path / "p.jsonl", tmp_path / "p.align")
    out = tmp_path / "proj.jsonl"
    assert run("project", "--data", tmp_path / "p.jsonl", "--align", tmp_path / "p.align", "--out", out,
               "--id-suffix=-t", "--report", tmp_path / "r.json") == 0
    proj = read_dataset(out)
    assert [a.id for a in proj] == [ex.source.id + "-t" for ex in corpus]
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["spans_in"] == rep["spans_out"] + rep["spans_dropped"]
    filt = tmp_path / "f.jsonl"
    assert run("filter", "--data", out, "--out", filt) == 0
    assert read_dataset(filt) == [a for a in proj if a.spans]


def test_bad_alignment_file_exit_1(tmp_path):
    corpus = make_parallel_corpus(2, seed=4)
    write_parallel(corpus, tmp_path / "p.jsonl", tmp_path / "p.align")
    (tmp_path / "p.align").write_text("0-0 x\n0-0\n")
    assert run("project", "--data", tmp_path / "p.jsonl", "--align", tmp_path / "p.align",
               "--out", tmp_path / "o.jsonl") == 1


def test_module_entry_point(data):
    res = subprocess.run([sys.executable, "-m", "propspan", "stats", "--data", str(data), "--format", "structured"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["n_examples"] == 16
