import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from binclass import modelio
from binclass.cli import main
from binclass.dataset import Dataset, write_csv, write_libsvm
from binclass.synthetic import make_blobs

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "metrics_schema.json").read_text())


def validate(obj, kind):
    jsonschema.validate(obj, {**SCHEMA, "$ref": f"#/$defs/{kind}"})


@pytest.fixture
def blobs_csv(tmp_path):
    p = tmp_path / "blobs.csv"
    write_csv(p, make_blobs(40, 4, 8, seed=0, spread=2.0))
    return p


def train(tmp_path, data, *extra, name="m"):
    out, metrics = tmp_path / f"{name}.bcls", tmp_path / f"{name}.json"
    code = main(["train", "--data", str(data), "--out", str(out), "--metrics", str(metrics), "--seed", "1", *extra])
    return code, out, metrics


@pytest.mark.parametrize("loss", ["exp", "hinge", "lsh"])
def test_train_writes_model_and_metrics(tmp_path, blobs_csv, loss):
    code, out, metrics = train(tmp_path, blobs_csv, "--loss", loss, "--bits", "32")
    assert code == 0
    report = json.loads(metrics.read_text())
    validate(report, "train")
    obj = report["objective"]
    assert all(b <= a + 1e-9 * abs(a) for a, b in zip(obj, obj[1:]))
    model = modelio.load(out)
    assert (model.r, model.n_classes, model.d) == (32, 4, 8)
    assert report["w_bytes"] == 4 * 1 * 8


def test_train_is_byte_deterministic(tmp_path, blobs_csv):
    _, a, _ = train(tmp_path, blobs_csv, "--loss", "exp", name="a")
    _, b, _ = train(tmp_path, blobs_csv, "--loss", "exp", name="b")
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["train", "--out", str(tmp_path / "m")])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["train", "--data", "x", "--out", "y", "--bits", "0"])
    assert e.value.code == 2


def test_data_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,0\n1,zz,1\n")
    assert main(["train", "--data", str(bad), "--out", str(tmp_path / "m")]) == 1
    assert "bad.csv:2" in capsys.readouterr().err
    assert main(["train", "--data", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "m")]) == 1


def test_predict_and_eval_consistency(tmp_path, blobs_csv, capsys):
    _, out, _ = train(tmp_path, blobs_csv, "--loss", "hinge", "--test-fraction", "0")
    capsys.readouterr()
    assert main(["predict", "--model", str(out), "--data", str(blobs_csv)]) == 0
    pred = np.array([int(s) for s in capsys.readouterr().out.split()])
    report = json.loads((tmp_path / "m.json").read_text())
    labels = np.loadtxt(blobs_csv, delimiter=",")[:, -1].astype(int)
    assert np.sum(pred == labels) == round(report["train_accuracy"] * len(labels))

    assert main(["eval", "--model", str(out), "--data", str(blobs_csv)]) == 0
    ev = json.loads(capsys.readouterr().out)
    validate(ev, "eval")
    assert ev["correct"] == np.sum(pred == labels)
    conf = np.array(ev["confusion"])
    assert conf.sum(axis=1).tolist() == np.bincount(labels).tolist()
    assert ev["balanced"] and ev["accuracy"] == pytest.approx(ev["mean_recall"])


def test_predict_row_order_invariant(tmp_path, blobs_csv, capsys):
    _, out, _ = train(tmp_path, blobs_csv)
    rows = blobs_csv.read_text().splitlines()
    rev = tmp_path / "rev.csv"
    rev.write_text("\n".join(rows[::-1]) + "\n")
    capsys.readouterr()
    main(["predict", "--model", str(out), "--data", str(blobs_csv), "--json"])
    fwd = json.loads(capsys.readouterr().out)["predictions"]
    main(["predict", "--model", str(out), "--data", str(rev), "--json"])
    assert json.loads(capsys.readouterr().out)["predictions"] == fwd[::-1]


def test_predict_empty_and_unlabeled(tmp_path, blobs_csv, capsys):
    _, out, _ = train(tmp_path, blobs_csv)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    capsys.readouterr()
    assert main(["predict", "--model", str(out), "--data", str(empty)]) == 0
    assert capsys.readouterr().out == ""
    feats = tmp_path / "feats.csv"
    X = np.loadtxt(blobs_csv, delimiter=",")[:5, :-1]
    np.savetxt(feats, X, delimiter=",")
    assert main(["predict", "--model", str(out), "--data", str(feats), "--no-labels"]) == 0
    assert len(capsys.readouterr().out.split()) == 5


def test_dimension_mismatch_exit_1(tmp_path, blobs_csv):
    _, out, _ = train(tmp_path, blobs_csv)
    other = tmp_path / "other.csv"
    other.write_text("1,2,0\n3,4,1\n")
    assert main(["predict", "--model", str(out), "--data", str(other)]) == 1
    assert main(["eval", "--model", str(out), "--data", str(other)]) == 1


def test_memorizing_model_scores_one(tmp_path, capsys):
    rng = np.random.default_rng(0)
    ds = Dataset(rng.normal(size=(3, 6)) * 5, [0, 1, 2], 3)
    data = tmp_path / "three.svm"
    write_libsvm(data, ds)
    out = tmp_path / "m.bcls"
    assert main(["train", "--data", str(data), "--format", "libsvm", "--loss", "lsh", "--bits", "64",
                 "--test-fraction", "0", "--no-standardize", "--out", str(out), "--metrics", str(tmp_path / "x.json")]) == 0
    capsys.readouterr()
    main(["eval", "--model", str(out), "--data", str(data), "--format", "libsvm"])
    assert json.loads(capsys.readouterr().out)["accuracy"] == 1.0


def test_table_flag(tmp_path, blobs_csv, capsys):
    capsys.readouterr()
    code, _, _ = train(tmp_path, blobs_csv, "--loss", "hinge", "--table")
    assert code == 0
    assert "Binary-Hinge" in capsys.readouterr().out


def test_bench_small(tmp_path, capsys):
    out = tmp_path / "bench.json"
    assert main(["bench", "--classes", "50", "--bits", "64", "--dim", "128", "--queries", "200", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    validate(rep, "bench")
    assert rep["hamming"]["per_second"] > 0 and rep["dense"]["per_second"] > 0
    assert len(rep["hamming"]["seconds"]) >= 5


def test_bench_zero_queries(capsys):
    assert main(["bench", "--queries", "0"]) == 0
    rep = json.loads(capsys.readouterr().out)
    validate(rep, "bench")
    assert rep["hamming"] is None


def test_bench_answers_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["bench", "--classes", "20", "--bits", "32", "--dim", "64", "--queries", "100", "--seed", "3"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b), "--threads", "1"])
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    for stage in ("hamming", "dense", "encode"):
        assert ra[stage]["checksum"] == rb[stage]["checksum"]
