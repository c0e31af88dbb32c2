"""Command-line interface: ``binclass {train,predict,eval,bench}``.

Exit codes: 0 ok, 1 data/runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as dsmod
from . import modelio
from .bench import run_bench
from .hashfn import predict_batch
from .pipeline import train_model


class CliError(Exception):
    pass


def _threads(n):
    if n is None:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def _emit(obj, path):
    text = json.dumps(obj, indent=2)
    if path is None or str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _is_empty(path) -> bool:
    try:
        return not Path(path).read_text().strip()
    except OSError as exc:
        raise CliError(f"{path}: cannot read ({exc.strerror})") from exc


def _load_features(path, fmt: str, d: int, labeled: bool = True):
    """Features (and labels, if present) sized for a model of dimension ``d``."""
    if fmt == "libsvm":
        ds = dsmod.load_libsvm(path, n_features=d)
        X, labels = ds.X, ds.labels
    elif labeled:
        ds = dsmod.load_csv(path)
        X, labels = ds.X, ds.labels
    else:
        X = np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2))
        labels = None
    if X.shape[1] != d:
        raise CliError(f"{path}: data has {X.shape[1]} features, model expects d={d}")
    return X, labels


def render_table(report: dict) -> str:
    acc = report.get("test_accuracy")
    acc = "-" if acc is None else f"{100 * acc:.2f}"
    rows = [
        ("Method", "acc (%)", "train time (s)", "test time (s/sample)", "P (MB)", "W (MB)"),
        (
            {"exp": "Binary-Exponential", "hinge": "Binary-Hinge", "lsh": "LSH + Hamming centroid"}[report["loss"]],
            acc,
            f"{report['timings'].get('total_train', 0.0):.3f}",
            f"{report.get('test_time_per_sample', 0.0):.2e}",
            f"{report['p_bytes'] / 2**20:.4f}",
            f"{report['w_bytes'] / 2**20:.6f}",
        ),
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_train(args) -> int:
    ds = dsmod.load(args.data, args.format)
    if args.test_fraction > 0:
        train, test = dsmod.split(ds, args.test_fraction, args.seed)
    else:
        train, test = ds, None
    with _threads(args.threads):
        model, report = train_model(
            train,
            loss=args.loss,
            r=args.bits,
            iters=args.iters,
            seed=args.seed,
            ridge=args.ridge,
            standardize=not args.no_standardize,
            test=test,
        )
    size = modelio.save(model, args.out)
    out = report.to_dict(include_bit_trace=args.bit_trace)
    out["test_time_per_sample"] = report.timings["evaluate"] / (train.n + (test.n if test else 0))
    out["data"] = {"path": str(args.data), "n": ds.n, "d": ds.d, "n_classes": ds.n_classes,
                   "n_train": train.n, "n_test": 0 if test is None else test.n}
    out["model"] = {"path": str(args.out), "bytes": size}
    if args.metrics:
        _emit(out, args.metrics)
    if args.table:
        print(render_table(out))
    elif not args.metrics:
        _emit(out, None)
    return 0


def cmd_predict(args) -> int:
    model = modelio.load(args.model)
    if _is_empty(args.data):
        pred = np.zeros(0, dtype=np.int64)
    else:
        X, _ = _load_features(args.data, args.format, model.d, labeled=not args.no_labels)
        pred = predict_batch(model, X)
    if args.json:
        _emit({"predictions": pred.tolist()}, None)
    else:
        sys.stdout.write("".join(f"{p}\n" for p in pred))
    return 0


def evaluate(pred: np.ndarray, labels: np.ndarray, n_classes: int) -> dict:
    if labels.size and labels.max() >= n_classes:
        raise CliError(f"label {labels.max()} outside the model's {n_classes} classes")
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (labels, pred), 1)
    support = confusion.sum(axis=1)
    present = support > 0
    recall = np.divide(np.diag(confusion), support, out=np.zeros(n_classes), where=present)
    return {
        "n": int(labels.size),
        "correct": int(np.trace(confusion)),
        "accuracy": float(np.trace(confusion) / labels.size) if labels.size else None,
        "confusion": confusion.tolist(),
        "per_class_recall": recall.tolist(),
        "mean_recall": float(recall[present].mean()) if present.any() else None,
        "balanced": bool(present.any() and np.all(support[present] == support[present][0])),
    }


def cmd_eval(args) -> int:
    model = modelio.load(args.model)
    X, labels = _load_features(args.data, args.format, model.d)
    _emit(evaluate(predict_batch(model, X), labels, model.n_classes), args.metrics)
    return 0


def cmd_bench(args) -> int:
    with _threads(args.threads):
        report = run_bench(args.classes, args.bits, args.dim, args.queries, args.seed, args.reps)
    _emit(report, args.out)
    if report["speedup"] is not None:
        print(f"hamming/dense throughput ratio: {report['speedup']:.2f}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="binclass", description="Binary-code / binary-weight classifiers.")
    sub = p.add_subparsers(dest="command", required=True)

    def positive(s):
        v = int(s)
        if v < 1:
            raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
        return v

    def nonneg(s):
        v = int(s)
        if v < 0:
            raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
        return v

    def fraction(s):
        v = float(s)
        if not 0 <= v < 1:
            raise argparse.ArgumentTypeError(f"must be in [0, 1), got {v}")
        return v

    t = sub.add_parser("train", help="train a model and write it plus a metrics JSON")
    t.add_argument("--data", required=True)
    t.add_argument("--format", choices=["csv", "libsvm"], default="csv")
    t.add_argument("--loss", choices=["exp", "hinge", "lsh"], default="exp")
    t.add_argument("--bits", type=positive, default=32)
    t.add_argument("--iters", type=positive, default=10)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--ridge", type=float, default=None, help="default: 1e-6 * trace(X^T X) / d")
    t.add_argument("--test-fraction", type=fraction, default=0.2, help="0 trains on everything")
    t.add_argument("--out", required=True)
    t.add_argument("--metrics", default=None)
    t.add_argument("--no-standardize", action="store_true")
    t.add_argument("--table", action="store_true", help="print a text summary table")
    t.add_argument("--bit-trace", action="store_true", help="include per-bit objective values")
    t.add_argument("--threads", type=positive, default=None)
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="print one predicted class index per line")
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--format", choices=["csv", "libsvm"], default="csv")
    pr.add_argument("--no-labels", action="store_true", help="CSV rows hold features only")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_predict)

    e = sub.add_parser("eval", help="accuracy and confusion matrix as JSON")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--format", choices=["csv", "libsvm"], default="csv")
    e.add_argument("--metrics", default=None)
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="synthetic inference throughput")
    b.add_argument("--classes", type=positive, default=1000)
    b.add_argument("--bits", type=positive, default=128)
    b.add_argument("--dim", type=positive, default=4096)
    b.add_argument("--queries", type=nonneg, default=2000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--reps", type=positive, default=5)
    b.add_argument("--out", default=None)
    b.add_argument("--threads", type=positive, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, FloatingPointError) as exc:
        print(f"binclass {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
