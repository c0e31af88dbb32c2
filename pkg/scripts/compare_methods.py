"""Accuracy, timing and memory comparison on seeded Gaussian blobs.

Mirrors the layout of the accuracy/time table and the memory table at desk
scale. The baseline is "LSH + Hamming centroid", not LSH + linear SVM.

    python scripts/compare_methods.py --bits 128 --classes 10
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from binclass.hashfn import predict_batch
from binclass.pipeline import train_model
from binclass.synthetic import blobs_train_test


@dataclass
class Config:
    n_train: int = 5000
    n_test: int = 1000
    classes: int = 10
    dim: int = 64
    spread: float = 0.4
    bits: int = 128
    iters: int = 10
    seed: int = 0


def run(cfg: Config) -> list[dict]:
    train, test = blobs_train_test(cfg.n_train, cfg.n_test, cfg.classes, cfg.dim, cfg.seed, spread=cfg.spread)
    rows = []
    for loss, name in (("lsh", "LSH + Hamming centroid"), ("exp", "Binary-Exponential"), ("hinge", "Binary-Hinge")):
        model, rep = train_model(train, loss, cfg.bits, iters=cfg.iters, seed=cfg.seed, test=test)
        t = time.perf_counter()
        predict_batch(model, test.X)
        test_time = (time.perf_counter() - t) / test.n
        words = -(-cfg.bits // 64)
        rows.append({
            "method": name,
            "acc": 100 * rep.test_accuracy,
            "train_time": rep.timings["total_train"],
            "test_time": test_time,
            # memory in MB: training features as float64 vs packed codes; model as P + W
            "features_real_mb": train.n * train.d * 8 / 2**20,
            "features_binary_mb": train.n * words * 8 / 2**20,
            "model_real_svm_mb": cfg.classes * train.d * 8 / 2**20,
            "model_ours_mb": (rep.p_bytes + rep.w_bytes) / 2**20,
        })
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    p.add_argument("--json", action="store_true")
    args = vars(p.parse_args())
    as_json = args.pop("json")
    cfg = Config(**args)
    rows = run(cfg)
    if as_json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"{'method':<24} {'acc (%)':>8} {'train (s)':>10} {'test (s)':>10} {'model (MB)':>11}")
    for r in rows:
        print(f"{r['method']:<24} {r['acc']:>8.2f} {r['train_time']:>10.3f} {r['test_time']:>10.2e} {r['model_ours_mb']:>11.4f}")
    r = rows[0]
    print(f"\ntraining features: {r['features_real_mb']:.2f} MB real vs {r['features_binary_mb']:.3f} MB packed codes")
    print(f"real-valued linear model would need {r['model_real_svm_mb']:.4f} MB")


if __name__ == "__main__":
    main()
