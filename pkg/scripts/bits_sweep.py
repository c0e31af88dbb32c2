"""Test accuracy and training time against code length for all three methods.

    python scripts/bits_sweep.py --bits 16 32 64 128 256
"""

import argparse
import json

from binclass.pipeline import train_model
from binclass.synthetic import blobs_train_test


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--bits", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spread", type=float, default=0.4)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()

    train, test = blobs_train_test(5000, 1000, 10, 64, args.seed, spread=args.spread)
    results = []
    for r in args.bits:
        for loss in ("lsh", "exp", "hinge"):
            _, rep = train_model(train, loss, r, seed=args.seed, test=test)
            results.append({"bits": r, "loss": loss, "test_accuracy": rep.test_accuracy,
                            "train_seconds": rep.timings["total_train"]})
    if args.json:
        print(json.dumps(results, indent=2))
        return
    print(f"{'bits':>5} {'loss':>6} {'acc':>7} {'train (s)':>10}")
    for row in results:
        print(f"{row['bits']:>5} {row['loss']:>6} {row['test_accuracy']:>7.3f} {row['train_seconds']:>10.3f}")


if __name__ == "__main__":
    main()
