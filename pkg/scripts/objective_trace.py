"""Per-bit objective values while sweeping W and B (exponential loss).

Writes one CSV row per bit update: alternation, phase, bit, objective.

    python scripts/objective_trace.py --out trace.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from binclass.dataset import apply, fit_standardizer
from binclass.exp_solver import train_exp
from binclass.synthetic import make_blobs


@dataclass
class Config:
    per_class: int = 200
    classes: int = 5
    dim: int = 32
    bits: int = 32
    iters: int = 3
    seed: int = 0
    spread: float = 0.4


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--bits", type=int, default=Config.bits)
    p.add_argument("--iters", type=int, default=Config.iters)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--out", default="-")
    args = p.parse_args()
    cfg = Config(bits=args.bits, iters=args.iters, seed=args.seed)

    ds = make_blobs(cfg.per_class, cfg.classes, cfg.dim, cfg.seed, spread=cfg.spread)
    ds = apply(fit_standardizer(ds), ds)
    _, _, report = train_exp(ds, cfg.bits, outer_iters=cfg.iters, seed=cfg.seed, tol=0.0)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["alternation", "phase", "bit", "objective"])
    for j, block in enumerate(report.bit_trace):
        for k, value in enumerate(block["values"]):
            w.writerow([j // 2 + 1, block["phase"], k, repr(value)])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
