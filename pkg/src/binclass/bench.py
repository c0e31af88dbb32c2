"""Inference throughput: Hamming argmin vs. dense float argmax vs. encoding."""

from __future__ import annotations

import time

import numpy as np

from .bitcore import BitMatrix, argmin_hamming_batch, pack_signs
from .hashfn import sign_codes


def _timed(fn, reps: int) -> tuple[list[float], object]:
    times, out = [], None
    for _ in range(reps):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return times, out


def _summary(times: list[float], count: int) -> dict:
    q1, med, q3 = np.percentile(times, [25, 50, 75])
    return {
        "median_seconds": float(med),
        "iqr_seconds": float(q3 - q1),
        "per_second": float(count / med) if med > 0 else float("inf"),
        "seconds": [float(t) for t in times],
    }


def run_bench(classes: int, bits: int, dim: int, queries: int, seed: int = 0, reps: int = 5) -> dict:
    """Time the three inference stages on synthetic data.

    Throughputs are classifications (or encodings) per second, taken at the
    median over ``reps`` repetitions.
    """
    reps = max(reps, 5)
    report = {"classes": classes, "bits": bits, "dim": dim, "queries": queries, "seed": seed, "repetitions": reps}
    if queries == 0:
        report.update(hamming=None, dense=None, encode=None, speedup=None)
        return report
    rng = np.random.default_rng(seed)
    codebook = BitMatrix(pack_signs(rng.integers(0, 2, (classes, bits), dtype=np.int8)), bits)
    qcodes = BitMatrix(pack_signs(rng.integers(0, 2, (queries, bits), dtype=np.int8)), bits)
    Wf = rng.standard_normal((dim, classes)).astype(np.float32)
    Xf = rng.standard_normal((queries, dim)).astype(np.float32)
    P = rng.standard_normal((dim, bits)).astype(np.float32)

    ham_t, (ham_idx, _) = _timed(lambda: argmin_hamming_batch(qcodes, codebook), reps)
    dense_t, dense_idx = _timed(lambda: np.argmax(Xf @ Wf, axis=1), reps)
    enc_t, enc = _timed(lambda: sign_codes(Xf @ P), reps)

    report["hamming"] = _summary(ham_t, queries) | {"checksum": int(np.sum(ham_idx))}
    report["dense"] = _summary(dense_t, queries) | {"checksum": int(np.sum(dense_idx))}
    report["encode"] = _summary(enc_t, queries) | {"checksum": int(np.bitwise_count(enc.words).sum())}
    report["speedup"] = report["hamming"]["per_second"] / report["dense"]["per_second"]
    return report
