"""Closed-form alternating minimization for the hinge-loss surrogate.

Once the slack variables are eliminated and the constant ||W||^2 dropped, the
problem becomes the linear surrogate

    L(W, B) = sum_i sum_c (w_c^T b_i - w_{c_i}^T b_i)
            = sum_i (sum_c w_c - C w_{c_i})^T b_i,

which is separable per bit in both blocks. Ties in sgn(.) keep the previous
bit so that a fixed point is detected by bit identity.
"""

from __future__ import annotations

import time

import numpy as np

from .bitcore import BitMatrix
from .dataset import Dataset
from .exp_solver import initial_codes
from .report import TrainReport


def hinge_surrogate(W: np.ndarray, B: np.ndarray, labels: np.ndarray) -> int:
    W = np.asarray(W, dtype=np.int64)
    Wo = W.sum(axis=0)[None, :] - W.shape[0] * W[labels]
    return int(np.einsum("ij,ij->", Wo, np.asarray(B, dtype=np.int64)))


def _sgn_keep(t: np.ndarray, prev: np.ndarray | None) -> np.ndarray:
    fallback = 1 if prev is None else prev
    return np.where(t > 0, 1, np.where(t < 0, -1, fallback)).astype(np.int8)


def update_weights_hinge(B: np.ndarray, labels: np.ndarray, n_classes: int, prev: np.ndarray | None = None) -> np.ndarray:
    """``w_c = sgn(C * S_c - S)`` with S_c the class code sum, S the total sum."""
    B = np.asarray(B, dtype=np.int64)
    counts = np.bincount(labels, minlength=n_classes)
    if np.any(counts == 0):
        raise ValueError(f"classes {np.flatnonzero(counts == 0).tolist()} have no samples")
    Sc = np.zeros((n_classes, B.shape[1]), dtype=np.int64)
    np.add.at(Sc, labels, B)
    return _sgn_keep(n_classes * Sc - B.sum(axis=0), prev)


def update_codes_hinge(W: np.ndarray, labels: np.ndarray, prev: np.ndarray | None = None) -> np.ndarray:
    """``b_i = -sgn(sum_c w_c - C w_{c_i})`` per coordinate."""
    W = np.asarray(W, dtype=np.int64)
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= W.shape[0]):
        raise ValueError("labels out of range for W")
    Wo = W.sum(axis=0)[None, :] - W.shape[0] * W[labels]
    return _sgn_keep(-Wo, prev)


def train_hinge(ds: Dataset, r: int, outer_iters: int = 10, seed: int = 0) -> tuple[BitMatrix, BitMatrix, TrainReport]:
    if r < 1 or outer_iters < 1:
        raise ValueError("need r >= 1 and outer_iters >= 1")
    ds.require_all_classes()
    report = TrainReport(loss="hinge", r=r, n_classes=ds.n_classes, seed=seed)
    t0 = time.perf_counter()
    W, B = initial_codes(ds.X, ds.labels, ds.n_classes, r, seed)
    report.timings["init"] = time.perf_counter() - t0
    report.record(hinge_surrogate(W, B, ds.labels))
    report.alternation_objective.append(report.objective[-1])
    t_w = t_b = 0.0
    for it in range(outer_iters):
        t = time.perf_counter()
        W_new = update_weights_hinge(B, ds.labels, ds.n_classes, prev=W)
        t_w += time.perf_counter() - t
        report.record(hinge_surrogate(W_new, B, ds.labels))
        t = time.perf_counter()
        B_new = update_codes_hinge(W_new, ds.labels, prev=B)
        t_b += time.perf_counter() - t
        report.record(hinge_surrogate(W_new, B_new, ds.labels))
        report.alternation_objective.append(report.objective[-1])
        report.n_alternations = it + 1
        unchanged = np.array_equal(W_new, W) and np.array_equal(B_new, B)
        W, B = W_new, B_new
        if unchanged:
            report.converged = True
            break
    report.timings["update_W"] = t_w
    report.timings["update_B"] = t_b
    return BitMatrix.from_signs(W), BitMatrix.from_signs(B), report
