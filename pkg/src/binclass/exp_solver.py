"""Alternating minimization of the exponential margin loss over binary W and B.

Objective::

    J(W, B) = sum_i sum_c exp(M[i, c]),   M[i, c] = (w_c - w_{c_i})^T b_i

with W (C x r) and B (n x r) in {-1, +1}. Each pass sweeps the bits
k = 0..r-1 in order. For the weights, bit k of every class code is a binary
quadratic program over C variables solved by greedy single-bit flipping until
no flip lowers it. For the codes, bit k of every sample has a closed form.

All arrays here are dense int8 +/-1; packing into :class:`BitMatrix` happens
at the ``train_exp`` boundary.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .baseline_lsh import class_centroid_signs, lsh_codes
from .bitcore import BitMatrix, BitVector
from .dataset import Dataset
from .report import TrainReport

# exponents are clamped to this range before exp(); |margin| <= 2r never
# reaches it for r < 250
EXP_CLAMP = 500.0


def exp_constants() -> tuple[float, float, float, float]:
    """``(u, v, u2, v2)`` with exp(w*b) = u - v*w*b and exp(-2b) = u2 + v2*b on +/-1."""
    e = math.e
    return (1 / e + e) / 2, (1 / e - e) / 2, (e**-2 + e**2) / 2, (e**-2 - e**2) / 2


U, V, U2, V2 = exp_constants()


def _exp(a: np.ndarray) -> np.ndarray:
    return np.exp(np.clip(a, -EXP_CLAMP, EXP_CLAMP))


def margins(W: np.ndarray, B: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """From-scratch margin table ``M[i, c] = (w_c - w_{c_i})^T b_i``."""
    S = B.astype(np.float64) @ W.astype(np.float64).T
    return S - S[np.arange(S.shape[0]), labels][:, None]


def exp_objective(W: np.ndarray, B: np.ndarray, labels: np.ndarray) -> float:
    return float(_exp(margins(W, B, labels)).sum())


def one_hot(labels: np.ndarray, n_classes: int) -> scipy.sparse.csr_matrix:
    """Sparse C x n label matrix Y with Y[c, i] = 1 iff sample i has label c."""
    n = labels.shape[0]
    return scipy.sparse.csr_matrix((np.ones(n), (labels, np.arange(n))), shape=(n_classes, n))


@dataclass
class ExpState:
    W: np.ndarray
    B: np.ndarray
    labels: np.ndarray
    M: np.ndarray
    Y: scipy.sparse.csr_matrix

    @classmethod
    def create(cls, W, B, labels, n_classes: int | None = None) -> ExpState:
        W = np.asarray(W, dtype=np.int8)
        B = np.asarray(B, dtype=np.int8)
        labels = np.asarray(labels, dtype=np.int64)
        if W.shape[1] != B.shape[1]:
            raise ValueError(f"W has {W.shape[1]} bits, B has {B.shape[1]}")
        if labels.shape != (B.shape[0],):
            raise ValueError("one label per code row required")
        C = W.shape[0] if n_classes is None else n_classes
        return cls(W.copy(), B.copy(), labels, margins(W, B, labels), one_hot(labels, C))

    def copy(self) -> ExpState:
        return ExpState(self.W.copy(), self.B.copy(), self.labels, self.M.copy(), self.Y)

    @property
    def objective(self) -> float:
        return float(_exp(self.M).sum())

    def _bit_split(self, k: int):
        """(d, M without bit k) where d[i, c] = w_c(k) - w_{c_i}(k)."""
        wk = self.W[:, k].astype(np.float64)
        d = wk[None, :] - wk[self.labels][:, None]
        return d, self.M - d * self.B[:, k][:, None]


@dataclass(frozen=True)
class BqpInstance:
    """``min_w 0.5 * w^T H w + w^T g`` over w in {-1, +1}^C; H need not be symmetric."""

    H: np.ndarray
    g: np.ndarray

    def value(self, w) -> float:
        w = _as_signs(w).astype(np.float64)
        return float(0.5 * w @ self.H @ w + w @ self.g)


class BitflipCapExceeded(RuntimeError):
    def __init__(self, best: np.ndarray, flips: int):
        super().__init__(f"bit flipping did not certify a local optimum within {flips} flips")
        self.best = best


def _as_signs(w) -> np.ndarray:
    if isinstance(w, BitVector):
        return w.to_signs()
    return np.asarray(w)


def build_bqp(state: ExpState, k: int) -> BqpInstance:
    """Quadratic model of J in the k-th bit of every class code.

    With ``gamma[i, c] = exp(M[i, c] with bit k removed)`` the loss term is
    ``gamma * (u - v b w_c)(u + v b w_{c_i})``; collecting terms gives
    ``H = -2 v^2 Y Gamma`` and ``g = uv Y (b * Gamma 1) - uv Gamma^T b``.
    """
    _, Mk = state._bit_split(k)
    gamma = _exp(Mk)
    if not np.all(np.isfinite(gamma)):
        raise FloatingPointError("non-finite gamma despite clamping")
    b = state.B[:, k].astype(np.float64)
    H = -2 * V**2 * np.asarray(state.Y @ gamma)
    g = U * V * (state.Y @ (b * gamma.sum(axis=1))) - U * V * (gamma.T @ b)
    return BqpInstance(H, np.asarray(g).reshape(-1))


def flip_gains(H: np.ndarray, g: np.ndarray, w: np.ndarray) -> np.ndarray:
    """All single-flip gains ``F(w with bit c flipped) - F(w)`` at once."""
    w = w.astype(np.float64)
    return 2 * np.diag(H) - w * ((H + H.T) @ w) - 2 * w * g


def flip_gain(inst: BqpInstance, w, c: int) -> float:
    w = _as_signs(w).astype(np.float64)
    if not 0 <= c < w.shape[0]:
        raise IndexError(f"class {c} out of range")
    H, g = inst.H, inst.g
    return float(2 * H[c, c] - w[c] * ((H[c, :] + H[:, c]) @ w) - 2 * w[c] * g[c])


def bitflip_search(H: np.ndarray, g: np.ndarray, w0: np.ndarray, max_flips: int | None = None) -> tuple[np.ndarray, int]:
    """Greedy sequential bit flipping to a local optimum.

    Repeatedly flips the bit with the most negative gain (lowest index on
    ties) until every gain is non-negative.

    Returns:
        ``(w, flips)``, w as an int8 +/-1 array.

    Raises:
        BitflipCapExceeded: after ``max_flips`` (default ``100 * C``) flips.
    """
    w = np.array(w0, dtype=np.float64)
    C = w.shape[0]
    if max_flips is None:
        max_flips = 100 * C
    S = H + H.T
    diag2 = 2 * np.diag(H)
    s = S @ w
    # rounding noise floor for "negative": gains are sums of O(C) terms of this size
    tol = 16 * np.finfo(float).eps * (np.abs(H).sum(axis=0).max() + np.abs(H).sum(axis=1).max() + np.abs(g).max() + 1e-300)
    flips = 0
    while True:
        gains = diag2 - w * s - 2 * w * g
        c = int(np.argmin(gains))
        if gains[c] >= -tol:
            return w.astype(np.int8), flips
        if flips >= max_flips:
            raise BitflipCapExceeded(w.astype(np.int8), flips)
        s -= 2 * w[c] * S[:, c]
        w[c] = -w[c]
        flips += 1


def solve_bqp_bitflip(inst: BqpInstance, w0) -> BitVector:
    w, _ = bitflip_search(inst.H, inst.g, _as_signs(w0))
    return BitVector.from_signs(w)


def update_weights_pass(state: ExpState, trace: list | None = None) -> ExpState:
    """One sweep over the r bits of W, each solved as a BQP warm-started at the current bits."""
    state = state.copy()
    for k in range(state.W.shape[1]):
        inst = build_bqp(state, k)
        wk, _ = bitflip_search(inst.H, inst.g, state.W[:, k])
        if np.any(wk != state.W[:, k]):
            _, Mk = state._bit_split(k)
            state.W[:, k] = wk
            d, _ = state._bit_split(k)
            state.M = Mk + d * state.B[:, k][:, None]
        if trace is not None:
            trace.append(state.objective)
    return state


def update_codes_pass(state: ExpState, trace: list | None = None) -> ExpState:
    """One sweep over the r bits of B with the closed form ``b^k = -sgn(v2 (z - zbar))``.

    ``z(i)`` sums exp(M without bit k) over classes with w_{c_i}(k)=1, w_c(k)=-1,
    ``zbar(i)`` over the reverse case. Ties keep the current bit.
    """
    state = state.copy()
    for k in range(state.B.shape[1]):
        d, Mk = state._bit_split(k)
        Z = _exp(Mk)
        z = np.where(d < 0, Z, 0.0).sum(axis=1)
        zbar = np.where(d > 0, Z, 0.0).sum(axis=1)
        s = V2 * (z - zbar)
        bk = np.where(s == 0, state.B[:, k], np.where(s > 0, -1, 1)).astype(np.int8)
        state.B[:, k] = bk
        state.M = Mk + d * bk[:, None]
        if trace is not None:
            trace.append(state.objective)
    return state


def initial_codes(X: np.ndarray, labels: np.ndarray, n_classes: int, r: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed-random-projection codes for B and per-class sign-of-sum codes for W."""
    B = lsh_codes(X, r, seed).to_signs()
    W = class_centroid_signs(B, labels, n_classes)
    return W, B


def train_exp(ds: Dataset, r: int, outer_iters: int = 10, seed: int = 0, tol: float = 1e-4) -> tuple[BitMatrix, BitMatrix, TrainReport]:
    """Alternate weight and code passes until the relative decrease per alternation is below ``tol``."""
    if r < 1 or outer_iters < 1:
        raise ValueError("need r >= 1 and outer_iters >= 1")
    ds.require_all_classes()
    report = TrainReport(loss="exp", r=r, n_classes=ds.n_classes, seed=seed)
    t0 = time.perf_counter()
    W, B = initial_codes(ds.X, ds.labels, ds.n_classes, r, seed)
    state = ExpState.create(W, B, ds.labels, ds.n_classes)
    report.timings["init"] = time.perf_counter() - t0
    report.record(state.objective)
    report.alternation_objective.append(state.objective)
    t_w = t_b = 0.0
    for it in range(outer_iters):
        prev = state.objective
        t = time.perf_counter()
        trace: list[float] = []
        state = update_weights_pass(state, trace)
        t_w += time.perf_counter() - t
        report.bit_trace.append({"phase": "W", "values": trace})
        report.record(state.objective)
        t = time.perf_counter()
        trace = []
        state = update_codes_pass(state, trace)
        t_b += time.perf_counter() - t
        report.bit_trace.append({"phase": "B", "values": trace})
        report.record(state.objective)
        report.alternation_objective.append(state.objective)
        report.n_alternations = it + 1
        if prev - state.objective < tol * prev:
            report.converged = True
            break
    report.timings["update_W"] = t_w
    report.timings["update_B"] = t_b
    return BitMatrix.from_signs(state.W), BitMatrix.from_signs(state.B), report
