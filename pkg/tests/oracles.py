"""Slow, independent reference computations used as test oracles."""

import itertools
import math

import numpy as np


def direct_exp_objective(W, B, labels):
    """sum_i sum_c exp(-(w_{c_i}.b_i - w_c.b_i)) by explicit loops, no clamping."""
    total = 0.0
    for i, ci in enumerate(labels):
        own = sum(int(a) * int(b) for a, b in zip(W[ci], B[i]))
        for c in range(len(W)):
            other = sum(int(a) * int(b) for a, b in zip(W[c], B[i]))
            total += math.exp(-(own - other))
    return total


def all_sign_vectors(C):
    return np.array(list(itertools.product([-1, 1], repeat=C)), dtype=np.int8)


def exp_objective_over_bit(W, B, labels, k):
    """Direct objective for every assignment of column k of W (vectorised over assignments)."""
    cands = all_sign_vectors(W.shape[0]).astype(np.float64)
    Wf, Bf = W.astype(np.float64), B.astype(np.float64)
    base = Bf @ Wf.T - np.outer(Bf[:, k], Wf[:, k])  # scores without bit k
    # scores[a, i, c] for candidate a
    scores = base[None, :, :] + cands[:, None, :] * Bf[None, :, k, None]
    own = scores[:, np.arange(len(labels)), labels]
    return cands.astype(np.int8), np.exp(scores - own[:, :, None]).sum(axis=(1, 2))


def bqp_value(H, g, w):
    w = np.asarray(w, dtype=np.float64)
    return 0.5 * w @ H @ w + w @ g


def bqp_global_min(H, g):
    cands = all_sign_vectors(len(g)).astype(np.float64)
    vals = 0.5 * np.einsum("ai,ij,aj->a", cands, H, cands) + cands @ g
    return vals.min()
