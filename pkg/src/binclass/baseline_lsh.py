"""Signed random projection codes and the "LSH + Hamming centroid" baseline.

The original comparison trains a linear SVM on LSH codes. Here the baseline
instead assigns each class the bit-wise majority of its codes and classifies
by nearest class code, so it shares the exact inference path of the learned
models.
"""

from __future__ import annotations

import numpy as np

from .bitcore import BitMatrix
from .dataset import Dataset, Preprocessor
from .hashfn import Model, sign_codes


def lsh_projection(d: int, r: int, seed: int) -> np.ndarray:
    if r < 1:
        raise ValueError(f"need at least one bit, got r={r}")
    return np.random.default_rng(seed).standard_normal((d, r))


def lsh_codes(X: np.ndarray, r: int, seed: int) -> BitMatrix:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return sign_codes(X @ lsh_projection(X.shape[1], r, seed))


def class_centroid_signs(signs: np.ndarray, labels: np.ndarray, n_classes: int) -> np.ndarray:
    """Per-class ``sgn(sum of member codes)`` as a C x r +/-1 array, ties -> +1."""
    counts = np.bincount(labels, minlength=n_classes)
    if np.any(counts == 0):
        raise ValueError(f"classes {np.flatnonzero(counts == 0).tolist()} are empty")
    sums = np.zeros((n_classes, signs.shape[1]), dtype=np.int64)
    np.add.at(sums, labels, signs.astype(np.int64))
    return np.where(sums >= 0, 1, -1).astype(np.int8)


def lsh_classifier(train: Dataset, r: int, seed: int, preprocessor: Preprocessor | None = None) -> Model:
    """Baseline model on ``train`` (features assumed already standardized)."""
    pre = preprocessor if preprocessor is not None else Preprocessor.identity(train.d)
    P = lsh_projection(train.d, r, seed)
    codes = sign_codes(train.X @ P).to_signs()
    W = class_centroid_signs(codes, train.labels, train.n_classes)
    return Model(P, BitMatrix.from_signs(W), pre, loss="lsh", metadata={"r": r, "seed": seed})
