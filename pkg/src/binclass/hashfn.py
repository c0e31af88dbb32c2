"""Linear hash function fit, encoding, and Hamming-space classification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bitcore import BitMatrix, BitVector, argmin_hamming, argmin_hamming_batch, pack_signs
from .dataset import Preprocessor

LOSSES = ("exp", "hinge", "lsh")


@dataclass(frozen=True)
class Model:
    """Trained classifier: projection ``P`` (d x r) plus binary class codes ``W`` (C x r)."""

    P: np.ndarray
    W: BitMatrix
    preprocessor: Preprocessor
    loss: str = "exp"
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        P = np.asarray(self.P, dtype=np.float64)
        if P.ndim != 2:
            raise ValueError("P must be 2-D")
        if P.shape[1] != self.W.cols:
            raise ValueError(f"P has {P.shape[1]} columns but W codes have {self.W.cols} bits")
        if P.shape[0] != self.preprocessor.d:
            raise ValueError(f"P has {P.shape[0]} rows but preprocessor expects d={self.preprocessor.d}")
        if not np.all(np.isfinite(P)):
            raise ValueError("P must be finite")
        if self.loss not in LOSSES:
            raise ValueError(f"unknown loss {self.loss!r}")
        object.__setattr__(self, "P", P)

    @property
    def d(self) -> int:
        return self.P.shape[0]

    @property
    def r(self) -> int:
        return self.P.shape[1]

    @property
    def n_classes(self) -> int:
        return self.W.rows


def default_ridge(X: np.ndarray) -> float:
    X = np.asarray(X, dtype=np.float64)
    return 1e-6 * float(np.einsum("ij,ij->", X, X)) / X.shape[1]


def fit_projection(X: np.ndarray, B, ridge: float | None = None) -> np.ndarray:
    """Least-squares projection from features to +/-1 codes.

    Solves ``(X^T X + ridge * I) P = X^T B`` by Cholesky factorization.

    Args:
        X: n x d feature matrix.
        B: n x r codes, either a :class:`BitMatrix` or a +/-1 array.
        ridge: Tikhonov weight; ``None`` picks ``1e-6 * trace(X^T X) / d``.

    Returns:
        The d x r projection matrix.

    Raises:
        ValueError: if the system is singular (only possible with ``ridge == 0``).
    """
    X = np.asarray(X, dtype=np.float64)
    Bt = B.to_signs() if isinstance(B, BitMatrix) else np.asarray(B)
    Bt = Bt.astype(np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("X must be a non-empty 2-D matrix")
    if Bt.shape[0] != X.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows, codes have {Bt.shape[0]}")
    if ridge is None:
        ridge = default_ridge(X)
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    G = X.T @ X
    G[np.diag_indices_from(G)] += ridge
    try:
        factor = scipy.linalg.cho_factor(G, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        raise ValueError(
            "X^T X + ridge*I is singular (features collinear or d > n); use ridge > 0"
        ) from None
    # cho_factor accepts numerically semi-definite matrices; reject those too
    diag = np.abs(np.diag(factor[0]))
    if diag.min() <= np.sqrt(np.finfo(float).eps) * max(diag.max(), 1e-300):
        raise ValueError("X^T X + ridge*I is numerically singular; use ridge > 0")
    return scipy.linalg.cho_solve(factor, X.T @ Bt, check_finite=False)


def sign_codes(Z: np.ndarray) -> BitMatrix:
    """Pack ``sgn(Z)`` row-wise with sgn(0) -> +1."""
    Z = np.atleast_2d(Z)
    return BitMatrix(pack_signs(Z >= 0), Z.shape[1])


def encode_batch(model: Model, X: np.ndarray) -> BitMatrix:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.d:
        raise ValueError(f"dimension mismatch: data has {X.shape[1]} features, model expects {model.d}")
    return sign_codes(model.preprocessor.transform(X) @ model.P)


def encode(model: Model, x: np.ndarray) -> BitVector:
    """Hash one sample: bit k is ``sgn(sum_j P[j, k] * x_std[j])``, ties -> +1."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("encode takes a single feature vector; use encode_batch")
    return encode_batch(model, x[None, :]).row(0)


def predict(model: Model, x: np.ndarray) -> int:
    return argmin_hamming(encode(model, x), model.W)[0]


def predict_batch(model: Model, X: np.ndarray, return_distance: bool = False):
    idx, dist = argmin_hamming_batch(encode_batch(model, X), model.W)
    return (idx, dist) if return_distance else idx


def accuracy(model: Model, X: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(predict_batch(model, X) == np.asarray(labels)))
