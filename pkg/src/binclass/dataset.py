"""Feature/label containers, CSV and libsvm loaders, splitting, standardization."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class Dataset:
    """Dense features ``X`` (n x d) with integer labels in ``[0, n_classes)``.

    ``classes`` keeps the original label values in index order so that
    predictions can be mapped back to what the input file used.
    """

    X: np.ndarray
    labels: np.ndarray
    n_classes: int
    classes: tuple = field(default=())

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError(f"X must be a non-empty 2-D matrix, got shape {X.shape}")
        if labels.shape != (X.shape[0],):
            raise DataError("one label per row required")
        if self.n_classes < 2:
            raise DataError(f"need at least 2 classes, got {self.n_classes}")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise DataError("labels must lie in [0, n_classes)")
        if not np.all(np.isfinite(X)):
            raise DataError("features must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def label_matrix(self) -> np.ndarray:
        """The C x n one-hot label matrix (dense; for checks on small sets)."""
        Y = np.zeros((self.n_classes, self.n))
        Y[self.labels, np.arange(self.n)] = 1.0
        return Y

    def subset(self, idx) -> Dataset:
        return Dataset(self.X[idx], self.labels[idx], self.n_classes, self.classes)

    def require_all_classes(self) -> None:
        empty = np.flatnonzero(self.class_counts() == 0)
        if empty.size:
            raise DataError(f"classes {empty.tolist()} have no training samples")


def _encode_labels(raw: list[str]) -> tuple[np.ndarray, int, tuple]:
    """Map raw label strings to dense indices 0..C-1.

    Integer labels map in sorted order (so {-1, +1} -> {0, 1} and 1..C ->
    0..C-1); anything else maps by first appearance. Files evaluated against
    the same model must therefore contain the same label set.
    """
    try:
        keys = [int(s) for s in raw]
        order = sorted(set(keys))
    except ValueError:
        keys = raw
        order = list(dict.fromkeys(raw))
    lookup = {v: i for i, v in enumerate(order)}
    return np.array([lookup[v] for v in keys], dtype=np.int64), max(len(order), 2), tuple(order)


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_csv(path, label_col: int = -1) -> Dataset:
    """Read comma-separated rows of features plus one label column.

    A first row whose feature cells are not all numeric is taken as a header.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh)) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"{path}: cannot read ({exc.strerror})") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0][1])
    if width < 2:
        raise DataError(f"{path}:{rows[0][0]}: need at least one feature and a label")
    col = label_col % width
    first = [c for j, c in enumerate(rows[0][1]) if j != col]
    if not all(_is_number(c) for c in first):
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path}: header but no data rows")
    feats, raw_labels, lines = [], [], []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        try:
            feats.append([float(c) for j, c in enumerate(row) if j != col])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-numeric feature ({exc})") from exc
        raw_labels.append(row[col].strip())
        lines.append(lineno)
    X = np.array(feats)
    if not np.all(np.isfinite(X)):
        bad = lines[int(np.flatnonzero(~np.isfinite(X).all(axis=1))[0])]
        raise DataError(f"{path}:{bad}: non-finite feature value")
    labels, n_classes, classes = _encode_labels(raw_labels)
    return Dataset(X, labels, n_classes, classes)


def load_libsvm(path, n_features: int | None = None) -> Dataset:
    """Read ``label idx:val ...`` lines (1-based indices) into a dense Dataset."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"{path}: cannot read ({exc.strerror})") from exc
    raw_labels, entries, lines = [], [], []
    max_idx = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        row = []
        for tok in tokens[1:]:
            idx, sep, val = tok.partition(":")
            try:
                if not sep:
                    raise ValueError
                j, v = int(idx), float(val)
            except ValueError:
                raise DataError(f"{path}:{lineno}: malformed token {tok!r}") from None
            if j < 1:
                raise DataError(f"{path}:{lineno}: feature index must be >= 1, got {j}")
            row.append((j - 1, v))
            max_idx = max(max_idx, j)
        raw_labels.append(tokens[0])
        entries.append(row)
        lines.append(lineno)
    if not entries:
        raise DataError(f"{path}: no data rows")
    d = max(max_idx, n_features or 0, 1)
    X = np.zeros((len(entries), d))
    for i, row in enumerate(entries):
        for j, v in row:
            X[i, j] = v
    try:
        [float(s) for s in raw_labels]
    except ValueError:
        bad = next(ln for ln, s in zip(lines, raw_labels) if not _is_number(s))
        raise DataError(f"{path}:{bad}: label is not numeric") from None
    labels, n_classes, classes = _encode_labels(raw_labels)
    return Dataset(X, labels, n_classes, classes)


def write_libsvm(path, ds: Dataset) -> None:
    with Path(path).open("w") as fh:
        for x, y in zip(ds.X, ds.labels):
            nz = np.flatnonzero(x)
            fh.write(" ".join([str(int(y))] + [f"{j + 1}:{float(x[j])!r}" for j in nz]) + "\n")


def write_csv(path, ds: Dataset) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        for x, y in zip(ds.X, ds.labels):
            w.writerow([repr(float(v)) for v in x] + [int(y)])


def load(path, fmt: str) -> Dataset:
    if fmt == "csv":
        return load_csv(path)
    if fmt == "libsvm":
        return load_libsvm(path)
    raise ValueError(f"unknown format {fmt!r}")


def split(ds: Dataset, test_fraction: float, seed: int, stratify: bool = True) -> tuple[Dataset, Dataset]:
    """Deterministic stratified train/test split."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    test_idx = []
    if stratify:
        for c in range(ds.n_classes):
            members = np.flatnonzero(ds.labels == c)
            if members.size == 0:
                continue
            if members.size < 2:
                raise DataError(f"class {c} has {members.size} sample; stratified split needs >= 2")
            k = int(np.clip(round(test_fraction * members.size), 1, members.size - 1))
            test_idx.append(rng.permutation(members)[:k])
        test = np.sort(np.concatenate(test_idx))
    else:
        k = int(np.clip(round(test_fraction * ds.n), 1, ds.n - 1))
        test = np.sort(rng.permutation(ds.n)[:k])
    mask = np.zeros(ds.n, dtype=bool)
    mask[test] = True
    return ds.subset(np.flatnonzero(~mask)), ds.subset(test)


@dataclass(frozen=True)
class Preprocessor:
    """Per-dimension standardization ``(x - mean) / scale``."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        scale = np.asarray(self.scale, dtype=np.float64).reshape(-1)
        if mean.shape != scale.shape:
            raise ValueError("mean and scale lengths differ")
        if np.any(scale <= 0):
            raise ValueError("scales must be strictly positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)

    @property
    def d(self) -> int:
        return self.mean.shape[0]

    @classmethod
    def identity(cls, d: int) -> Preprocessor:
        return cls(np.zeros(d), np.ones(d))

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.d:
            raise ValueError(f"dimension mismatch: data has {X.shape[-1]} features, preprocessor {self.d}")
        return (X - self.mean) / self.scale


def fit_standardizer(train: Dataset) -> Preprocessor:
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    # near-constant columns: treat as degenerate rather than blow up noise
    degenerate = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    return Preprocessor(mean, np.where(degenerate, 1.0, std))


def apply(pre: Preprocessor, ds: Dataset) -> Dataset:
    """Standardize a dataset. Not idempotent: applying twice shifts again."""
    return Dataset(pre.transform(ds.X), ds.labels, ds.n_classes, ds.classes)
