"""Seeded synthetic datasets for tests, scripts and benchmarks."""

import numpy as np

from .dataset import Dataset


def make_blobs(n_per_class: int, n_classes: int, d: int, seed: int, spread: float = 1.0, noise: float = 1.0) -> Dataset:
    """Isotropic Gaussian clusters; centers are drawn N(0, spread^2) per coordinate.

    Rows are shuffled so class order carries no information.
    """
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, spread, size=(n_classes, d))
    labels = np.repeat(np.arange(n_classes), n_per_class)
    X = centers[labels] + rng.normal(0.0, noise, size=(labels.size, d))
    order = rng.permutation(labels.size)
    return Dataset(X[order], labels[order], n_classes)


def blobs_train_test(n_train: int, n_test: int, n_classes: int, d: int, seed: int, spread: float = 1.0) -> tuple[Dataset, Dataset]:
    """Train/test blobs from the same centers, exactly balanced per class."""
    per_train, per_test = n_train // n_classes, n_test // n_classes
    full = make_blobs(per_train + per_test, n_classes, d, seed, spread=spread)
    test_mask = np.zeros(full.n, dtype=bool)
    for c in range(n_classes):
        test_mask[np.flatnonzero(full.labels == c)[:per_test]] = True
    return full.subset(np.flatnonzero(~test_mask)), full.subset(np.flatnonzero(test_mask))
