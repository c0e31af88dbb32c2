import numpy as np
import pytest

from binclass.dataset import Dataset
from binclass.hinge_solver import (
    hinge_surrogate,
    train_hinge,
    update_codes_hinge,
    update_weights_hinge,
)
from binclass.synthetic import make_blobs

from conftest import random_signs


def surrogate_loops(W, B, labels):
    C = len(W)
    return sum(
        int(np.dot(W[c].astype(int), B[i])) - int(np.dot(W[ci].astype(int), B[i]))
        for i, ci in enumerate(labels)
        for c in range(C)
    )


def weight_cell_values(B, labels, C):
    """Objective contribution of w_c(k) = -1 and +1 for every (c, k); the W problem is separable."""
    B = B.astype(np.int64)
    coef = np.zeros((C, B.shape[1]), dtype=np.int64)
    for c in range(C):
        coef[c] = B.sum(axis=0) - C * B[labels == c].sum(axis=0)
    return -coef, coef


def code_cell_values(W, labels):
    W = W.astype(np.int64)
    Wo = W.sum(axis=0)[None, :] - W.shape[0] * W[labels]
    return -Wo, Wo


def random_instance(rng, r_max=16, C_max=5, n_max=50):
    C = int(rng.integers(2, C_max + 1))
    r = int(rng.integers(1, r_max + 1))
    n = int(rng.integers(C, n_max + 1))
    labels = np.concatenate([np.arange(C), rng.integers(0, C, n - C)])
    return C, random_signs(rng, n, r), random_signs(rng, C, r), labels


def test_weights_example():
    B = np.array([[1, 1], [1, -1], [-1, 1]])
    W = update_weights_hinge(B, np.array([0, 0, 1]), 2)
    assert W.tolist() == [[1, -1], [-1, 1]]
    lo, hi = weight_cell_values(B, np.array([0, 0, 1]), 2)
    assert np.all(np.where(W > 0, hi, lo) == np.minimum(lo, hi))


def test_weights_empty_class():
    with pytest.raises(ValueError):
        update_weights_hinge(np.ones((3, 2)), np.array([0, 0, 0]), 2)


def test_codes_example():
    W = np.array([[1, -1], [-1, 1]])
    assert update_codes_hinge(W, np.array([0])).tolist() == [[1, -1]]


def test_codes_tie_keeps_previous(rng):
    W = np.array([[1, 1], [1, -1], [1, 1]])  # bit 0 shared by every class
    prev = random_signs(rng, 6, 2)
    B = update_codes_hinge(W, np.arange(6) % 3, prev=prev)
    assert np.array_equal(B[:, 0], prev[:, 0])


def test_closed_forms_attain_enumerated_minimum(rng):
    for _ in range(100):
        C, B, W, labels = random_instance(rng)
        Wn = update_weights_hinge(B, labels, C)
        lo, hi = weight_cell_values(B, labels, C)
        assert np.all(np.where(Wn > 0, hi, lo) == np.minimum(lo, hi))
        Bn = update_codes_hinge(W, labels)
        lo, hi = code_cell_values(W, labels)
        assert np.all(np.where(Bn > 0, hi, lo) == np.minimum(lo, hi))


def test_surrogate_matches_loops(rng):
    C, B, W, labels = random_instance(rng, n_max=15)
    assert hinge_surrogate(W, B, labels) == surrogate_loops(W, B, labels)


def test_weights_invariant_to_sample_order(rng):
    C, B, _, labels = random_instance(rng)
    perm = rng.permutation(len(labels))
    assert np.array_equal(update_weights_hinge(B, labels, C), update_weights_hinge(B[perm], labels[perm], C))


def test_train_hinge_fixed_point_and_monotone():
    ds = make_blobs(30, 4, 6, seed=2)
    W, B, rep = train_hinge(ds, 24, outer_iters=20, seed=1)
    assert rep.converged
    obj = rep.objective
    assert all(b <= a for a, b in zip(obj, obj[1:]))
    assert obj[-1] == hinge_surrogate(W.to_signs(), B.to_signs(), ds.labels)
    W2 = update_weights_hinge(B.to_signs(), ds.labels, 4, prev=W.to_signs())
    B2 = update_codes_hinge(W2, ds.labels, prev=B.to_signs())
    assert np.array_equal(W2, W.to_signs()) and np.array_equal(B2, B.to_signs())


def test_train_hinge_deterministic():
    ds = make_blobs(20, 3, 5, seed=3)
    a, b = train_hinge(ds, 16, seed=9), train_hinge(ds, 16, seed=9)
    assert a[0] == b[0] and a[1] == b[1]


def test_train_hinge_requires_classes():
    with pytest.raises(ValueError):
        train_hinge(Dataset(np.zeros((2, 2)), [0, 0], 2), 4)
