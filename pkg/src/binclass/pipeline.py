"""End-to-end training: standardize, learn codes, fit the hash projection."""

from __future__ import annotations

import time

from . import dataset as dsmod
from .baseline_lsh import lsh_classifier
from .dataset import Dataset, Preprocessor
from .exp_solver import train_exp
from .hashfn import Model, accuracy, fit_projection
from .hinge_solver import train_hinge
from .report import TrainReport


def train_model(
    train: Dataset,
    loss: str = "exp",
    r: int = 32,
    iters: int = 10,
    seed: int = 0,
    ridge: float | None = None,
    standardize: bool = True,
    test: Dataset | None = None,
) -> tuple[Model, TrainReport]:
    """Train a binary-weight classifier and return it with its report.

    ``loss`` is ``"exp"``, ``"hinge"`` or ``"lsh"`` (the random-projection
    baseline). The projection P is fit once, after the codes are final.
    """
    train.require_all_classes()
    t0 = time.perf_counter()
    pre = dsmod.fit_standardizer(train) if standardize else Preprocessor.identity(train.d)
    Xs = pre.transform(train.X)
    std_train = Dataset(Xs, train.labels, train.n_classes, train.classes)
    t_pre = time.perf_counter() - t0

    if loss == "lsh":
        t = time.perf_counter()
        model = lsh_classifier(std_train, r, seed, preprocessor=pre)
        report = TrainReport(loss="lsh", r=r, n_classes=train.n_classes, seed=seed, converged=True)
        report.timings["train"] = time.perf_counter() - t
    else:
        solver = {"exp": train_exp, "hinge": train_hinge}.get(loss)
        if solver is None:
            raise ValueError(f"unknown loss {loss!r}")
        W, B, report = solver(std_train, r, iters, seed)
        t = time.perf_counter()
        P = fit_projection(Xs, B, ridge)
        report.timings["fit_projection"] = time.perf_counter() - t
        model = Model(P, W, pre, loss=loss, metadata={"r": r, "seed": seed, "objective": report.objective})
    report.timings["preprocess"] = t_pre
    report.timings["total_train"] = time.perf_counter() - t0

    t = time.perf_counter()
    report.train_accuracy = accuracy(model, train.X, train.labels)
    if test is not None:
        report.test_accuracy = accuracy(model, test.X, test.labels)
    report.timings["evaluate"] = time.perf_counter() - t
    report.p_bytes = model.P.size * 8
    report.w_bytes = model.W.nbytes
    return model, report
