"""Fixed little-endian binary model file.

Layout (all integers u32 LE, floats f64 LE)::

    "BCLS" | version | loss tag | d | r | C
    mean[d] | scale[d] | P[d * r] row-major | W[C * ceil(r / 64)] as u64 LE

Loss tags: 0 = exp, 1 = hinge, 2 = lsh.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .bitcore import BitMatrix, n_words
from .dataset import Preprocessor
from .hashfn import Model

MAGIC = b"BCLS"
VERSION = 1
LOSS_TAGS = {"exp": 0, "hinge": 1, "lsh": 2}
_HEADER = struct.Struct("<4s5I")


class ModelFormatError(ValueError):
    pass


def dumps(model: Model) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, LOSS_TAGS[model.loss], model.d, model.r, model.n_classes)
    return b"".join([
        header,
        model.preprocessor.mean.astype("<f8").tobytes(),
        model.preprocessor.scale.astype("<f8").tobytes(),
        np.ascontiguousarray(model.P, dtype="<f8").tobytes(),
        np.ascontiguousarray(model.W.words, dtype="<u8").tobytes(),
    ])


def loads(data: bytes) -> Model:
    if len(data) < _HEADER.size:
        raise ModelFormatError("truncated header")
    magic, version, tag, d, r, C = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ModelFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ModelFormatError(f"unsupported format version {version}")
    loss = {v: k for k, v in LOSS_TAGS.items()}.get(tag)
    if loss is None:
        raise ModelFormatError(f"unknown loss tag {tag}")
    nw = n_words(r)
    expected = _HEADER.size + 8 * (2 * d + d * r + C * nw)
    if len(data) != expected:
        raise ModelFormatError(f"expected {expected} bytes for d={d} r={r} C={C}, got {len(data)}")
    off = _HEADER.size

    def take(count, dtype):
        nonlocal off
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=off)
        off += 8 * count
        return arr

    mean, scale = take(d, "<f8"), take(d, "<f8")
    P = take(d * r, "<f8").reshape(d, r)
    W = take(C * nw, "<u8").reshape(C, nw)
    return Model(
        P.astype(np.float64),
        BitMatrix(W.astype(np.uint64), r),
        Preprocessor(mean.astype(np.float64), scale.astype(np.float64)),
        loss=loss,
    )


def save(model: Model, path) -> int:
    data = dumps(model)
    Path(path).write_bytes(data)
    return len(data)


def load(path) -> Model:
    return loads(Path(path).read_bytes())
