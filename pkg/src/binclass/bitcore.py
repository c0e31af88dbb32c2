"""Packed +/-1 bit-vectors and the popcount kernels built on them.

Convention: logical bit ``k`` lives in word ``k // 64`` at position ``k % 64``
(least significant bit first). A stored 1 means the code value +1, a stored 0
means -1. Pad bits past ``r`` in the last word are always zero, so XOR +
popcount over whole words is exact without masking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORD_BITS = 64


def n_words(r: int) -> int:
    return (r + WORD_BITS - 1) // WORD_BITS


def pack_signs(signs: np.ndarray) -> np.ndarray:
    """Pack a (..., r) array of +/-1 (or bool, True = +1) into uint64 words.

    Returns:
        Array of shape (..., ceil(r / 64)) with dtype uint64.
    """
    signs = np.asarray(signs)
    bits = signs > 0
    r = bits.shape[-1]
    nw = n_words(r)
    pad = nw * WORD_BITS - r
    if pad:
        widths = [(0, 0)] * (bits.ndim - 1) + [(0, pad)]
        bits = np.pad(bits, widths)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    # bytes within a word are little-endian regardless of host order
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_signs(words: np.ndarray, r: int) -> np.ndarray:
    """Inverse of :func:`pack_signs`; returns an int8 array of +/-1."""
    words = np.ascontiguousarray(words, dtype="<u8")
    as_bytes = words.view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :r]
    return bits.astype(np.int8) * 2 - 1


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.uint64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BitVector:
    """An immutable r-bit code with entries in {-1, +1}."""

    words: np.ndarray
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"bit length must be positive, got {self.r}")
        words = _frozen(self.words).reshape(-1)
        if words.shape[0] != n_words(self.r):
            raise ValueError(f"{words.shape[0]} words cannot hold exactly {self.r} bits")
        tail = self.r % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise ValueError("pad bits beyond r must be zero")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_signs(cls, signs) -> BitVector:
        signs = np.asarray(signs).reshape(-1)
        return cls(pack_signs(signs), signs.shape[0])

    def to_signs(self) -> np.ndarray:
        return unpack_signs(self.words, self.r)

    def __len__(self) -> int:
        return self.r

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.r == other.r and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.r, self.words.tobytes()))

    def __repr__(self) -> str:
        s = "".join("+" if v > 0 else "-" for v in self.to_signs()[:32])
        return f"BitVector(r={self.r}, {s}{'...' if self.r > 32 else ''})"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Row-major stack of equal-length bit-vectors, stored as (rows, words)."""

    words: np.ndarray
    cols: int

    def __post_init__(self):
        words = _frozen(self.words)
        if words.ndim != 2:
            raise ValueError("BitMatrix words must be 2-D (rows, words)")
        if words.shape[1] != n_words(self.cols):
            raise ValueError(f"{words.shape[1]} words per row cannot hold exactly {self.cols} bits")
        tail = self.cols % WORD_BITS
        if tail and words.shape[0] and np.any(words[:, -1] >> np.uint64(tail)):
            raise ValueError("pad bits beyond cols must be zero")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_signs(cls, signs) -> BitMatrix:
        signs = np.asarray(signs)
        if signs.ndim != 2:
            raise ValueError("expected a 2-D array of signs")
        return cls(pack_signs(signs), signs.shape[1])

    @classmethod
    def from_rows(cls, rows) -> BitMatrix:
        rows = list(rows)
        if not rows:
            raise ValueError("cannot infer width from zero rows")
        r = rows[0].r
        if any(v.r != r for v in rows):
            raise ValueError("rows differ in length")
        return cls(np.stack([v.words for v in rows]), r)

    @property
    def rows(self) -> int:
        return self.words.shape[0]

    @property
    def nbytes(self) -> int:
        return self.words.shape[0] * self.words.shape[1] * 8

    def to_signs(self) -> np.ndarray:
        return unpack_signs(self.words, self.cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.words[i], self.cols)

    def __getitem__(self, i: int) -> BitVector:
        return self.row(i)

    def __iter__(self):
        return (self.row(i) for i in range(self.rows))

    def __len__(self) -> int:
        return self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.cols == other.cols and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        return f"BitMatrix(rows={self.rows}, cols={self.cols})"


def _check_same_length(a: BitVector, b: BitVector) -> None:
    if a.r != b.r:
        raise ValueError(f"length mismatch: {a.r} vs {b.r} bits")


def hamming_distance(a: BitVector, b: BitVector) -> int:
    """Number of positions where ``a`` and ``b`` differ (XOR + popcount)."""
    _check_same_length(a, b)
    return int(np.bitwise_count(a.words ^ b.words).sum())


def binary_inner_product(a: BitVector, b: BitVector) -> int:
    """The +/-1 dot product, computed as ``r - 2 * hamming_distance``."""
    return a.r - 2 * hamming_distance(a, b)


def flip_bit(v: BitVector, k: int) -> BitVector:
    if not 0 <= k < v.r:
        raise IndexError(f"bit {k} out of range for r={v.r}")
    words = v.words.copy()
    words[k // WORD_BITS] ^= np.uint64(1) << np.uint64(k % WORD_BITS)
    return BitVector(words, v.r)


def hamming_rows(a: BitMatrix, b: BitMatrix) -> np.ndarray:
    """Row-paired distances: ``out[i] = D_H(a[i], b[i])``."""
    if a.cols != b.cols or a.rows != b.rows:
        raise ValueError("row-paired distances need equal shapes")
    return np.bitwise_count(a.words ^ b.words).sum(axis=1, dtype=np.int64)


def _distance_block(q: np.ndarray, book_t: np.ndarray, cols: int) -> np.ndarray:
    """Distances for a block of query words against a word-major (words, C) codebook.

    Accumulating one word at a time keeps every temporary 2-D and narrow,
    which is several times faster than reducing a (q, C, words) XOR cube.
    """
    dtype = np.uint16 if cols < 2**16 else np.uint32
    acc = np.bitwise_count(q[:, 0, None] ^ book_t[0][None, :]).astype(dtype)
    for w in range(1, q.shape[1]):
        acc += np.bitwise_count(q[:, w, None] ^ book_t[w][None, :])
    return acc


def hamming_matrix(queries: BitMatrix, codebook: BitMatrix, chunk: int = 256) -> np.ndarray:
    """All-pairs distances, shape (queries.rows, codebook.rows), int32."""
    if queries.cols != codebook.cols:
        raise ValueError(f"length mismatch: {queries.cols} vs {codebook.cols} bits")
    book_t = np.ascontiguousarray(codebook.words.T)
    out = np.empty((queries.rows, codebook.rows), dtype=np.int32)
    for lo in range(0, queries.rows, chunk):
        out[lo:lo + chunk] = _distance_block(queries.words[lo:lo + chunk], book_t, queries.cols)
    return out


def argmin_hamming(query: BitVector, codebook: BitMatrix) -> tuple[int, int]:
    """Nearest codebook row to ``query``; ties go to the lowest index."""
    if codebook.rows < 1:
        raise ValueError("empty codebook")
    if query.r != codebook.cols:
        raise ValueError(f"length mismatch: {query.r} vs {codebook.cols} bits")
    dist = np.bitwise_count(codebook.words ^ query.words[None, :]).sum(axis=1)
    best = int(np.argmin(dist))
    return best, int(dist[best])


def argmin_hamming_batch(queries: BitMatrix, codebook: BitMatrix, chunk: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`argmin_hamming` over every query row."""
    if codebook.rows < 1:
        raise ValueError("empty codebook")
    if queries.cols != codebook.cols:
        raise ValueError(f"length mismatch: {queries.cols} vs {codebook.cols} bits")
    book_t = np.ascontiguousarray(codebook.words.T)
    idx = np.empty(queries.rows, dtype=np.intp)
    dist = np.empty(queries.rows, dtype=np.int64)
    for lo in range(0, queries.rows, chunk):
        block = _distance_block(queries.words[lo:lo + chunk], book_t, queries.cols)
        best = block.argmin(axis=1)
        idx[lo:lo + chunk] = best
        dist[lo:lo + chunk] = block[np.arange(block.shape[0]), best]
    return idx, dist
