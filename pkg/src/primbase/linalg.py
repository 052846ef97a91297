"""Matrix arithmetic over the table-driven fields.

Matrices are numpy uint8 arrays of field element codes.  The package
uses the row-vector convention throughout: the image of a row vector v
under a matrix M is v @ M, so mat_mul(A, B) means "apply A, then B"
and matches left-to-right permutation composition.
"""

from __future__ import annotations

import numpy as np

from .fields import Field

__all__ = [
    "identity_matrix",
    "is_invertible",
    "mat_inv",
    "mat_mul",
    "rank",
    "row_image",
    "rref",
    "scalar_matrix",
    "to_matrix",
]

DTYPE = np.uint8


def to_matrix(rows: object) -> np.ndarray:
    mat = np.asarray(rows, dtype=DTYPE)
    if mat.ndim != 2:
        raise ValueError("matrix data must be two-dimensional")
    return mat


def identity_matrix(d: int) -> np.ndarray:
    return np.eye(d, dtype=DTYPE)


def scalar_matrix(d: int, c: int) -> np.ndarray:
    return (np.eye(d, dtype=DTYPE) * DTYPE(c)).astype(DTYPE)


def mat_mul(F: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} @ {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=F.add_table.dtype)
    for k in range(a.shape[1]):
        term = F.mul_table[a[:, k][:, None], b[k, :][None, :]]
        out = F.add_table[out, term]
    return out.astype(DTYPE)


def row_image(F: Field, v: np.ndarray, m: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=DTYPE)
    if v.shape != (m.shape[0],):
        raise ValueError(f"shape mismatch: {v.shape} @ {m.shape}")
    out = np.zeros(m.shape[1], dtype=F.add_table.dtype)
    for k in range(m.shape[0]):
        out = F.add_table[out, F.mul_table[v[k], m[k, :]]]
    return out.astype(DTYPE)


def rref(F: Field, mat: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form with unit pivots and zero rows dropped.
    Returns the canonical matrix and the pivot column indices."""
    m = np.array(mat, dtype=DTYPE, copy=True)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        hit = -1
        for i in range(r, rows):
            if m[i, c]:
                hit = i
                break
        if hit < 0:
            continue
        if hit != r:
            m[[r, hit]] = m[[hit, r]]
        m[r] = F.mul_table[F.inv(int(m[r, c])), m[r]]
        for i in range(rows):
            if i != r and m[i, c]:
                scale = F.neg(int(m[i, c]))
                m[i] = F.add_table[m[i], F.mul_table[scale, m[r]]]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r].copy(), tuple(pivots)


def rank(F: Field, mat: np.ndarray) -> int:
    return rref(F, mat)[0].shape[0]


def is_invertible(F: Field, mat: np.ndarray) -> bool:
    return mat.shape[0] == mat.shape[1] and rank(F, mat) == mat.shape[0]


def mat_inv(F: Field, mat: np.ndarray) -> np.ndarray:
    d = mat.shape[0]
    if mat.shape != (d, d):
        raise ValueError("only square matrices can be inverted")
    aug = np.concatenate([mat, identity_matrix(d)], axis=1)
    reduced, pivots = rref(F, aug)
    if pivots[:d] != tuple(range(d)):
        raise ValueError("matrix is singular")
    return reduced[:, d:].copy()
