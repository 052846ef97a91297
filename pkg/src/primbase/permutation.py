"""Permutations on {0, ..., n-1} stored as image arrays.

A permutation p is a list/array where p[i] is the image of i.  Composition
is left-to-right: (p * q)(i) = q(p(i)), i.e. p acts first.
"""

from __future__ import annotations

import numpy as np

DTYPE = np.int32


def as_perm(images, n=None):
    """Validate and normalize an image sequence to an int32 array.

    Raises ValueError unless `images` is a bijection on {0..len-1}
    (and of length n, when n is given).
    """
    arr = np.asarray(images, dtype=DTYPE)
    if arr.ndim != 1:
        raise ValueError("permutation must be a flat sequence of images")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"expected degree {n}, got {arr.shape[0]}")
    m = arr.shape[0]
    seen = np.zeros(m, dtype=bool)
    if m and (arr.min() < 0 or arr.max() >= m):
        raise ValueError("images out of range")
    seen[arr] = True
    if not seen.all():
        raise ValueError("images are not a bijection")
    return arr


def identity(n):
    return np.arange(n, dtype=DTYPE)


def is_identity(p):
    return bool((p == np.arange(p.shape[0], dtype=p.dtype)).all())


def compose(p, q):
    """Return the permutation i -> q(p(i)): p applied first, then q."""
    return q[p]


def inverse(p):
    inv = np.empty_like(p)
    inv[p] = np.arange(p.shape[0], dtype=p.dtype)
    return inv


def support(p):
    """Points moved by p, as a sorted array."""
    n = p.shape[0]
    return np.nonzero(p != np.arange(n, dtype=p.dtype))[0]


def fixed_points(p):
    n = p.shape[0]
    return np.nonzero(p == np.arange(n, dtype=p.dtype))[0]


def cycle_type(p):
    """Sorted list of cycle lengths (including fixed points as 1s)."""
    n = p.shape[0]
    seen = np.zeros(n, dtype=bool)
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = int(p[x])
            length += 1
        lengths.append(length)
    lengths.sort()
    return lengths


def order(p):
    """Multiplicative order: lcm of cycle lengths (python int, exact)."""
    import math

    result = 1
    for length in set(cycle_type(p)):
        result = math.lcm(result, length)
    return result


def power(p, e):
    """p composed with itself e times; e may be negative or huge (python int)."""
    n = p.shape[0]
    if e < 0:
        return power(inverse(p), -e)
    result = identity(n)
    base = p.copy()
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def from_cycles(n, cycles):
    """Build a permutation of degree n from disjoint cycles (0-based points)."""
    p = identity(n)
    touched = set()
    for cyc in cycles:
        for x in cyc:
            if x in touched:
                raise ValueError(f"point {x} appears in two cycles")
            if not (0 <= x < n):
                raise ValueError(f"point {x} out of range for degree {n}")
            touched.add(x)
        for i, x in enumerate(cyc):
            p[x] = cyc[(i + 1) % len(cyc)]
    return p


def to_key(p):
    """Hashable canonical form."""
    return p.tobytes()
