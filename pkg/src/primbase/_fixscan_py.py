"""Pure-python backend for the fixed-point scan.

Enumerates every group element as a product of transversal rows.  The
deepest levels are expanded into one block matrix of suffix products, the
remaining shallow levels are walked depth first, and each leaf block is
evaluated with vectorized numpy.  Scan order is row-major over the level
matrices, the same order the compiled backend uses, and the whole scan is
single-threaded, so results never depend on worker configuration.
"""

from __future__ import annotations

import numpy as np

# Cells of the expanded suffix-product block held at once.
BLOCK_CELLS = 1 << 22


def _split(mats, n):
    """Largest trailing run of levels whose product block fits the cap."""
    start = len(mats) - 1
    rows = mats[-1].shape[0]
    while start > 0 and rows * mats[start - 1].shape[0] * n <= BLOCK_CELLS:
        start -= 1
        rows *= mats[start].shape[0]
    return start


def _suffix_block(mats, start):
    block = mats[-1]
    n = block.shape[1]
    for j in range(len(mats) - 2, start - 1, -1):
        block = mats[j][:, block].reshape(-1, n)
    return block


def scan(mats, base, seed_best):
    """Best fixed-point count over non-identity leaves, with its witness.

    Returns (count, witness) where witness is None when no leaf beat
    seed_best.  Leaves are pruned only when the base points already fixed
    plus all still-undecided points cannot beat the running best.
    """
    n = mats[0].shape[1]
    domain = np.arange(n, dtype=mats[0].dtype)
    start = _split(mats, n)
    block = _suffix_block(mats, start)
    best = int(seed_best)
    witness = None

    if start == 0:
        counts = (block == domain).sum(axis=1)
        counts[counts == n] = -1
        top = int(counts.max())
        if top > best:
            return top, block[int(counts.argmax())].copy()
        return best, None

    state = {"best": best, "witness": None}

    def descend(lvl, prev, fixed_prev):
        for row in mats[lvl]:
            cur = row if prev is None else prev[row]
            fixed = fixed_prev + int(cur[base[lvl]] == base[lvl])
            if fixed + (n - lvl - 1) <= state["best"]:
                continue
            if lvl == start - 1:
                images = cur[block]
                counts = (images == domain).sum(axis=1)
                counts[counts == n] = -1
                top = int(counts.max())
                if top > state["best"]:
                    state["best"] = top
                    state["witness"] = images[int(counts.argmax())].copy()
            else:
                descend(lvl + 1, cur, fixed)

    descend(0, None, 0)
    return state["best"], state["witness"]
