"""Maximum fixed-point count over the non-identity elements of a group.

The scan enumerates every element of the group as a product of
stabilizer-chain transversal rows.  A compiled kernel is preferred when
it is importable; a pure-python numpy kernel is the fallback, selectable
explicitly through the PRIMBASE_KERNEL environment variable ("c" or
"py").  The compiled scan is split into one chunk per top-level
transversal row, every chunk starts from the same generator-derived
pruning floor, and chunk results are merged in row order with a
strict-improvement rule, so counts are identical for every worker count
and for both backends.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import permutation as perm
from .errors import BudgetExceeded

# Transversal cells materialized for one scan.
CELL_BUDGET = 1 << 27


def backend_name(kernel=None):
    return _backend(kernel)[0]


def _backend(kernel=None):
    choice = kernel or os.environ.get("PRIMBASE_KERNEL", "auto")
    if choice not in ("auto", "c", "py"):
        raise ValueError(f"unknown kernel {choice!r}; expected 'c', 'py' or 'auto'")
    if choice in ("auto", "c"):
        try:
            from . import _fixscan_c

            return "c", _fixscan_c
        except ImportError:
            if choice == "c":
                raise
    from . import _fixscan_py

    return "py", _fixscan_py


def thread_count(threads=None):
    if threads is None:
        env = os.environ.get("PRIMBASE_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(int(threads), 64))


def max_fixed_points(chain, threads=None, kernel=None):
    """(count, witness, backend) for the most fixed points of any g != 1.

    The witness is some element attaining the count; which one may differ
    between backends, the count never does.
    """
    n = chain.n
    level_indices = chain.nontrivial_levels()
    if not level_indices:
        raise ValueError("the trivial group has no non-identity elements")
    cells = sum(chain.orbit_length(i) for i in level_indices) * n
    if cells > CELL_BUDGET:
        raise BudgetExceeded(
            f"transversal tables need {cells} cells, budget is {CELL_BUDGET}"
        )
    mats = [chain.transversal_matrix(i) for i in level_indices]
    base = np.array([chain.levels[i].point for i in level_indices], dtype=perm.DTYPE)
    domain = np.arange(n, dtype=perm.DTYPE)

    seed_best = -1
    seed_witness = None
    for g in chain.strong_generators():
        c = int((g == domain).sum())
        if c > seed_best:
            seed_best, seed_witness = c, g

    if len(mats) == 1:
        counts = (mats[0] == domain).sum(axis=1)
        counts[counts == n] = -1
        best = int(counts.max())
        return best, mats[0][int(counts.argmax())].copy(), "direct"

    name, module = _backend(kernel)
    if name == "py":
        best, witness = module.scan(mats, base, seed_best)
        if witness is None:
            best, witness = seed_best, seed_witness
        return best, witness.copy(), name

    flat = np.concatenate([m.ravel() for m in mats])
    offsets = np.zeros(len(mats), dtype=np.int64)
    nrows = np.array([m.shape[0] for m in mats], dtype=np.int64)
    for i in range(1, len(mats)):
        offsets[i] = offsets[i - 1] + mats[i - 1].size

    def run(chunk):
        out = np.empty(n, dtype=perm.DTYPE)
        count, found = module.scan_rows(
            flat, offsets, nrows, base, n, len(mats), seed_best,
            chunk[0], chunk[1], out,
        )
        return count, found, out

    chunks = [(r, r + 1) for r in range(int(nrows[0]))]
    workers = thread_count(threads)
    if workers == 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))

    best, witness = seed_best, seed_witness
    for count, found, out in results:
        if found and count > best:
            best, witness = count, out
    return best, witness.copy(), name
