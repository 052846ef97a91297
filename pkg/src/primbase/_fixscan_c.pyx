# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the fixed-point scan.

Walks the transversal product tree depth first for a block of top-level
rows, pruning when the base points fixed so far plus all undecided
points cannot beat the running best.  All state is per-call, so chunks
can run on any number of threads without affecting each other.
"""

from libc.stdint cimport int32_t, int64_t
from libc.stdlib cimport free, malloc


def scan_rows(const int32_t[::1] flat, const int64_t[::1] offsets,
              const int64_t[::1] nrows, const int32_t[::1] base,
              int n, int levels, int seed_best,
              int64_t row_start, int64_t row_stop, int32_t[::1] witness):
    """Scan all leaves under top-level rows [row_start, row_stop).

    Returns (count, found): the best fixed-point count seen (starting
    from the seed_best floor) and whether any leaf improved on it; when
    found, the witness buffer holds the first leaf that reached count.
    """
    if levels < 2:
        raise ValueError("kernel requires at least two levels")
    cdef int best = seed_best
    cdef int found = 0
    cdef int32_t* work = <int32_t*> malloc(levels * n * sizeof(int32_t))
    cdef int64_t* idx = <int64_t*> malloc(levels * sizeof(int64_t))
    cdef int* fixed = <int*> malloc(levels * sizeof(int))
    cdef const int32_t** partial = <const int32_t**> malloc(levels * sizeof(void*))
    if work == NULL or idx == NULL or fixed == NULL or partial == NULL:
        free(work); free(idx); free(fixed); free(partial)
        raise MemoryError()
    cdef const int32_t* table = &flat[0]
    cdef const int32_t* row
    cdef const int32_t* prev
    cdef int32_t* cur
    cdef int64_t r0
    cdef int lvl, x, b, cnt, f
    cdef int leaf = levels - 1
    try:
        with nogil:
            for r0 in range(row_start, row_stop):
                row = table + offsets[0] + r0 * n
                partial[0] = row
                b = base[0]
                fixed[0] = 1 if row[b] == b else 0
                if fixed[0] + (n - 1) <= best:
                    continue
                lvl = 1
                idx[1] = 0
                while lvl >= 1:
                    if idx[lvl] == nrows[lvl]:
                        lvl -= 1
                        if lvl >= 1:
                            idx[lvl] += 1
                        continue
                    row = table + offsets[lvl] + idx[lvl] * n
                    prev = partial[lvl - 1]
                    if lvl == leaf:
                        cnt = 0
                        for x in range(n):
                            if prev[row[x]] == x:
                                cnt += 1
                        if cnt > best and cnt < n:
                            best = cnt
                            found = 1
                            for x in range(n):
                                witness[x] = prev[row[x]]
                        idx[lvl] += 1
                    else:
                        b = base[lvl]
                        f = fixed[lvl - 1] + (1 if prev[row[b]] == b else 0)
                        if f + (n - lvl - 1) <= best:
                            idx[lvl] += 1
                            continue
                        cur = work + lvl * n
                        for x in range(n):
                            cur[x] = prev[row[x]]
                        partial[lvl] = cur
                        fixed[lvl] = f
                        lvl += 1
                        idx[lvl] = 0
    finally:
        free(work)
        free(idx)
        free(fixed)
        free(partial)
    return best, found
