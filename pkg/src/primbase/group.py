"""Permutation groups with deterministic stabilizer chains.

Everything here is deterministic: generators are scanned in index order,
orbits are extended in a fixed order, and new base points follow a fixed
selection rule.  Identical generator lists therefore always produce the
same base, the same strong generating set and the same Schreier trees,
bit for bit, independent of hashing or timing.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from . import permutation as perm
from .errors import BudgetExceeded

# Transversal elements for a level are kept in memory while the orbit
# stays below this many matrix cells; larger orbits fall back to walking
# the Schreier tree.
_U_CACHE_CELLS = 1 << 24


class _Level:
    """One level of a stabilizer chain: a base point and its orbit data.

    The Schreier tree is only ever extended, never rebuilt, so transversal
    elements of already-discovered points stay stable across extensions.
    """

    __slots__ = (
        "point", "gens", "orbit", "parent", "edge", "u", "u_inv",
        "watermark", "built_suffix", "tested",
    )

    def __init__(self, point):
        self.point = point
        self.gens = []            # serials of generators introduced here
        self.orbit = None         # points in discovery order
        self.parent = None        # parent point in the Schreier tree, -1 outside
        self.edge = None          # serial of the edge generator, -1 at the root
        self.u = None             # point -> transversal element, or None
        self.u_inv = None
        self.watermark = -1       # highest generator serial already scanned
        self.built_suffix = -1    # suffix generator count at last extension
        self.tested = set()       # (point, serial) Schreier pairs verified


class StabilizerChain:
    """Base and strong generating set, built by deterministic Schreier-Sims.

    `initial_base` points that are moved by the group are installed as the
    leading base points (in the given order) before anything else, so the
    group fixing all of them is exactly the level group below them.
    """

    def __init__(self, generators, degree, initial_base=()):
        self.n = int(degree)
        self._initial_base = [int(p) for p in initial_base]
        self._arrays = {}         # serial -> generator array
        self._inverses = {}       # serial -> inverse array
        self._next_serial = 0
        self.levels: list[_Level] = []
        gens = []
        for g in generators:
            a = perm.as_perm(g, self.n)
            if not perm.is_identity(a):
                gens.append(a)
        self._build(gens)

    # -- bookkeeping ------------------------------------------------------

    def _register(self, g):
        s = self._next_serial
        self._next_serial += 1
        self._arrays[s] = g
        self._inverses[s] = perm.inverse(g)
        return s

    @property
    def base(self):
        return [lvl.point for lvl in self.levels]

    def gens_at(self, i):
        """Generators of the level-i group (those fixing base[0..i-1])."""
        out = []
        for lvl in self.levels[i:]:
            out.extend(self._arrays[s] for s in lvl.gens)
        return out

    def _serials_at(self, i):
        out = []
        for lvl in self.levels[i:]:
            out.extend(lvl.gens)
        return out

    def strong_generators(self):
        return self.gens_at(0)

    def orbit_sizes(self):
        return [len(self._data(i).orbit) for i in range(len(self.levels))]

    def order(self):
        result = 1
        for size in self.orbit_sizes():
            result *= size
        return result

    # -- orbit maintenance -------------------------------------------------

    def _data(self, i):
        """Return level i with its orbit extended to the current generators."""
        lvl = self.levels[i]
        serials = self._serials_at(i)
        if lvl.built_suffix == len(serials):
            return lvl
        if lvl.parent is None:
            lvl.parent = np.full(self.n, -1, dtype=np.int64)
            lvl.edge = np.full(self.n, -1, dtype=np.int64)
            lvl.parent[lvl.point] = lvl.point
            lvl.orbit = [lvl.point]
            ident = perm.identity(self.n)
            lvl.u = {lvl.point: ident}
            lvl.u_inv = {lvl.point: ident}
        new = [s for s in serials if s > lvl.watermark]
        frontier = deque()
        known = len(lvl.orbit)
        for s in new:
            g = self._arrays[s]
            for idx in range(known):
                x = lvl.orbit[idx]
                y = int(g[x])
                if lvl.parent[y] < 0:
                    self._attach(lvl, y, x, s)
                    frontier.append(y)
        while frontier:
            x = frontier.popleft()
            for s in serials:
                y = int(self._arrays[s][x])
                if lvl.parent[y] < 0:
                    self._attach(lvl, y, x, s)
                    frontier.append(y)
        if new:
            lvl.watermark = max(new)
        lvl.built_suffix = len(serials)
        return lvl

    def _attach(self, lvl, y, x, s):
        lvl.parent[y] = x
        lvl.edge[y] = s
        lvl.orbit.append(y)
        if lvl.u is not None:
            if (len(lvl.orbit) + 1) * self.n > _U_CACHE_CELLS:
                lvl.u = None
                lvl.u_inv = None
            else:
                u = perm.compose(lvl.u[x], self._arrays[s])
                lvl.u[y] = u
                lvl.u_inv[y] = perm.inverse(u)

    def transversal_element(self, i, beta):
        """The stored element mapping base[i] to beta."""
        lvl = self._data(i)
        if lvl.parent[beta] < 0:
            raise ValueError(f"{beta} is not in the orbit of level {i}")
        if lvl.u is not None:
            return lvl.u[beta]
        path = []
        x = int(beta)
        while x != lvl.point:
            path.append(int(lvl.edge[x]))
            x = int(lvl.parent[x])
        u = perm.identity(self.n)
        for s in reversed(path):
            u = perm.compose(u, self._arrays[s])
        return u

    def _divide(self, lvl, h, beta):
        """h * u_beta^{-1}, without requiring materialized transversals."""
        if lvl.u_inv is not None:
            return perm.compose(h, lvl.u_inv[beta])
        x = int(beta)
        while x != lvl.point:
            h = perm.compose(h, self._inverses[int(lvl.edge[x])])
            x = int(lvl.parent[x])
        return h

    # -- membership --------------------------------------------------------

    def sift(self, p, start=0):
        """Strip transversal factors; returns (residue, level reached).

        The residue is the identity exactly when p lies in the level-`start`
        group.  A non-identity residue together with the level where sifting
        stopped says which level group the element escaped.
        """
        h = p
        for i in range(start, len(self.levels)):
            lvl = self._data(i)
            beta = int(h[lvl.point])
            if lvl.parent[beta] < 0:
                return h, i
            if beta != lvl.point:
                h = self._divide(lvl, h, beta)
        return h, len(self.levels)

    def contains(self, p):
        r, _ = self.sift(perm.as_perm(p, self.n))
        return perm.is_identity(r)

    # -- construction --------------------------------------------------------

    def _new_base_point(self, g):
        for p in self._initial_base:
            if g[p] != p and all(lvl.point != p for lvl in self.levels):
                return p
        return int(perm.support(g)[0])

    def _place(self, g):
        """Insert a generator at the first level whose base point it moves."""
        j = 0
        while True:
            if j == len(self.levels):
                self.levels.append(_Level(self._new_base_point(g)))
            lvl = self.levels[j]
            if g[lvl.point] != lvl.point:
                lvl.gens.append(self._register(g))
                return j
            j += 1

    def _build(self, gens):
        moved = set()
        for g in gens:
            moved.update(perm.support(g).tolist())
        seen = set()
        for p in self._initial_base:
            if p in moved and p not in seen:
                self.levels.append(_Level(p))
                seen.add(p)
        for g in gens:
            self._place(g)
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self._data(i)
            serials = self._serials_at(i)
            jumped = False
            for beta in sorted(lvl.orbit):
                u_beta = None
                for s in serials:
                    if (beta, s) in lvl.tested:
                        continue
                    if u_beta is None:
                        u_beta = self.transversal_element(i, beta)
                    g = self._arrays[s]
                    target = int(g[beta])
                    sgen = perm.compose(u_beta, g)
                    sgen = self._divide(lvl, sgen, target)
                    r = sgen
                    j = len(self.levels)
                    if not perm.is_identity(r):
                        r, j = self.sift(sgen, i + 1)
                    if perm.is_identity(r):
                        lvl.tested.add((beta, s))
                        continue
                    if j == len(self.levels):
                        self.levels.append(_Level(self._new_base_point(r)))
                    self.levels[j].gens.append(self._register(r))
                    i = j
                    jumped = True
                    break
                if jumped:
                    break
            if not jumped:
                i -= 1

    # -- views used by invariant computations ---------------------------------

    def orbit_length(self, i):
        return len(self._data(i).orbit)

    def nontrivial_levels(self):
        """Indices of levels with orbit length > 1, in chain order."""
        return [i for i in range(len(self.levels)) if self.orbit_length(i) > 1]

    def transversal_matrix(self, i):
        """All transversal elements of level i, rows ordered by orbit point."""
        lvl = self._data(i)
        pts = sorted(lvl.orbit)
        rows = np.empty((len(pts), self.n), dtype=perm.DTYPE)
        for r, beta in enumerate(pts):
            rows[r] = self.transversal_element(i, beta)
        return rows


class PermGroup:
    """A permutation group given by generators on {0, ..., degree-1}."""

    def __init__(self, generators, degree, name=""):
        self.degree = int(degree)
        self.name = name
        gens = []
        seen = set()
        for g in generators:
            a = perm.as_perm(g, self.degree)
            key = a.tobytes()
            if key in seen or perm.is_identity(a):
                continue
            seen.add(key)
            gens.append(a)
        self.generators = gens
        self._chain = None

    def __repr__(self):
        label = self.name or f"{len(self.generators)} generators"
        return f"PermGroup(degree={self.degree}, {label})"

    def build_chain(self, initial_base=()):
        """Stabilizer chain; the default chain is cached."""
        if initial_base:
            return StabilizerChain(self.generators, self.degree, initial_base)
        if self._chain is None:
            self._chain = StabilizerChain(self.generators, self.degree)
        return self._chain

    def order(self):
        return self.build_chain().order()

    def contains(self, p):
        return self.build_chain().contains(p)

    def is_trivial(self):
        return not self.generators

    # -- orbits ----------------------------------------------------------

    def orbit(self, x):
        """Sorted orbit of the point x under the group."""
        n = self.degree
        if not (0 <= x < n):
            raise ValueError(f"point {x} out of range for degree {n}")
        seen = np.zeros(n, dtype=bool)
        seen[x] = True
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in self.generators:
                z = int(g[y])
                if not seen[z]:
                    seen[z] = True
                    queue.append(z)
        return np.nonzero(seen)[0].tolist()

    def orbits(self):
        """All orbits, each sorted, ordered by smallest element."""
        n = self.degree
        done = np.zeros(n, dtype=bool)
        out = []
        for x in range(n):
            if done[x]:
                continue
            orb = self.orbit(x)
            for y in orb:
                done[y] = True
            out.append(orb)
        return out

    def is_transitive(self):
        return len(self.orbit(0)) == self.degree

    # -- distinguished subgroups -------------------------------------------

    def pointwise_stabilizer(self, points):
        """Subgroup fixing every point in `points`."""
        pts = [int(p) for p in points]
        chain = self.build_chain(initial_base=pts)
        moved = set()
        for g in self.generators:
            moved.update(perm.support(g).tolist())
        k = len([p for p in dict.fromkeys(pts) if p in moved])
        return PermGroup(chain.gens_at(k), self.degree)

    def derived_subgroup(self):
        """Commutator subgroup: normal closure of generator commutators."""
        n = self.degree
        commutators = []
        for a in self.generators:
            ia = perm.inverse(a)
            for b in self.generators:
                c = perm.compose(perm.compose(perm.inverse(b), ia), perm.compose(b, a))
                if not perm.is_identity(c):
                    commutators.append(c)
        closure = []
        chain = None
        for c in commutators:
            if chain is not None and chain.contains(c):
                continue
            closure.append(c)
            chain = StabilizerChain(closure, n)
        if not closure:
            return PermGroup([], n)
        while True:
            missing = []
            for s in list(closure):
                for g in self.generators:
                    c = perm.compose(perm.compose(perm.inverse(g), s), g)
                    if not chain.contains(c):
                        missing.append(c)
            added = False
            for c in missing:
                if not chain.contains(c):
                    closure.append(c)
                    chain = StabilizerChain(closure, n)
                    added = True
            if not added:
                break
        return PermGroup(closure, n)

    # -- primitivity -------------------------------------------------------

    def minimal_block(self, beta):
        """Smallest block containing {0, beta} for the congruence it generates."""
        n = self.degree
        parent = list(range(n))

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return -1
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx
            return ry

        queue = deque()
        dethroned = union(0, beta)
        if dethroned >= 0:
            queue.append(dethroned)
        while queue:
            x = queue.popleft()
            rep = find(x)
            for g in self.generators:
                d = union(int(g[x]), int(g[rep]))
                if d >= 0:
                    queue.append(d)
        root = find(0)
        return [x for x in range(n) if find(x) == root]

    def is_primitive(self):
        """Transitive with no nontrivial block system."""
        n = self.degree
        if n == 1:
            return True
        if not self.is_transitive():
            return False
        stab = self.pointwise_stabilizer([0])
        reps = [orb[0] for orb in stab.orbits() if orb[0] != 0]
        for beta in reps:
            if len(self.minimal_block(beta)) < n:
                return False
        return True

    # -- element enumeration ------------------------------------------------

    def iter_elements(self, limit=10**7):
        """Yield every element once, in transversal-product order."""
        chain = self.build_chain()
        if limit is not None and chain.order() > limit:
            raise BudgetExceeded(
                f"group order {chain.order()} exceeds enumeration limit {limit}"
            )
        mats = [chain.transversal_matrix(i) for i in chain.nontrivial_levels()]
        if not mats:
            yield perm.identity(self.degree)
            return

        def rec(prefix, depth):
            if depth == len(mats):
                yield prefix.copy()
                return
            for row in mats[depth]:
                yield from rec(prefix[row], depth + 1)

        for row in mats[0]:
            yield from rec(row, 1)
