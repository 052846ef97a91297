"""Canonical enumeration of the subspace domains P_k, S_k, N_k and the
coset-of-quadratic-forms domain, plus the bridge from matrices to
permutations of those domains.

Subspace representatives are reduced row-echelon bases (unit pivots,
zeros above and below each pivot) and a domain lists its members in
lexicographic order of the flattened entry sequence, so point indices
are reproducible across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fields import field_ops
from .forms import Form, classify_quadratic, evaluate, form_preserved, polar
from .linalg import DTYPE, is_invertible, mat_inv, mat_mul, rref
from .permutation import as_perm

__all__ = [
    "Domain",
    "enumerate_domain",
    "enumerate_quadratic_coset_domain",
    "matrix_action_on_domain",
]


@dataclass(frozen=True, eq=False)
class Domain:
    kind: str
    k: int
    d: int
    q: int
    sign: str | None
    form: Form | None
    members: tuple[np.ndarray, ...]
    index: dict[bytes, int]

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        tag = f"^{self.sign}" if self.sign else ""
        return f"Domain({self.kind}_{self.k}{tag}, d={self.d}, q={self.q}, size={len(self)})"


def _freeze(kind, k, d, q, sign, form, members) -> Domain:
    members = tuple(sorted(members, key=lambda m: m.tobytes()))
    for m in members:
        m.setflags(write=False)
    index = {m.tobytes(): i for i, m in enumerate(members)}
    if len(index) != len(members):
        raise AssertionError("duplicate canonical representatives")
    return Domain(kind, k, d, q, sign, form, members, index)


def _rref_representatives(d: int, q: int, k: int):
    """All k-dimensional subspaces of GF(q)^d, one reduced-echelon
    basis matrix each."""
    for pivots in itertools.combinations(range(d), k):
        pivot_set = set(pivots)
        free = [
            (i, c)
            for i in range(k)
            for c in range(pivots[i] + 1, d)
            if c not in pivot_set
        ]
        base = np.zeros((k, d), dtype=DTYPE)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        for values in itertools.product(range(q), repeat=len(free)):
            mat = base.copy()
            for (i, c), value in zip(free, values):
                mat[i, c] = value
            yield mat


def _totally_singular(form: Form, mat: np.ndarray) -> bool:
    k = mat.shape[0]
    if form.kind == "quadratic":
        if any(evaluate(form, mat[i]) for i in range(k)):
            return False
        return not any(
            polar(form, mat[i], mat[j]) for i in range(k) for j in range(i + 1, k)
        )
    if form.kind == "hermitian":
        return not any(
            polar(form, mat[i], mat[j]) for i in range(k) for j in range(i, k)
        )
    return not any(
        polar(form, mat[i], mat[j]) for i in range(k) for j in range(i + 1, k)
    )


def enumerate_domain(
    kind: str,
    k: int,
    space: Form | int,
    q: int | None = None,
    sign: str | None = None,
) -> Domain:
    """The domain of k-subspaces of the given kind.

    kind "P" takes the ambient dimension as `space` (plus q); kinds "S"
    and "N" take a Form.  For quadratic forms over odd q the nonsingular
    points split into square and nonsquare value classes (Q(cv) =
    c^2 Q(v), so the class is a point invariant), selected by sign "+"
    or "-"; every other combination takes no sign.  Raises if the
    requested domain is empty.
    """
    if kind == "P":
        if isinstance(space, Form):
            raise ValueError("P_k is form-free; pass the dimension")
        if q is None:
            raise ValueError("P_k needs an explicit field size")
        d = int(space)
        form = None
    else:
        if not isinstance(space, Form):
            raise ValueError(f"{kind}_{k} needs a Form")
        form = space
        d = form.d
        if q is not None and q != form.q:
            raise ValueError(f"field size {q} does not match the form's {form.q}")
        q = form.q
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= {d}, got k={k}")
    sign_allowed = kind == "N" and form is not None and form.kind == "quadratic" and q % 2
    if sign_allowed and sign not in ("+", "-"):
        raise ValueError("odd-q nonsingular points need a class sign + or -")
    if not sign_allowed and sign is not None:
        raise ValueError(f"{kind}_{k} carries no sign class here")

    if kind == "P":
        members = list(_rref_representatives(d, q, k))
    elif kind == "S":
        members = [
            m for m in _rref_representatives(d, q, k) if _totally_singular(form, m)
        ]
    elif kind == "N":
        if k != 1:
            raise ValueError("nondegenerate domains are provided at k=1 only")
        F = form.F
        squares = {F.mul(x, x) for x in F.elements() if x}
        members = []
        for m in _rref_representatives(d, q, 1):
            value = evaluate(form, m[0])
            if not value:
                continue
            if sign_allowed:
                in_square_class = value in squares
                if in_square_class != (sign == "+"):
                    continue
            members.append(m)
    else:
        raise ValueError(f"unknown domain kind {kind!r}")
    if not members:
        raise ValueError(f"domain {kind}_{k} is empty for these parameters")
    return _freeze(kind, k, d, q, sign, form, members)


def _coset_form(sym: Form, diag: np.ndarray) -> Form:
    C = np.triu(sym.gram, 1).astype(DTYPE)
    np.fill_diagonal(C, diag)
    return Form("quadratic", sym.d, sym.q, None, C, sym.gram, sym.F)


def enumerate_quadratic_coset_domain(sym: Form, sign: str) -> Domain:
    """Quadratic forms whose polarization is the given even-q symplectic
    Gram, restricted to one type class.  Members are encoded by their
    diagonal coefficient vectors (length-d rows); the symplectic group
    permutes them by transport.
    """
    if sym.kind != "symplectic" or sym.q % 2:
        raise ValueError("coset domain needs an even-q symplectic form")
    if sign not in ("+", "-"):
        raise ValueError("sign must be + or -")
    d, q = sym.d, sym.q
    members = []
    for diag in itertools.product(range(q), repeat=d):
        vec = np.array(diag, dtype=DTYPE)[None, :]
        if classify_quadratic(_coset_form(sym, vec[0])) == sign:
            members.append(vec)
    return _freeze("QCosets", 1, d, q, sign, sym, members)


def _coset_image(dom: Domain, w: np.ndarray, member: np.ndarray) -> np.ndarray:
    sym = dom.form
    F = sym.F
    C = np.triu(sym.gram, 1).astype(DTYPE)
    np.fill_diagonal(C, member[0])
    moved = mat_mul(F, mat_mul(F, w, C), w.T.copy())
    off = F.add_table[np.triu(moved, 1), np.tril(moved, -1).T].astype(DTYPE)
    if (off != np.triu(sym.gram, 1)).any():
        raise AssertionError("transport left the fixed polarization")
    return np.diagonal(moved).astype(DTYPE)[None, :].copy()


def matrix_action_on_domain(m: np.ndarray, dom: Domain) -> np.ndarray:
    """The permutation the row action of m induces on dom's index
    space.  Requires m to preserve the domain's form (when it has one);
    functorial over matrix products."""
    F = field_ops(dom.q)
    m = np.asarray(m, dtype=DTYPE)
    if dom.form is not None:
        if not form_preserved(dom.form, m):
            raise ValueError("matrix does not preserve the domain's form")
    elif not is_invertible(F, m):
        raise ValueError("matrix is not invertible")
    images = np.empty(len(dom), dtype=np.int32)
    if dom.kind == "QCosets":
        w = mat_inv(F, m)
        for pos, member in enumerate(dom.members):
            key = _coset_image(dom, w, member).tobytes()
            images[pos] = dom.index[key]
    else:
        for pos, member in enumerate(dom.members):
            key = rref(F, mat_mul(F, member, m))[0].tobytes()
            images[pos] = dom.index[key]
    return as_perm(images)
