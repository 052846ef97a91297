"""Classical forms: quadratic (types +, -, o), symplectic, hermitian.

Quadratic forms are stored as upper-triangular coefficient matrices C
with Q(v) = sum over i <= j of C[i,j] v_i v_j, plus the polarization
Gram matrix B defined by B(u,v) = Q(u+v) - Q(u) - Q(v).  Coefficient
patterns are pinned constants (see make_form); every constructed
quadratic form is classified by its singular-point count against the
closed-form counts, and construction fails on any mismatch.

Hermitian forms use the identity Gram over a square field: h(x,y) =
sum of x_i * conj(y_i), linear in the first argument.  Form.q is
always the size of the field the matrices live over, so for hermitian
forms it is the square of the classical parameter.

Bilinear values follow the row convention: B(x, v) = x @ gram @ v^T,
and for hermitian forms h(x, v) = x @ gram @ conj(v)^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError
from .fields import Field, field_ops
from .linalg import DTYPE, identity_matrix, rank, row_image

__all__ = [
    "Form",
    "all_vectors",
    "classify_quadratic",
    "evaluate",
    "evaluate_batch",
    "form_preserved",
    "form_restrict",
    "make_form",
    "polar",
    "polar_batch",
    "reflection",
    "singular_point_count",
    "symplectic_transvection",
    "unitary_transvection",
]


@dataclass(frozen=True, eq=False)
class Form:
    kind: str
    d: int
    q: int
    sign: str | None
    coeff: np.ndarray | None
    gram: np.ndarray
    F: Field

    def __post_init__(self) -> None:
        self.gram.setflags(write=False)
        if self.coeff is not None:
            self.coeff.setflags(write=False)

    def __repr__(self) -> str:
        tag = f", sign={self.sign}" if self.sign else ""
        return f"Form({self.kind}, d={self.d}, q={self.q}{tag})"


def all_vectors(d: int, q: int) -> np.ndarray:
    """All q^d row vectors over GF(q); row k has coordinates
    v[i] = (k // q^i) % q, so the first coordinate varies fastest."""
    ks = np.arange(q**d, dtype=np.int64)
    cols = [(ks // q**i) % q for i in range(d)]
    return np.stack(cols, axis=1).astype(DTYPE)


def evaluate_batch(form: Form, vecs: np.ndarray) -> np.ndarray:
    """Pointwise form value of each row: Q(v) for quadratic forms,
    h(v,v) for hermitian forms."""
    F = form.F
    vecs = np.asarray(vecs, dtype=DTYPE)
    if vecs.ndim != 2 or vecs.shape[1] != form.d:
        raise ValueError(f"expected rows of dimension {form.d}")
    out = np.zeros(len(vecs), dtype=F.add_table.dtype)
    if form.kind == "quadratic":
        C = form.coeff
        for i in range(form.d):
            for j in range(i, form.d):
                c = int(C[i, j])
                if not c:
                    continue
                term = F.mul_table[F.mul_table[vecs[:, i], vecs[:, j]], c]
                out = F.add_table[out, term]
        return out.astype(DTYPE)
    if form.kind == "hermitian":
        conj = np.array([F.conj(a) for a in F.elements()], dtype=DTYPE)
        for i in range(form.d):
            term = F.mul_table[vecs[:, i], conj[vecs[:, i]]]
            out = F.add_table[out, term]
        return out.astype(DTYPE)
    raise ValueError("symplectic forms have no pointwise value")


def evaluate(form: Form, v: np.ndarray) -> int:
    return int(evaluate_batch(form, np.asarray(v, dtype=DTYPE)[None, :])[0])


def polar_batch(form: Form, vecs: np.ndarray, v: np.ndarray) -> np.ndarray:
    """B(row, v) for each row of vecs (h(row, v) for hermitian forms)."""
    F = form.F
    vecs = np.asarray(vecs, dtype=DTYPE)
    v = np.asarray(v, dtype=DTYPE)
    if form.kind == "hermitian":
        w = np.array([F.conj(int(x)) for x in v], dtype=DTYPE)
    else:
        w = v
    t = row_image(F, w, form.gram.T)
    out = np.zeros(len(vecs), dtype=F.add_table.dtype)
    for i in range(form.d):
        ti = int(t[i])
        if ti:
            out = F.add_table[out, F.mul_table[vecs[:, i], ti]]
    return out.astype(DTYPE)


def polar(form: Form, u: np.ndarray, v: np.ndarray) -> int:
    return int(polar_batch(form, np.asarray(u, dtype=DTYPE)[None, :], v)[0])


def _polarization(F: Field, C: np.ndarray) -> np.ndarray:
    d = C.shape[0]
    B = np.zeros((d, d), dtype=DTYPE)
    for i in range(d):
        for j in range(d):
            if i < j:
                B[i, j] = C[i, j]
            elif i > j:
                B[i, j] = C[j, i]
            else:
                B[i, i] = F.add(int(C[i, i]), int(C[i, i]))
    return B


def _absolute_trace(F: Field, a: int) -> int:
    acc, t = a, a
    for _ in range(F.f - 1):
        t = F.frobenius(t)
        acc = F.add(acc, t)
    return acc


def _elliptic_head(F: Field) -> tuple[int, int, int]:
    """Coefficients (c00, c01, c11) of an anisotropic binary form."""
    if F.p == 2:
        for a in F.elements():
            if _absolute_trace(F, a) == 1:
                return 1, 1, a
        raise ConstructionError("no trace-one element found")
    squares = {F.mul(x, x) for x in F.elements() if x}
    alpha = min(x for x in F.elements() if x and x not in squares)
    return 1, 0, F.neg(alpha)


def _quadratic_coeffs(F: Field, d: int, sign: str) -> np.ndarray:
    C = np.zeros((d, d), dtype=DTYPE)
    if sign == "+":
        for i in range(d - 1):
            C[i, i + 1] = 1
        return C
    if sign == "-":
        c00, c01, c11 = _elliptic_head(F)
        C[0, 0] = c00
        C[0, 1] = c01
        C[1, 1] = c11
        for i in range(2, d - 1):
            C[i, i + 1] = 1
        return C
    C[0, 0] = 1
    for i in range(1, d - 1, 2):
        C[i, i + 1] = 1
    return C


def singular_point_count(form: Form) -> int:
    """Number of projective points on which the form vanishes."""
    values = evaluate_batch(form, all_vectors(form.d, form.q))
    vec_count = int(np.count_nonzero(values == 0)) - 1
    points, rem = divmod(vec_count, form.q - 1)
    if rem:
        raise ConstructionError("singular vectors do not fill whole subspaces")
    return points


def classify_quadratic(form: Form) -> str:
    """Type (+, - or o) of a nondegenerate quadratic form, decided by
    its singular-point count against the closed-form counts."""
    d, q = form.d, form.q
    m = d // 2
    points = singular_point_count(form)
    if d % 2:
        expect = {(q ** (d - 1) - 1) // (q - 1): "o"}
    else:
        expect = {
            (q ** (m - 1) + 1) * (q**m - 1) // (q - 1): "+",
            (q ** (m - 1) - 1) * (q**m + 1) // (q - 1): "-",
        }
    got = expect.get(points)
    if got is None:
        raise ConstructionError(
            f"singular point count {points} matches no nondegenerate type "
            f"in dimension {d} over GF({q})"
        )
    return got


def make_form(kind: str, d: int, q: int, sign: str | None = None) -> Form:
    """Construct the pinned form of the given kind.

    Coefficient patterns (1-based variable names):

    - quadratic "+" (d even): the chain X_1X_2 + X_2X_3 + ... + X_{d-1}X_d.
    - quadratic "-" (d even): anisotropic head on X_1, X_2 (for even q:
      X_1^2 + X_1X_2 + aX_2^2 with a the smallest element of absolute
      trace 1, so a = 1 at q = 2; for odd q: X_1^2 - alpha X_2^2 with
      alpha the smallest nonsquare), plus the chain X_3X_4 + ... +
      X_{d-1}X_d.
    - quadratic "o" (d odd, q odd): X_1^2 + X_2X_3 + X_4X_5 + ...
    - symplectic (d even): for even q the tridiagonal chain Gram, which
      is the polarization of the "+" quadratic form above; for odd q,
      block-diagonal [[0,1],[-1,0]] blocks.
    - hermitian: identity Gram over the square field of size q.

    Every quadratic form is checked for nondegeneracy and classified
    against the closed-form singular counts; construction fails on any
    mismatch.
    """
    F = field_ops(q)
    if kind == "quadratic":
        if sign not in ("+", "-", "o"):
            raise ValueError(f"quadratic sign must be +, - or o, got {sign!r}")
        if sign == "o":
            if d % 2 == 0 or d < 3:
                raise ValueError(f"type o needs odd d >= 3, got {d}")
            if q % 2 == 0:
                raise ValueError("type o needs odd q")
        elif d % 2 or d < 2:
            raise ValueError(f"signed types need even d >= 2, got {d}")
        C = _quadratic_coeffs(F, d, sign)
        B = _polarization(F, C)
        if rank(F, B) != d:
            raise ConstructionError("degenerate polarization")
        form = Form("quadratic", d, q, sign, C, B, F)
        got = classify_quadratic(form)
        if got != sign:
            raise ConstructionError(f"requested type {sign}, classified as {got}")
        return form
    if kind == "symplectic":
        if sign is not None:
            raise ValueError("symplectic forms carry no sign")
        if d % 2 or d < 2:
            raise ValueError(f"symplectic dimension must be even >= 2, got {d}")
        B = np.zeros((d, d), dtype=DTYPE)
        if q % 2 == 0:
            for i in range(d - 1):
                B[i, i + 1] = 1
                B[i + 1, i] = 1
        else:
            for i in range(0, d, 2):
                B[i, i + 1] = 1
                B[i + 1, i] = F.neg(1)
        if rank(F, B) != d:
            raise ConstructionError("degenerate symplectic gram")
        return Form("symplectic", d, q, None, None, B, F)
    if kind == "hermitian":
        if sign is not None:
            raise ValueError("hermitian forms carry no sign")
        if F.f % 2:
            raise ValueError(f"hermitian forms need a square field, got q={q}")
        return Form("hermitian", d, q, None, None, identity_matrix(d), F)
    raise ValueError(f"unknown form kind {kind!r}")


def form_restrict(form: Form, basis: np.ndarray) -> Form:
    """The quadratic form induced on the row space of `basis`,
    expressed in basis coordinates.  The result may be degenerate; its
    sign is left unset."""
    if form.kind != "quadratic":
        raise ValueError("restriction is implemented for quadratic forms")
    F = form.F
    basis = np.asarray(basis, dtype=DTYPE)
    k = basis.shape[0]
    C = np.zeros((k, k), dtype=DTYPE)
    for i in range(k):
        C[i, i] = evaluate(form, basis[i])
        for j in range(i + 1, k):
            C[i, j] = polar(form, basis[i], basis[j])
    B = _polarization(F, C)
    return Form("quadratic", k, form.q, None, C, B, F)


def form_preserved(form: Form, m: np.ndarray) -> bool:
    """Whether the row action v -> v @ m preserves the form, checked on
    basis vectors and basis pairs (which determine the form)."""
    d = form.d
    m = np.asarray(m, dtype=DTYPE)
    if m.shape != (d, d):
        return False
    if form.kind == "quadratic":
        for i in range(d):
            if evaluate(form, m[i]) != int(form.coeff[i, i]):
                return False
        for i in range(d):
            for j in range(i + 1, d):
                if polar(form, m[i], m[j]) != int(form.gram[i, j]):
                    return False
        return True
    for i in range(d):
        for j in range(d):
            if polar(form, m[i], m[j]) != int(form.gram[i, j]):
                return False
    return True


def _shear(form: Form, v: np.ndarray, scale_by: dict[int, int]) -> np.ndarray:
    """Matrix sending e_i to e_i + scale_by[i] * v."""
    out = identity_matrix(form.d)
    F = form.F
    for i, c in scale_by.items():
        if c:
            out[i] = F.add_table[out[i], F.mul_table[c, v]].astype(DTYPE)
    return out


def reflection(form: Form, v: np.ndarray) -> np.ndarray:
    """Reflection through the nonsingular vector v:
    x -> x - (B(x,v)/Q(v)) v.  Over even q this is the orthogonal
    transvection fixing v; over odd q it is the involution negating v."""
    if form.kind != "quadratic":
        raise ValueError("reflections need a quadratic form")
    F = form.F
    v = np.asarray(v, dtype=DTYPE)
    qv = evaluate(form, v)
    if qv == 0:
        raise ValueError("reflection vector must be nonsingular")
    inv_qv = F.inv(qv)
    coeffs = polar_batch(form, identity_matrix(form.d), v)
    scale = {i: F.neg(F.mul(int(coeffs[i]), inv_qv)) for i in range(form.d)}
    return _shear(form, v, scale)


def symplectic_transvection(form: Form, v: np.ndarray, lam: int) -> np.ndarray:
    """x -> x + lam * B(x,v) v; preserves any alternating form."""
    if form.kind != "symplectic":
        raise ValueError("symplectic transvections need a symplectic form")
    F = form.F
    v = np.asarray(v, dtype=DTYPE)
    if not v.any():
        raise ValueError("transvection vector must be nonzero")
    coeffs = polar_batch(form, identity_matrix(form.d), v)
    scale = {i: F.mul(lam, int(coeffs[i])) for i in range(form.d)}
    return _shear(form, v, scale)


def unitary_transvection(form: Form, v: np.ndarray, lam: int) -> np.ndarray:
    """x -> x + lam * h(x,v) v for isotropic v and a scalar lam with
    conj(lam) = -lam."""
    if form.kind != "hermitian":
        raise ValueError("unitary transvections need a hermitian form")
    F = form.F
    v = np.asarray(v, dtype=DTYPE)
    if not v.any():
        raise ValueError("transvection vector must be nonzero")
    if evaluate(form, v) != 0:
        raise ValueError("transvection vector must be isotropic")
    if F.conj(lam) != F.neg(lam):
        raise ValueError("transvection scalar must satisfy conj(lam) = -lam")
    coeffs = polar_batch(form, identity_matrix(form.d), v)
    scale = {i: F.mul(lam, int(coeffs[i])) for i in range(form.d)}
    return _shear(form, v, scale)
