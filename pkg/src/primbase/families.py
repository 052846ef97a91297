"""Constructors turning a FamilySpec into a concrete permutation action.

Every constructor validates itself before returning: the degree must
equal the closed-form degree from the formulas module, the action must
be transitive, and wherever a classical order formula exists the BSGS
order of the constructed group must match it exactly.  A mismatch
raises ConstructionError; nothing is ever silently accepted.

Generating sets (validated by the order gates, so correctness never
rests on the choice):

- Sym/Alt: transposition + full cycle / 3-cycle + even cycle.
- SL_d(q): the basis cycle with a determinant-fixing corner sign, one
  elementary transvection, and the torus diag(g, g^-1, 1, ...) (needed
  over nonprime fields, where the first two matrices lie in the prime
  subfield).
- GL_d(q) (inside affine): the same cycle with corner (-1)^(d-1) * g
  for a primitive g, plus the transvection.
- Sp/SU: transvections through vectors supported on at most two
  coordinates (all scalar multiples); SU additionally gets the norm-one
  torus element diag(delta, delta^-1, 1, ...) with delta = g^(q-1).
  Transvections do not generate SU_3(2), so on an order-gate failure
  the SU constructor retries with determinant-one quasi-reflection
  pairs over all nondegenerate points added.
- GO: reflections through nonsingular vectors supported on at most two
  coordinates; if that set fails the order gate the constructor falls
  back to reflections through every nonsingular vector (the fallback is
  part of the documented recipe, and a residual mismatch aborts).
- Omega: derived subgroup of the constructed GO action.

The embedded Mathieu data file stores two generator permutations in
image-list notation: line 1 the degree, one permutation per line after
it, and a final "sha256 <hex>" line over the preceding bytes.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import formulas
from .domains import (
    Domain,
    enumerate_domain,
    enumerate_quadratic_coset_domain,
    matrix_action_on_domain,
)
from .errors import ConstructionError
from .fields import Field, field_ops
from .forms import (
    Form,
    all_vectors,
    evaluate,
    make_form,
    reflection,
    symplectic_transvection,
    unitary_transvection,
)
from .group import PermGroup
from .linalg import DTYPE, identity_matrix, mat_mul
from .permutation import as_perm, from_cycles

__all__ = [
    "CLASSICAL_ENVELOPE",
    "ConstructedAction",
    "DEGREE_CAP",
    "FamilySpec",
    "FAMILY_TAGS",
    "affine",
    "alt_on_subsets",
    "build",
    "classical_action",
    "mathieu24",
    "parse_spec",
    "predicted_degree",
    "sp_on_go_cosets",
    "sym_on_partitions",
    "sym_on_subsets",
    "wreath_product_action",
]

FAMILY_TAGS = (
    "SymSubsets",
    "AltSubsets",
    "SymPartitions",
    "Affine",
    "LinearOnPk",
    "SpOnSk",
    "SpOnGOCosets",
    "GOOnS1",
    "GOOnN1",
    "OmegaOnS1",
    "OmegaOnN1",
    "UnitaryOnS1",
    "UnitaryOnN1",
    "WreathProduct",
    "Mathieu24",
)

DEGREE_CAP = 5000

# Desk-scale construction envelope: the (d, q) pairs each classical
# constructor accepts.  Everything here finishes in seconds on one
# core and is covered by an exact order oracle.
CLASSICAL_ENVELOPE = {
    "LinearOnPk": {2: (2, 3, 4, 5, 6), 3: (2, 3, 4), 4: (2, 3), 5: (2, 3)},
    "SpOnSk": {2: (4, 6, 8), 3: (4, 6)},
    # even dimensions take form signs +/-; the odd dimension takes the
    # o-type form (sign selects the nonsingular value class instead)
    "Orthogonal": {2: (4, 6, 8), 3: (4, 6, 7)},
    # unitary: q is the hermitian parameter; matrices live over GF(q^2)
    "Unitary": {2: (3, 4), 3: (3, 4)},
    "SpOnGOCosets": {2: (4, 6, 8)},
}


@dataclass(frozen=True)
class FamilySpec:
    """A family tag plus its parameters.

    `sign` semantics for orthogonal families: in even dimension it is
    the form type (+ or -); in odd dimension the form is the o-type one
    and on N_1 the sign picks the square (+) or nonsquare (-) value
    class, while S_1 takes sign "o" (no class split exists there).
    """

    family: str
    params: tuple[tuple[str, int | str], ...] = ()
    inner: "FamilySpec | None" = None

    def __post_init__(self) -> None:
        if self.family not in FAMILY_TAGS:
            raise ValueError(f"unknown family {self.family!r}")
        keys = [k for k, _ in self.params]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate parameter in {self.params!r}")

    def __getitem__(self, key: str) -> int | str:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __str__(self) -> str:
        parts = [f"{k}={v}" for k, v in sorted(self.params)]
        if self.inner is not None:
            parts.append(f"inner={self.inner}")
        return f"{self.family}({','.join(parts)})"


def spec(family: str, inner: FamilySpec | None = None, **params) -> FamilySpec:
    return FamilySpec(family, tuple(sorted(params.items())), inner)


_NAME_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\((.*)\))?\s*$", re.S)


def _split_top_level(body: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {body!r}")
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    if depth:
        raise ValueError(f"unbalanced parentheses in {body!r}")
    tail = body[start:]
    if tail.strip() or not parts:
        parts.append(tail)
    return parts


def parse_spec(text: str) -> FamilySpec:
    """Parse "Family(key=value,...)"; values are integers, sign strings
    (+, -, o), or a nested spec under the key `inner`."""
    m = _NAME_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse family spec {text!r}")
    name, body = m.group(1), m.group(2)
    params: dict[str, int | str] = {}
    inner = None
    if body and body.strip():
        for piece in _split_top_level(body):
            if "=" not in piece:
                raise ValueError(f"expected key=value, got {piece!r}")
            key, _, value = piece.partition("=")
            key = key.strip()
            value = value.strip()
            if key in params or (key == "inner" and inner is not None):
                raise ValueError(f"duplicate parameter {key!r}")
            if key == "inner":
                inner = parse_spec(value)
                continue
            try:
                params[key] = int(value)
            except ValueError:
                if value not in ("+", "-", "o"):
                    raise ValueError(f"bad value {value!r} for {key!r}") from None
                params[key] = value
    return spec(name, inner=inner, **params)


@dataclass(frozen=True, eq=False)
class ConstructedAction:
    spec: FamilySpec
    group: PermGroup
    labels: tuple[str, ...]
    n: int
    expected_order: int | None
    embed: Callable | None = field(repr=False, default=None)

    @property
    def name(self) -> str:
        return str(self.spec)


def predicted_degree(sp: FamilySpec) -> int:
    """Closed-form degree for the spec, resolved via the formulas
    module (wreath specs resolve their inner degree recursively)."""
    f = sp.family
    if f in ("SymSubsets", "AltSubsets"):
        return formulas.degree(f, m=sp["m"], k=sp["k"])
    if f == "SymPartitions":
        return formulas.degree(f, a=sp["a"], b=sp["b"])
    if f == "Affine":
        return formulas.degree("Affine", d=sp["d"], q=sp["q"])
    if f == "LinearOnPk":
        return formulas.degree("PSL", d=sp["d"], q=sp["q"], k=sp.get("k", 1))
    if f == "SpOnSk":
        return formulas.degree("Sp", d=sp["d"], q=sp["q"], k=sp.get("k", 1))
    if f in ("GOOnS1", "OmegaOnS1"):
        d = sp["d"]
        sign = sp["sign"]
        return formulas.degree("GO", d=d, q=sp["q"], sign=sign, domain="S1")
    if f in ("GOOnN1", "OmegaOnN1"):
        d = sp["d"]
        sign = sp["sign"]
        if d % 2:
            return formulas.degree("GO", d=d, q=sp["q"], sign="o", domain=f"N1{sign}")
        return formulas.degree("GO", d=d, q=sp["q"], sign=sign, domain="N1")
    if f in ("UnitaryOnS1", "UnitaryOnN1"):
        domain = "S1" if f.endswith("S1") else "N1"
        return formulas.degree("SU", d=sp["d"], q=sp["q"], domain=domain)
    if f == "SpOnGOCosets":
        return formulas.degree("SpGOCosets", d=sp["d"], sign=sp["sign"])
    if f == "WreathProduct":
        if sp.inner is None:
            raise ValueError("wreath spec needs an inner spec")
        return formulas.degree(
            "Wreath", inner_degree=predicted_degree(sp.inner), r=sp["r"]
        )
    if f == "Mathieu24":
        return formulas.degree("Mathieu24")
    raise ValueError(f"unknown family {f!r}")


def _finish(
    sp: FamilySpec,
    group: PermGroup,
    labels,
    expected_order: int | None,
    embed=None,
) -> ConstructedAction:
    labels = tuple(labels)
    n = predicted_degree(sp)
    if group.degree != n or len(labels) != n:
        raise ConstructionError(
            f"{sp}: degree {group.degree} != predicted {n}"
        )
    if not group.is_transitive():
        raise ConstructionError(f"{sp}: constructed action is not transitive")
    if expected_order is not None:
        got = group.order()
        if got != expected_order:
            raise ConstructionError(
                f"{sp}: order {got} != oracle {expected_order}"
            )
    return ConstructedAction(sp, group, labels, n, expected_order, embed)


# -- symmetric and alternating families -----------------------------------


def _subset_domain(m: int, k: int):
    members = tuple(itertools.combinations(range(m), k))
    index = {s: i for i, s in enumerate(members)}
    return members, index


def _subset_perm(g: np.ndarray, members, index) -> np.ndarray:
    images = np.empty(len(members), dtype=np.int32)
    for pos, subset in enumerate(members):
        images[pos] = index[tuple(sorted(int(g[x]) for x in subset))]
    return as_perm(images)


def _sym_generators(m: int) -> list[np.ndarray]:
    if m == 2:
        return [from_cycles(2, [(0, 1)])]
    return [from_cycles(m, [(0, 1)]), from_cycles(m, [tuple(range(m))])]


def _alt_generators(m: int) -> list[np.ndarray]:
    if m == 3:
        return [from_cycles(3, [(0, 1, 2)])]
    cycle3 = from_cycles(m, [(0, 1, 2)])
    if m % 2:
        even = from_cycles(m, [tuple(range(m))])
    else:
        even = from_cycles(m, [tuple(range(1, m))])
    return [cycle3, even]


def _on_subsets(tag: str, m: int, k: int) -> ConstructedAction:
    if m < 3 or not 1 <= k <= m // 2:
        raise ValueError(f"need m >= 3 and 1 <= k <= m/2, got ({m},{k})")
    members, index = _subset_domain(m, k)
    gens = _sym_generators(m) if tag == "SymSubsets" else _alt_generators(m)
    group = PermGroup(
        [_subset_perm(g, members, index) for g in gens],
        len(members),
        name=f"{tag}({m},{k})",
    )
    expected = math.factorial(m) // (1 if tag == "SymSubsets" else 2)
    labels = ["{" + ",".join(str(x + 1) for x in s) + "}" for s in members]
    return _finish(
        spec(tag, m=m, k=k),
        group,
        labels,
        expected,
        embed=lambda g: _subset_perm(g, members, index),
    )


def sym_on_subsets(m: int, k: int) -> ConstructedAction:
    return _on_subsets("SymSubsets", m, k)


def alt_on_subsets(m: int, k: int) -> ConstructedAction:
    return _on_subsets("AltSubsets", m, k)


def _partition_domain(a: int, b: int):
    def rec(remaining):
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for combo in itertools.combinations(rest, a - 1):
            block = (first, *combo)
            left = tuple(x for x in rest if x not in combo)
            for tail in rec(left):
                yield (block, *tail)

    members = tuple(rec(tuple(range(a * b))))
    index = {p: i for i, p in enumerate(members)}
    return members, index


def _partition_perm(g: np.ndarray, members, index) -> np.ndarray:
    images = np.empty(len(members), dtype=np.int32)
    for pos, part in enumerate(members):
        blocks = sorted(tuple(sorted(int(g[x]) for x in block)) for block in part)
        images[pos] = index[tuple(blocks)]
    return as_perm(images)


def sym_on_partitions(a: int, b: int) -> ConstructedAction:
    """The symmetric group on {1..ab} acting on partitions into b
    blocks of size a.  Faithful except at (2,2), where the image is the
    symmetric group of the three partitions."""
    if a < 2 or b < 2:
        raise ValueError(f"need a, b >= 2, got ({a},{b})")
    m = a * b
    members, index = _partition_domain(a, b)
    group = PermGroup(
        [_partition_perm(g, members, index) for g in _sym_generators(m)],
        len(members),
        name=f"SymPartitions({a},{b})",
    )
    expected = math.factorial(m)
    if (a, b) == (2, 2):
        expected //= 4
    labels = [
        "|".join("{" + ",".join(str(x + 1) for x in blk) + "}" for blk in part)
        for part in members
    ]
    return _finish(
        spec("SymPartitions", a=a, b=b),
        group,
        labels,
        expected,
        embed=lambda g: _partition_perm(g, members, index),
    )


# -- affine ----------------------------------------------------------------


def _cycle_with_corner(F: Field, d: int, corner: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=DTYPE)
    for i in range(d - 1):
        m[i, i + 1] = 1
    m[d - 1, 0] = corner
    return m


def _elementary_transvection(d: int) -> np.ndarray:
    m = identity_matrix(d)
    m[0, 1] = 1
    return m


def _sl_generators(F: Field, d: int) -> list[np.ndarray]:
    corner = 1 if d % 2 else F.neg(1)
    mats = [_cycle_with_corner(F, d, corner), _elementary_transvection(d)]
    # over a nonprime field the cycle and the unit transvection have all
    # entries in the prime subfield; the torus conjugates the transvection
    # through the full root subgroup
    gamma = F.generator()
    torus = identity_matrix(d)
    torus[0, 0] = gamma
    torus[1, 1] = F.inv(gamma)
    mats.append(torus)
    return _dedupe(mats)


def _gl_generators(F: Field, d: int) -> list[np.ndarray]:
    gamma = F.generator()
    if d == 1:
        return [np.array([[gamma]], dtype=DTYPE)] if F.q > 2 else []
    corner = gamma if d % 2 else F.neg(gamma)
    mats = [_cycle_with_corner(F, d, corner), _elementary_transvection(d)]
    # same nonprime-field completion as for SL
    torus = identity_matrix(d)
    torus[0, 0] = gamma
    mats.append(torus)
    return _dedupe(mats)


def affine(d: int, q: int, matrices=None) -> ConstructedAction:
    """AGL_d(q) on the vectors of GF(q)^d (translations plus the
    two-generator GL), or, when `matrices` is given, the subgroup
    generated by the translations and those matrices (no order gate)."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    F = field_ops(q)
    n = q**d
    vecs = all_vectors(d, q)
    powers = (q ** np.arange(d)).astype(np.int64)

    def encode(mat) -> np.ndarray:
        return (mat.astype(np.int64) * powers).sum(axis=1)

    def affine_perm(shift, matrix) -> np.ndarray:
        moved = vecs
        if matrix is not None:
            moved = mat_mul(F, moved, np.asarray(matrix, dtype=DTYPE))
        if shift is not None:
            moved = F.add_table[moved, np.asarray(shift, dtype=DTYPE)[None, :]]
        return as_perm(encode(np.asarray(moved, dtype=DTYPE)).astype(np.int32))

    gens = []
    for i in range(d):
        e = np.zeros(d, dtype=DTYPE)
        e[i] = 1
        gens.append(affine_perm(e, None))
    point_group = _gl_generators(F, d) if matrices is None else list(matrices)
    for mat in point_group:
        gens.append(affine_perm(None, mat))
    group = PermGroup(gens, n, name=f"Affine({d},{q})")
    expected = formulas.classical_order("AGL", d, q) if matrices is None else None
    labels = ["".join(str(int(x)) for x in v) for v in vecs]
    sp_ = spec("Affine", d=d, q=q)
    action = _finish(sp_, group, labels, expected, embed=lambda s, m: affine_perm(s, m))
    return action


# -- classical subspace actions --------------------------------------------


def _short_vectors(d: int, q: int):
    """Nonzero vectors supported on at most two coordinates, one per
    scalar class (first nonzero coordinate = 1)."""
    out = []
    for i in range(d):
        v = np.zeros(d, dtype=DTYPE)
        v[i] = 1
        out.append(v)
    for i in range(d):
        for j in range(i + 1, d):
            for c in range(1, q):
                v = np.zeros(d, dtype=DTYPE)
                v[i] = 1
                v[j] = c
                out.append(v)
    return out


def _dedupe(mats) -> list[np.ndarray]:
    seen = set()
    out = []
    eye_key = None
    for m in mats:
        key = m.tobytes()
        if eye_key is None:
            eye_key = identity_matrix(m.shape[0]).tobytes()
        if key == eye_key or key in seen:
            continue
        seen.add(key)
        out.append(m)
    return out


def _sp_generators(form: Form) -> list[np.ndarray]:
    F = form.F
    mats = []
    for v in _short_vectors(form.d, form.q):
        for lam in range(1, form.q):
            mats.append(symplectic_transvection(form, v, lam))
    return _dedupe(mats)


def _go_generators(form: Form, full: bool) -> list[np.ndarray]:
    if full:
        vs = [
            m[0]
            for m in _rref_points(form.d, form.q)
            if evaluate(form, m[0]) != 0
        ]
    else:
        vs = [v for v in _short_vectors(form.d, form.q) if evaluate(form, v) != 0]
    return _dedupe([reflection(form, v) for v in vs])


def _rref_points(d: int, q: int):
    dom = enumerate_domain("P", 1, d, q)
    return dom.members


def _su_generators(form: Form) -> list[np.ndarray]:
    F = form.F
    lams = [x for x in F.elements() if x and F.conj(x) == F.neg(x)]
    mats = []
    for v in _short_vectors(form.d, form.q):
        if evaluate(form, v) != 0:
            continue
        for lam in lams:
            mats.append(unitary_transvection(form, v, lam))
    gamma = F.generator()
    q0 = F.p ** (F.f // 2)
    delta = F.power(gamma, q0 - 1)
    torus = identity_matrix(form.d)
    torus[0, 0] = delta
    torus[1, 1] = F.inv(delta)
    mats.append(torus)
    return _dedupe(mats)


def _unitary_quasi_reflection(form: Form, v: np.ndarray, lam: int) -> np.ndarray:
    # x -> x + (lam - 1) h(x, v) / h(v, v) v; unitary iff norm(lam) = 1,
    # determinant lam
    F = form.F
    alpha = F.div(F.sub(lam, 1), evaluate(form, v))
    conj_v = np.array([F.conj(int(x)) for x in v], dtype=DTYPE)
    outer = F.mul_table[alpha, F.mul_table[conj_v[:, None], v[None, :]]]
    return F.add_table[identity_matrix(form.d), outer].astype(DTYPE)


def _su_full_generators(form: Form) -> list[np.ndarray]:
    # transvections do not generate SU_3(2); determinant-one pairs of
    # quasi-reflections over the nondegenerate points complete the group
    F = form.F
    q0 = F.p ** (F.f // 2)
    delta = F.power(F.generator(), q0 - 1)
    e0 = np.zeros(form.d, dtype=DTYPE)
    e0[0] = 1
    comp = _unitary_quasi_reflection(form, e0, F.inv(delta))
    mats = _su_generators(form)
    for member in _rref_points(form.d, form.q):
        v = member[0]
        if evaluate(form, v) == 0:
            continue
        mats.append(mat_mul(F, _unitary_quasi_reflection(form, v, delta), comp))
    return _dedupe(mats)


def _check_envelope(table_key: str, d: int, q: int, what: str) -> None:
    allowed = CLASSICAL_ENVELOPE[table_key]
    if q not in allowed or d not in allowed[q]:
        raise ValueError(
            f"{what}: (d={d}, q={q}) is outside the construction envelope"
        )


def _matrix_group_action(
    sp_: FamilySpec,
    dom: Domain,
    mats: list[np.ndarray],
    expected: int | None,
) -> ConstructedAction:
    group = PermGroup(
        [matrix_action_on_domain(m, dom) for m in mats],
        len(dom),
        name=str(sp_),
    )
    labels = [
        "<" + ",".join("".join(str(int(x)) for x in row) for row in member) + ">"
        for member in dom.members
    ]
    return _finish(
        sp_, group, labels, expected, embed=lambda m: matrix_action_on_domain(m, dom)
    )


def classical_action(
    family: str, d: int, q: int, k: int = 1, sign: str | None = None
) -> ConstructedAction:
    """Projective classical group on a subspace domain; see FamilySpec
    for the orthogonal sign semantics."""
    if family == "LinearOnPk":
        _check_envelope("LinearOnPk", d, q, family)
        if not 1 <= k < d:
            raise ValueError(f"need 1 <= k < d, got k={k}")
        dom = enumerate_domain("P", k, d, q)
        expected = formulas.classical_order("PSL", d, q)
        return _matrix_group_action(
            spec(family, d=d, q=q, k=k), dom, _sl_generators(field_ops(q), d), expected
        )
    if family == "SpOnSk":
        _check_envelope("SpOnSk", d, q, family)
        form = make_form("symplectic", d, q)
        dom = enumerate_domain("S", k, form)
        expected = formulas.classical_order("PSp", d, q)
        return _matrix_group_action(
            spec(family, d=d, q=q, k=k), dom, _sp_generators(form), expected
        )
    if family in ("GOOnS1", "GOOnN1", "OmegaOnS1", "OmegaOnN1"):
        _check_envelope("Orthogonal", d, q, family)
        if sign not in ("+", "-", "o"):
            raise ValueError(f"orthogonal families need sign +, - or o, got {sign!r}")
        odd = d % 2 == 1
        form_sign = "o" if odd else sign
        if odd and family.endswith("S1") and sign != "o":
            raise ValueError("odd-dimension S1 takes sign 'o'")
        if odd and family.endswith("N1") and sign == "o":
            raise ValueError("odd-dimension N1 needs a class sign + or -")
        if not odd and sign == "o":
            raise ValueError("even dimension needs a form sign + or -")
        form = make_form("quadratic", d, q, form_sign)
        if family.endswith("S1"):
            dom = enumerate_domain("S", 1, form)
        else:
            # over odd q the nonsingular points split into two equal
            # value classes whatever the parity of d; for even d the
            # spec sign names the form type, so the acted-on class is
            # pinned to the square one
            class_sign = sign if odd else ("+" if q % 2 else None)
            dom = enumerate_domain("N", 1, form, sign=class_sign)
        go_tag = "GO" if odd else f"GO{form_sign}"
        scalar_kernel = 1 if q % 2 == 0 else 2
        go_expected = formulas.classical_order(go_tag, d, q) // scalar_kernel
        sp_ = spec(family, d=d, q=q, sign=sign)
        mats = _go_generators(form, full=False)
        go_group = PermGroup(
            [matrix_action_on_domain(m, dom) for m in mats], len(dom), name=str(sp_)
        )
        if go_group.order() != go_expected:
            mats = _go_generators(form, full=True)
            go_group = PermGroup(
                [matrix_action_on_domain(m, dom) for m in mats],
                len(dom),
                name=str(sp_),
            )
            if go_group.order() != go_expected:
                raise ConstructionError(
                    f"{sp_}: reflection closure order {go_group.order()} "
                    f"!= oracle {go_expected}"
                )
        labels = [
            "<" + ",".join("".join(str(int(x)) for x in row) for row in member) + ">"
            for member in dom.members
        ]
        if family.startswith("GO"):
            return _finish(
                sp_,
                go_group,
                labels,
                go_expected,
                embed=lambda m: matrix_action_on_domain(m, dom),
            )
        omega_tag = "Omega" if odd else f"Omega{form_sign}"
        omega_expected = formulas.classical_order(omega_tag, d, q)
        if q % 2 and not odd:
            # -I lies in the kernel of the subspace action; it belongs
            # to Omega(eps) exactly when 4 divides q^(d/2) - eps
            eps = 1 if form_sign == "+" else -1
            if (q ** (d // 2) - eps) % 4 == 0:
                omega_expected //= 2
        omega = go_group.derived_subgroup()
        if omega.order() != omega_expected:
            raise ConstructionError(
                f"{sp_}: derived subgroup order {omega.order()} "
                f"!= oracle {omega_expected}"
            )
        omega.name = str(sp_)
        return _finish(
            sp_,
            omega,
            labels,
            omega_expected,
            embed=lambda m: matrix_action_on_domain(m, dom),
        )
    if family in ("UnitaryOnS1", "UnitaryOnN1"):
        _check_envelope("Unitary", d, q, family)
        form = make_form("hermitian", d, q * q)
        kind = "S" if family.endswith("S1") else "N"
        dom = enumerate_domain(kind, 1, form)
        expected = formulas.classical_order("PSU", d, q)
        sp_ = spec(family, d=d, q=q)
        try:
            return _matrix_group_action(sp_, dom, _su_generators(form), expected)
        except ConstructionError:
            return _matrix_group_action(
                sp_, dom, _su_full_generators(form), expected
            )
    raise ValueError(f"unknown classical family {family!r}")


def sp_on_go_cosets(d: int, sign: str, q: int = 2) -> ConstructedAction:
    """Sp_d(2) on the quadratic forms of the given type that polarize
    to its symplectic form."""
    if q != 2:
        raise ValueError("the coset action is constructed over q = 2 only")
    _check_envelope("SpOnGOCosets", d, q, "SpOnGOCosets")
    form = make_form("symplectic", d, q)
    dom = enumerate_quadratic_coset_domain(form, sign)
    sp_ = spec("SpOnGOCosets", d=d, sign=sign)
    mats = _sp_generators(form)
    group = PermGroup(
        [matrix_action_on_domain(m, dom) for m in mats], len(dom), name=str(sp_)
    )
    labels = [
        "diag:" + "".join(str(int(x)) for x in member[0]) for member in dom.members
    ]
    expected = formulas.classical_order("Sp", d, q)
    return _finish(
        sp_, group, labels, expected, embed=lambda m: matrix_action_on_domain(m, dom)
    )


# -- wreath product action --------------------------------------------------


def wreath_product_action(inner: ConstructedAction, r: int) -> ConstructedAction:
    """The wreath product of the inner action with the symmetric group
    of the r coordinates, in product action on tuples."""
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    n0 = inner.n
    n = n0**r
    idx = np.arange(n, dtype=np.int64)
    digits = [(idx // n0**i) % n0 for i in range(r)]

    def coordinate_perm(g: np.ndarray, coord: int) -> np.ndarray:
        g64 = g.astype(np.int64)
        shifted = idx + (g64[digits[coord]] - digits[coord]) * n0**coord
        return as_perm(shifted.astype(np.int32))

    def top_perm(t: np.ndarray) -> np.ndarray:
        out = np.zeros(n, dtype=np.int64)
        for i in range(r):
            out += digits[i] * n0 ** int(t[i])
        return as_perm(out.astype(np.int32))

    gens = [coordinate_perm(g, 0) for g in inner.group.generators]
    for t in _sym_generators(r):
        gens.append(top_perm(as_perm(t, r)))
    sp_ = spec("WreathProduct", inner=inner.spec, r=r)
    group = PermGroup(gens, n, name=str(sp_))
    expected = inner.group.order() ** r * math.factorial(r)
    labels = [
        "(" + ";".join(inner.labels[int(dg[pos])] for dg in digits) + ")"
        for pos in range(n)
    ]
    return _finish(
        sp_, group, labels, expected, embed=lambda g: coordinate_perm(g, 0)
    )


# -- Mathieu ----------------------------------------------------------------


def mathieu24() -> ConstructedAction:
    """The Mathieu group of degree 24, loaded from the embedded data
    file (checksum plus order revalidated on every load)."""
    raw = (
        resources.files("primbase")
        .joinpath("data/mathieu24.txt")
        .read_text(encoding="ascii")
    )
    lines = raw.strip("\n").split("\n")
    if len(lines) < 3 or not lines[-1].startswith("sha256 "):
        raise ConstructionError("mathieu data file is malformed")
    body = "\n".join(lines[:-1]) + "\n"
    digest = hashlib.sha256(body.encode("ascii")).hexdigest()
    if digest != lines[-1].split()[1]:
        raise ConstructionError("mathieu data file failed its checksum")
    degree = int(lines[0])
    gens = [
        as_perm([int(x) for x in line.split()], degree) for line in lines[1:-1]
    ]
    sp_ = spec("Mathieu24")
    group = PermGroup(gens, degree, name=str(sp_))
    labels = [str(i) for i in range(23)] + ["inf"]
    return _finish(sp_, group, labels, 244823040)


# -- dispatch ----------------------------------------------------------------


def build(sp_: FamilySpec | str, degree_cap: int = DEGREE_CAP) -> ConstructedAction:
    """Construct the action a spec describes, refusing degrees above
    the cap before doing any work."""
    if isinstance(sp_, str):
        sp_ = parse_spec(sp_)
    n = predicted_degree(sp_)
    if n > degree_cap:
        raise ValueError(f"{sp_}: degree {n} exceeds the cap {degree_cap}")
    f = sp_.family
    if f == "SymSubsets":
        return sym_on_subsets(sp_["m"], sp_["k"])
    if f == "AltSubsets":
        return alt_on_subsets(sp_["m"], sp_["k"])
    if f == "SymPartitions":
        return sym_on_partitions(sp_["a"], sp_["b"])
    if f == "Affine":
        return affine(sp_["d"], sp_["q"])
    if f in ("LinearOnPk", "SpOnSk"):
        return classical_action(f, sp_["d"], sp_["q"], k=sp_.get("k", 1))
    if f in ("GOOnS1", "GOOnN1", "OmegaOnS1", "OmegaOnN1"):
        return classical_action(f, sp_["d"], sp_["q"], sign=sp_["sign"])
    if f in ("UnitaryOnS1", "UnitaryOnN1"):
        return classical_action(f, sp_["d"], sp_["q"])
    if f == "SpOnGOCosets":
        return sp_on_go_cosets(sp_["d"], sp_["sign"])
    if f == "WreathProduct":
        inner = build(sp_.inner, degree_cap=degree_cap)
        return wreath_product_action(inner, sp_["r"])
    if f == "Mathieu24":
        return mathieu24()
    raise ValueError(f"unknown family {f!r}")
