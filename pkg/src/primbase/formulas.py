"""Closed-form formulas: action degrees, classical group orders, exact
partition base sizes, bound functions, and inequality-chain values.

Integer quantities (degrees, orders, binomials) use exact big-integer
arithmetic throughout.  Real-valued bounds use double precision with
logarithms in base 2; callers that compare bounds against integers are
expected to apply their own slack policy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "BoundBracket",
    "BzValue",
    "binom_lower_bound_holds",
    "bound",
    "bz",
    "chain_diagonal",
    "chain_f_partition",
    "chain_largebase",
    "chain_largebase_partials",
    "chain_quadric",
    "chain_quadric_min",
    "classical_order",
    "degree",
    "factorial_lower_bound_holds",
    "gaussian_binomial",
    "largebase_mu_bound",
    "product_action_check",
]

LOG2_60 = math.log2(60)


def gaussian_binomial(d: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of a d-dimensional space over
    a field with q elements, as an exact integer."""
    if not 0 <= k <= d:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    value, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("gaussian binomial did not divide evenly")
    return value


def _exact_div(num: int, den: int, what: str) -> int:
    value, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"{what} is not an integer")
    return value


# ---------------------------------------------------------------------------
# Degrees


def _subsets_degree(m: int, k: int) -> int:
    if not (m >= 3 and 1 <= 2 * k <= m):
        raise ValueError(f"subset action needs m >= 3 and 1 <= k <= m/2, got ({m},{k})")
    return math.comb(m, k)


def _partitions_degree(a: int, b: int) -> int:
    if a < 2 or b < 2:
        raise ValueError(f"partition action needs a,b >= 2, got ({a},{b})")
    return _exact_div(
        math.factorial(a * b),
        math.factorial(a) ** b * math.factorial(b),
        "partition degree",
    )


def _projective_points(d: int, q: int) -> int:
    return _exact_div(q**d - 1, q - 1, "projective point count")


def _sp_maximal_isotropic(d: int, q: int) -> int:
    value = 1
    for i in range(1, d // 2 + 1):
        value *= q**i + 1
    return value


def _orthogonal_even_singular(d: int, q: int, sign: str) -> int:
    m = d // 2
    if sign == "+":
        return _exact_div((q**m - 1) * (q ** (m - 1) + 1), q - 1, "singular count")
    return _exact_div((q**m + 1) * (q ** (m - 1) - 1), q - 1, "singular count")


def _orthogonal_even_nonsingular(d: int, q: int, sign: str) -> int:
    m = d // 2
    eps = 1 if sign == "+" else -1
    return _exact_div(
        q ** (m - 1) * (q**m - eps), math.gcd(2, q - 1), "nonsingular count"
    )


def _orthogonal_odd_singular(d: int, q: int) -> int:
    return _exact_div(q ** (d - 1) - 1, q - 1, "singular count")


def _orthogonal_odd_nonsingular(d: int, q: int, cls: str) -> int:
    m = (d - 1) // 2
    eps = 1 if cls == "+" else -1
    return _exact_div(q**m * (q**m + eps), 2, "nonsingular class count")


def _unitary_isotropic(d: int, q: int) -> int:
    num = (q ** (d - 1) - (-1) ** (d - 1)) * (q**d - (-1) ** d)
    return _exact_div(num, q**2 - 1, "isotropic count")


def _unitary_nonisotropic(d: int, q: int) -> int:
    return _exact_div(q ** (d - 1) * (q**d - (-1) ** d), q + 1, "nonisotropic count")


def _unitary_s3_degree(q: int) -> int:
    return (q + 1) * (q**3 + 1) * (q**5 + 1)


def _sp_go_cosets_degree(d: int, sign: str) -> int:
    m = d // 2
    eps = 1 if sign == "+" else -1
    return 2 ** (m - 1) * (2**m + eps)


def _pairs_complement_degree(d: int, k: int, q: int) -> int:
    """Unordered pairs {U, W} with dim U = k and U + W the whole space,
    W of complementary dimension, for k strictly below d/2."""
    if not 1 <= 2 * k < d:
        raise ValueError(f"complement-pair domain needs 1 <= k < d/2, got ({d},{k})")
    return q ** (k * (d - k)) * gaussian_binomial(d, k, q)


def _pairs_flag_degree(d: int, k: int, q: int) -> int:
    """Unordered pairs {U, W} with dim U = k, dim W = d-k, U inside W,
    for k strictly below d/2."""
    if not 1 <= 2 * k < d:
        raise ValueError(f"flag-pair domain needs 1 <= k < d/2, got ({d},{k})")
    num = 1
    for i in range(d - 2 * k + 1, d + 1):
        num *= q**i - 1
    den = 1
    for i in range(1, k + 1):
        den *= (q**i - 1) ** 2
    return _exact_div(num, den, "flag-pair degree")


def _triality_degree(q: int) -> int:
    c = 2 if q % 2 == 1 else 1
    total = (q + 1) ** 3 * (q**2 + 1) ** 2 * _exact_div(q**6 - 1, q**2 - 1, "quotient")
    return _exact_div(total, c, "triality degree")


def degree(family: str, **params: object) -> int:
    """Exact degree of the named action.

    Families and their parameters:

    - ``SymSubsets`` / ``AltSubsets``: ``m``, ``k`` -> C(m, k)
    - ``SymPartitions``: ``a``, ``b`` -> (ab)!/(a!^b b!)
    - ``Affine``: ``d``, ``q`` -> q^d
    - ``PSL``: ``d``, ``q``, ``k`` -> Gaussian binomial [d, k]_q
    - ``Sp``: ``d``, ``q``, ``k``; k=1 gives (q^d-1)/(q-1), k=d/2 gives
      prod(q^i+1).  The k=1 degree is the quotient form; one source
      displays it as a product, which is dimensionally inconsistent, so
      the quotient is implemented.
    - ``GO``: ``d``, ``q``, ``sign`` in {+,-,o}, ``domain`` in
      {S1, N1, N1+, N1-}; sign "o" means odd dimension (then N1 carries
      a class tag), otherwise even dimension with the given form type.
    - ``SU``: ``d``, ``q``, ``domain`` in {S1, N1, S3}; q is the
      hermitian base-field parameter (matrices live over GF(q^2));
      S3 only at d=6.
    - ``SpGOCosets``: ``d``, ``sign`` -> 2^(d/2-1)(2^(d/2)+eps), q=2.
    - ``Wreath``: ``inner_degree``, ``r`` -> inner_degree^r.
    - ``Mathieu24``: no parameters -> 24.
    - ``PairsComplement`` / ``PairsFlag``: ``d``, ``k``, ``q``
      (formula-only domains of subspace pairs).
    - ``Triality``: ``q`` (formula-only coset count).
    """
    p = dict(params)

    def geti(name: str) -> int:
        try:
            value = p.pop(name)
        except KeyError:
            raise ValueError(f"family {family!r} requires parameter {name!r}") from None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"parameter {name!r} must be an integer, got {value!r}")
        return value

    def gets(name: str, allowed: tuple[str, ...]) -> str:
        try:
            value = p.pop(name)
        except KeyError:
            raise ValueError(f"family {family!r} requires parameter {name!r}") from None
        if value not in allowed:
            raise ValueError(f"parameter {name!r} must be one of {allowed}, got {value!r}")
        return str(value)

    def done(value: int) -> int:
        if p:
            raise ValueError(f"unexpected parameters for {family!r}: {sorted(p)}")
        if value <= 0:
            raise ArithmeticError("degree must be positive")
        return value

    if family in ("SymSubsets", "AltSubsets"):
        return done(_subsets_degree(geti("m"), geti("k")))
    if family == "SymPartitions":
        return done(_partitions_degree(geti("a"), geti("b")))
    if family == "Affine":
        d, q = geti("d"), geti("q")
        if d < 1 or q < 2:
            raise ValueError(f"affine action needs d >= 1, q >= 2, got ({d},{q})")
        return done(q**d)
    if family == "PSL":
        d, q, k = geti("d"), geti("q"), geti("k")
        if not 1 <= k < d:
            raise ValueError(f"subspace dimension out of range: k={k}, d={d}")
        return done(gaussian_binomial(d, k, q))
    if family == "Sp":
        d, q, k = geti("d"), geti("q"), geti("k")
        if d < 2 or d % 2:
            raise ValueError(f"symplectic dimension must be even and >= 2, got {d}")
        if k == 1:
            return done(_projective_points(d, q))
        if 2 * k == d:
            return done(_sp_maximal_isotropic(d, q))
        raise ValueError(f"no closed form for symplectic k={k} at d={d}")
    if family == "GO":
        d, q = geti("d"), geti("q")
        sign = gets("sign", ("+", "-", "o"))
        if sign == "o":
            if d % 2 == 0 or d < 3:
                raise ValueError(f"sign 'o' needs odd d >= 3, got {d}")
            if q % 2 == 0:
                raise ValueError("odd-dimensional forms need odd q")
            domain = gets("domain", ("S1", "N1+", "N1-"))
            if domain == "S1":
                return done(_orthogonal_odd_singular(d, q))
            return done(_orthogonal_odd_nonsingular(d, q, domain[-1]))
        if d % 2 or d < 4:
            raise ValueError(f"signed forms need even d >= 4, got {d}")
        domain = gets("domain", ("S1", "N1"))
        if domain == "S1":
            return done(_orthogonal_even_singular(d, q, sign))
        return done(_orthogonal_even_nonsingular(d, q, sign))
    if family == "SU":
        d, q = geti("d"), geti("q")
        domain = gets("domain", ("S1", "N1", "S3"))
        if domain == "S1":
            return done(_unitary_isotropic(d, q))
        if domain == "N1":
            return done(_unitary_nonisotropic(d, q))
        if d != 6:
            raise ValueError("the S3 closed form applies only at d=6")
        return done(_unitary_s3_degree(q))
    if family == "SpGOCosets":
        d = geti("d")
        sign = gets("sign", ("+", "-"))
        if d % 2 or d < 4:
            raise ValueError(f"coset action needs even d >= 4, got {d}")
        return done(_sp_go_cosets_degree(d, sign))
    if family == "Wreath":
        inner, r = geti("inner_degree"), geti("r")
        if inner < 2 or r < 2:
            raise ValueError("product action needs inner degree >= 2 and r >= 2")
        return done(inner**r)
    if family == "Mathieu24":
        return done(24)
    if family == "PairsComplement":
        return done(_pairs_complement_degree(geti("d"), geti("k"), geti("q")))
    if family == "PairsFlag":
        return done(_pairs_flag_degree(geti("d"), geti("k"), geti("q")))
    if family == "Triality":
        return done(_triality_degree(geti("q")))
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Exact base sizes of partition actions


class BzValue(NamedTuple):
    """Base size of the partition action with parameters (a, b): the
    exact value when known, otherwise an upper bound flagged inexact."""

    value: int
    exact: bool


_BZ_INEXACT = frozenset({(3, 6), (3, 7), (4, 7), (7, 3)})


def bz(a: int, b: int) -> BzValue:
    """Base size of the symmetric group of degree a*b acting on the
    partitions into b blocks of size a.

    Piecewise exact values with one family of flagged upper bounds:
    pairs in {(3,6),(3,7),(4,7),(7,3)} and pairs with b = a+2 get the
    bound 4 (flagged inexact); everything else is exact.  (2,2) is
    rejected: the action has a kernel, so no base-size table entry
    applies.  (3,2) is pinned to 4, verified by exhaustive search over
    all 720 images on the 10 partitions.
    """
    if a < 2 or b < 2:
        raise ValueError(f"partition parameters need a,b >= 2, got ({a},{b})")
    if (a, b) == (2, 2):
        raise ValueError("the (2,2) partition action is not faithful")
    if (a, b) == (3, 2):
        return BzValue(4, True)
    if (a, b) == (2, 3):
        return BzValue(4, True)
    if a == 2 and b >= 4:
        return BzValue(3, True)
    if (a, b) == (4, 2):
        return BzValue(5, True)
    if a > 4 and b == 2:
        return BzValue(math.ceil(math.log2(a + 3)) + 1, True)
    if (a, b) in _BZ_INEXACT or b == a + 2:
        return BzValue(4, False)
    return BzValue(math.ceil(math.log(a + 2, b)) + 1, True)


# ---------------------------------------------------------------------------
# Bound functions


class BoundBracket(NamedTuple):
    lower: float
    upper: float


def bound(name: str, **params: float) -> float | BoundBracket:
    """Real-valued base-size bounds, logarithms in base 2.

    - ``thm2``: n -> log2(n)/2 + 6
    - ``product``: n -> n*log2(n)
    - ``mrd``: n -> 2 + log2(n)
    - ``liebeck``: n -> 9*log2(n)
    - ``nonstandard7``: constant 7
    - ``dk_plus_c``: d, k, c -> d/k + c
    - ``bow10_wreath``: k, n, b_inner ->
      ceil(ceil(log2 k)/floor(log2 n)) + b_inner
    - ``largebase_hlm``: order, n -> 2*log2(order)/log2(n) + 22
    - ``diag``: k, order0 -> two-valued bracket
      ceil(log2 k / log2 order0) + {1, 2}
    """
    p = dict(params)

    def get(key: str) -> float:
        try:
            return float(p.pop(key))  # type: ignore[arg-type]
        except KeyError:
            raise ValueError(f"bound {name!r} requires parameter {key!r}") from None

    def done(value: float | BoundBracket) -> float | BoundBracket:
        if p:
            raise ValueError(f"unexpected parameters for {name!r}: {sorted(p)}")
        return value

    if name == "thm2":
        n = get("n")
        if n < 2:
            raise ValueError("degree must be at least 2")
        return done(math.log2(n) / 2 + 6)
    if name == "product":
        n = get("n")
        if n < 2:
            raise ValueError("degree must be at least 2")
        return done(n * math.log2(n))
    if name == "mrd":
        return done(2 + math.log2(get("n")))
    if name == "liebeck":
        return done(9 * math.log2(get("n")))
    if name == "nonstandard7":
        return done(7.0)
    if name == "dk_plus_c":
        d, k, c = get("d"), get("k"), get("c")
        if k <= 0:
            raise ValueError("k must be positive")
        return done(d / k + c)
    if name == "bow10_wreath":
        k, n, b_inner = get("k"), get("n"), get("b_inner")
        if k < 2 or n < 2:
            raise ValueError("need k >= 2 and n >= 2")
        return done(
            math.ceil(math.ceil(math.log2(k)) / math.floor(math.log2(n))) + b_inner
        )
    if name == "largebase_hlm":
        order, n = get("order"), get("n")
        if order < 2 or n < 2:
            raise ValueError("need order >= 2 and n >= 2")
        return done(2 * math.log2(order) / math.log2(n) + 22)
    if name == "diag":
        k, order0 = get("k"), get("order0")
        if k < 2 or order0 < 2:
            raise ValueError("need k >= 2 and order0 >= 2")
        core = math.ceil(math.log2(k) / math.log2(order0))
        return done(BoundBracket(core + 1, core + 2))
    raise ValueError(f"unknown bound {name!r}")


# ---------------------------------------------------------------------------
# Inequality-chain functions


def chain_f_partition(a: int) -> float:
    """Margin function for the two-block partition reduction:
    (4a*log2(4/3) - log2(10!))/2 + 6 - ceil(log4(a+2)) - 1.

    Increasing in a; changes sign between a=9 and a=10.
    """
    if a < 2:
        raise ValueError("need a >= 2")
    lead = (4 * a * math.log2(4 / 3) - math.log2(math.factorial(10))) / 2
    return lead + 6 - math.ceil(math.log(a + 2, 4)) - 1


def chain_quadric(d: int, k: int) -> float:
    """Quadratic exponent lower bound -3k^2 + 2kd - 2k on 3 <= k < d/2."""
    if not (k >= 3 and 2 * k < d):
        raise ValueError(f"need 3 <= k < d/2, got ({d},{k})")
    return float(-3 * k * k + 2 * k * d - 2 * k)


def chain_quadric_min(d: int) -> tuple[int, float]:
    """Minimum of chain_quadric(d, .) over its integer domain."""
    ks = [k for k in range(3, (d + 1) // 2) if 2 * k < d]
    if not ks:
        raise ValueError(f"empty domain: no k with 3 <= k < d/2 at d={d}")
    best = min(ks, key=lambda k: chain_quadric(d, k))
    return best, chain_quadric(d, best)


def chain_diagonal(k: int) -> float:
    """Diagonal-type margin 2*log2(k) - (k-1)*log2(60)^2 - 6*log2(60);
    negative and decreasing for k >= 3."""
    if k < 3:
        raise ValueError("need k >= 3")
    return 2 * math.log2(k) - (k - 1) * LOG2_60**2 - 6 * LOG2_60


def _largebase_domain(m: int, r: int, k: int) -> None:
    if not (m >= 20 and r >= 40 and 1 <= 2 * k <= m):
        raise ValueError(f"outside domain m >= 20, r >= 40, 1 <= k <= m/2: ({m},{r},{k})")


def chain_largebase(m: int, r: int, k: int) -> float:
    """Large-base margin (rk/72)*log2(m/k)^2 - log2(m) - log2(r)/m on
    the domain m >= 20, r >= 40, 1 <= k <= m/2."""
    _largebase_domain(m, r, k)
    return (r * k / 72) * math.log2(m / k) ** 2 - math.log2(m) - math.log2(r) / m


def chain_largebase_partials(m: int, r: int, k: int) -> tuple[float, float, float]:
    """Forward differences of chain_largebase in m, r and k.  Every
    shifted point must stay inside the domain."""
    base = chain_largebase(m, r, k)
    return (
        chain_largebase(m + 1, r, k) - base,
        chain_largebase(m, r + 1, k) - base,
        chain_largebase(m, r, k + 1) - base,
    )


def product_action_check(k: int, n: int) -> bool:
    """Whether k - 5 <= (k - 2)*log2(n) holds."""
    if k < 2 or n < 2:
        raise ValueError("need k >= 2 and n >= 2")
    return k - 5 <= (k - 2) * math.log2(n) + 1e-9


def largebase_mu_bound(m: int, k: int, r: int) -> Fraction:
    """Exact value of 3k(m-k)/(m(m-1)) * C(m,k)^r."""
    if not (m >= 3 and 1 <= 2 * k <= m and r >= 1):
        raise ValueError(f"need m >= 3, 1 <= k <= m/2, r >= 1, got ({m},{k},{r})")
    return Fraction(3 * k * (m - k), m * (m - 1)) * math.comb(m, k) ** r


def factorial_lower_bound_holds(x: int) -> bool:
    """Whether x! >= (x/3)^x, checked in exact integers."""
    if x < 1:
        raise ValueError("need x >= 1")
    return math.factorial(x) * 3**x >= x**x


def binom_lower_bound_holds(m: int, k: int) -> bool:
    """Whether C(m,k) >= (m/k)^k, checked in exact integers."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got ({m},{k})")
    return math.comb(m, k) * k**k >= m**k


# ---------------------------------------------------------------------------
# Classical group orders


def _gl_order(d: int, q: int) -> int:
    value = 1
    for i in range(d):
        value *= q**d - q**i
    return value


def _sp_order(d: int, q: int) -> int:
    m = d // 2
    value = q ** (m * m)
    for i in range(1, m + 1):
        value *= q ** (2 * i) - 1
    return value


def _go_even_order(d: int, q: int, eps: int) -> int:
    m = d // 2
    value = 2 * q ** (m * (m - 1)) * (q**m - eps)
    for i in range(1, m):
        value *= q ** (2 * i) - 1
    return value


def _go_odd_order(d: int, q: int) -> int:
    m = (d - 1) // 2
    value = 2 * q ** (m * m)
    for i in range(1, m + 1):
        value *= q ** (2 * i) - 1
    return value


def _su_order(d: int, q: int) -> int:
    value = q ** (d * (d - 1) // 2)
    for i in range(2, d + 1):
        value *= q**i - (-1) ** i
    return value


def classical_order(family: str, d: int, q: int) -> int:
    """Exact order of the named matrix group of dimension d over the
    field with q elements (for unitary families q is the hermitian
    base-field parameter; matrices live over GF(q^2)).

    Families: GL, SL, PGL, PSL, AGL, Sp, PSp, GO+, GO-, GO, Omega+,
    Omega-, Omega, GU, SU, PGU, PSU.
    """
    if d < 1 or q < 2:
        raise ValueError(f"need d >= 1 and q >= 2, got ({d},{q})")
    if family == "GL":
        return _gl_order(d, q)
    if family == "SL":
        return _exact_div(_gl_order(d, q), q - 1, "order")
    if family == "PGL":
        return _exact_div(_gl_order(d, q), q - 1, "order")
    if family == "PSL":
        return _exact_div(_gl_order(d, q), (q - 1) * math.gcd(d, q - 1), "order")
    if family == "AGL":
        return q**d * _gl_order(d, q)
    if family in ("Sp", "PSp"):
        if d % 2 or d < 2:
            raise ValueError(f"symplectic dimension must be even, got {d}")
        value = _sp_order(d, q)
        if family == "PSp":
            value = _exact_div(value, math.gcd(2, q - 1), "order")
        return value
    if family in ("GO+", "GO-", "Omega+", "Omega-"):
        if d % 2 or d < 4:
            raise ValueError(f"signed orthogonal dimension must be even >= 4, got {d}")
        eps = 1 if family.endswith("+") else -1
        value = _go_even_order(d, q, eps)
        if family.startswith("Omega"):
            value = _exact_div(value, 2 if q % 2 == 0 else 4, "order")
        return value
    if family in ("GO", "Omega"):
        if d % 2 == 0 or d < 3:
            raise ValueError(f"unsigned orthogonal dimension must be odd >= 3, got {d}")
        if q % 2 == 0:
            raise ValueError("odd-dimensional orthogonal groups need odd q")
        value = _go_odd_order(d, q)
        if family == "Omega":
            value = _exact_div(value, 4, "order")
        return value
    if family in ("SU", "GU", "PGU", "PSU"):
        if d < 2:
            raise ValueError(f"unitary dimension must be at least 2, got {d}")
        su = _su_order(d, q)
        if family == "SU":
            return su
        if family == "GU":
            return su * (q + 1)
        if family == "PGU":
            return su
        return _exact_div(su, math.gcd(d, q + 1), "order")
    raise ValueError(f"unknown classical family {family!r}")
