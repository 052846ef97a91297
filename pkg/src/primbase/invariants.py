"""Base size and minimal degree.

The two invariants the package exists to compute: b(G), the length of a
shortest point sequence with trivial pointwise stabilizer, and mu(G),
the smallest number of points moved by a non-identity element.  Exact
values come from bounded searches (iterative deepening on the base
length, full element enumeration for the minimal degree); when a budget
runs out the search degrades to explicit bounds, never to a silently
wrong answer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import permutation as perm
from .errors import BudgetExceeded
from .fields import field_ops
from .fixscan import max_fixed_points
from .forms import all_vectors, make_form, reflection
from .group import PermGroup
from .linalg import DTYPE, mat_mul, rank, rref

DEFAULT_BASE_BUDGET = 10**8
DEFAULT_MU_ORDER_CAP = 10**9


@dataclass(frozen=True, eq=False)
class InvariantReport:
    """Everything one group's invariant computation produced.

    Bound fields are always present; exact fields are None when the
    corresponding search was skipped or ran out of budget, in which
    case (b_lower, b_greedy_upper) is the surviving bracket.
    """

    n: int
    order: int
    transitive: bool
    b_lower: int
    b_greedy_upper: int
    b_exact: int | None = None
    base_witness: tuple[int, ...] | None = None
    mu_exact: int | None = None
    mu_witness_upper: int | None = None
    mu_witness: np.ndarray | None = field(default=None, repr=False)
    elapsed_base: float = field(default=0.0, repr=False)
    elapsed_mu: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.b_exact is not None:
            if not self.b_lower <= self.b_exact <= self.b_greedy_upper:
                raise AssertionError(
                    f"base bounds violated: {self.b_lower} <= "
                    f"{self.b_exact} <= {self.b_greedy_upper}"
                )
        elif self.b_lower > self.b_greedy_upper:
            raise AssertionError(
                f"base bracket empty: [{self.b_lower}, {self.b_greedy_upper}]"
            )
        if (
            self.mu_exact is not None
            and self.mu_witness_upper is not None
            and self.mu_exact > self.mu_witness_upper
        ):
            raise AssertionError(
                f"mu {self.mu_exact} exceeds its witness bound "
                f"{self.mu_witness_upper}"
            )
        if (
            self.transitive
            and self.b_exact is not None
            and self.mu_exact is not None
            and self.n > self.b_exact * self.mu_exact
        ):
            raise AssertionError(
                f"n <= b*mu violated: {self.n} > "
                f"{self.b_exact} * {self.mu_exact}"
            )

    @property
    def b_value(self) -> int:
        """Best available base size: the exact value or the upper bound."""
        return self.b_exact if self.b_exact is not None else self.b_greedy_upper

    @property
    def mu_value(self) -> int | None:
        """Best available minimal degree, None when neither path ran."""
        return self.mu_exact if self.mu_exact is not None else self.mu_witness_upper


def base_size_lower(n: int, order: int) -> int:
    """Smallest b with n**b >= order.

    Each base point divides the order by at most n (the index of a point
    stabilizer), so no base can be shorter.  Integer arithmetic keeps the
    ceiling of log(order)/log(n) exact.
    """
    if order <= 1:
        return 0
    if n < 2:
        raise ValueError("a nontrivial group needs degree at least 2")
    b, reach = 0, 1
    while reach < order:
        reach *= n
        b += 1
    return b


def base_size_greedy(g: PermGroup) -> tuple[int, tuple[int, ...]]:
    """Greedy upper bound: always grab a point from a largest orbit.

    Ties go to the orbit with the smallest point, and the chosen point is
    the smallest in its orbit, so the result is deterministic.
    """
    base: list[int] = []
    current = g
    while current.order() > 1:
        orbits = [o for o in current.orbits() if len(o) > 1]
        best = max(orbits, key=lambda o: (len(o), -o[0]))
        base.append(best[0])
        current = g.pointwise_stabilizer(tuple(base))
    return len(base), tuple(base)


def _depth_limited(group: PermGroup, prefix: tuple[int, ...], depth: int, state: dict) -> tuple[int, ...] | None:
    orbits = [o for o in group.orbits() if len(o) > 1]
    largest = max(len(o) for o in orbits)
    # each further point divides the order by at most the largest orbit
    # size, and subgroup orbits only refine, so short of that there is
    # no point descending
    if largest ** (depth - len(prefix)) < group.order():
        return None
    for orbit in orbits:
        if state["left"] <= 0:
            raise BudgetExceeded(
                "base search budget exhausted",
                lower=depth,
                upper=state["upper"],
            )
        state["left"] -= 1
        extended = prefix + (orbit[0],)
        sub = group.pointwise_stabilizer((orbit[0],))
        if sub.order() == 1:
            return extended
        if len(extended) < depth:
            found = _depth_limited(sub, extended, depth, state)
            if found is not None:
                return found
    return None


def base_size_exact(g: PermGroup, budget: int = DEFAULT_BASE_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Minimum base size with a witness base, by iterative deepening.

    At every level the candidate points are one representative per
    nontrivial orbit of the current stabilizer (the smallest point, in
    orbit order): conjugating a base moves its next point to the orbit
    representative without changing the length, so the restriction loses
    no solutions.  Each pointwise stabilizer built costs one unit of
    budget; exhaustion raises BudgetExceeded carrying the bracketing
    bounds established so far.
    """
    order = g.order()
    if order == 1:
        return 0, ()
    lo = base_size_lower(g.degree, order)
    hi, greedy_base = base_size_greedy(g)
    state = {"left": int(budget), "upper": hi}
    for depth in range(lo, hi):
        found = _depth_limited(g, (), depth, state)
        if found is not None:
            return depth, found
    return hi, greedy_base


def minimal_degree_exact(
    g: PermGroup,
    order_cap: int = DEFAULT_MU_ORDER_CAP,
    threads=None,
    kernel=None,
) -> tuple[int, np.ndarray]:
    """mu(G) = degree - max fix count, with a witness element attaining it.

    Every element is enumerated through the stabilizer-chain transversals
    (with power-reduction to prime order inside the scan), so the order
    cap is what keeps the runtime sane: around 10**8 elements is minutes
    of work, and the default cap refuses anything past 10**9.
    """
    chain = g.build_chain()
    order = chain.order()
    if order <= 1:
        raise ValueError("the trivial group has no minimal degree")
    if order > order_cap:
        raise BudgetExceeded(
            f"group order {order} is above the enumeration cap {order_cap}",
            lower=2,
            upper=g.degree,
        )
    best, witness, _ = max_fixed_points(chain, threads=threads, kernel=kernel)
    return g.degree - best, witness


def has_witness_recipe(action) -> bool:
    """Whether minimal_degree_witness knows a recipe for the action."""
    sp = action.spec
    f = sp.family
    if f in ("SymSubsets", "AltSubsets"):
        return True
    if f in ("GOOnS1", "OmegaOnS1"):
        return sp["q"] == 2 and sp["sign"] == "-"
    if f == "WreathProduct":
        return True
    if f == "Affine":
        return sp["q"] == 2 and sp["d"] >= 2 and action.expected_order is not None
    return False


def minimal_degree_witness(action) -> tuple[int, np.ndarray]:
    """Support of a documented small-support element of the action.

    The count is an upper bound for mu and is asserted against the
    closed form for the family before being returned.  Families without
    a recipe raise ValueError; has_witness_recipe tells them apart.
    """
    sp = action.spec
    f = sp.family
    if f in ("SymSubsets", "AltSubsets"):
        m, k = sp["m"], sp["k"]
        witness = action.embed(perm.from_cycles(m, [(0, 1, 2)]))
        # a 3-cycle moves exactly the k-subsets meeting {0,1,2} in one point
        expected = 3 * math.comb(m - 2, k - 1)
    elif f in ("GOOnS1", "OmegaOnS1") and sp["q"] == 2 and sp["sign"] == "-":
        d = sp["d"]
        form = make_form("quadratic", d, 2, sign="-")
        e0 = np.zeros(d, dtype=DTYPE)
        e1 = np.zeros(d, dtype=DTYPE)
        e0[0] = 1
        e1[1] = 1
        witness = action.embed(
            mat_mul(form.F, reflection(form, e0), reflection(form, e1))
        )
        # the product fixes the singular points of the hyperbolic
        # (d-2)-space perpendicular to the anisotropic plane <e0, e1>
        expected = 3 * (2 ** (d - 3) - 2 ** (d // 2 - 2))
    elif f == "WreathProduct":
        from .families import build

        inner = build(sp.inner)
        mu0, h = minimal_degree_exact(inner.group)
        witness = action.embed(h)
        expected = mu0 * inner.n ** (sp["r"] - 1)
    elif f == "Affine" and sp["q"] == 2 and action.expected_order is not None:
        d = sp["d"]
        if d < 2:
            raise ValueError("the affine witness needs a transvection, so d >= 2")
        shear = np.eye(d, dtype=DTYPE)
        shear[0, 1] = 1
        witness = action.embed(None, shear)
        expected = 2 ** (d - 1)
    else:
        raise ValueError(f"no witness recipe for {sp}")
    count = int(perm.support(witness).size)
    if count != expected:
        raise AssertionError(
            f"{sp}: witness support {count} != closed form {expected}"
        )
    return count, witness


def affine_mu_structure(action, threads=None):
    """(t, fix-space basis, base vectors) for a q=2 affine action.

    t is the largest fixed-space dimension over the nontrivial elements
    of the linear part H, so mu(H) = 2**d - 2**t; a basis of the best
    fixed space plus any vector outside it is a base for H, which is
    verified before returning.
    """
    sp = action.spec
    if sp.family != "Affine" or sp["q"] != 2:
        raise ValueError("fixed-space analysis needs a q=2 affine action")
    d = sp["d"]
    stab = action.group.pointwise_stabilizer((0,))
    if stab.order() == 1:
        raise ValueError("the linear part is trivial")
    F = field_ops(2)
    vecs = all_vectors(d, 2)
    if action.expected_order is not None:
        # full AGL: a transvection fixes a hyperplane, and only the
        # identity fixes all of the space
        shear = np.eye(d, dtype=DTYPE)
        shear[0, 1] = 1
        witness = action.embed(None, shear)
    else:
        _, witness, _ = max_fixed_points(stab.build_chain(), threads=threads)
    fixed = vecs[perm.fixed_points(witness)]
    reduced, pivots = rref(F, fixed)
    basis = reduced[: len(pivots)]
    t = len(pivots)
    if 2**t != len(fixed):
        raise AssertionError("fixed vectors of the witness are not a subspace")
    outside = next(v for v in vecs if rank(F, np.vstack([basis, v])) > t)
    base_vectors = np.vstack([basis, outside]).astype(DTYPE)
    powers = (2 ** np.arange(d)).astype(np.int64)
    points = tuple(int((v.astype(np.int64) * powers).sum()) for v in base_vectors)
    if stab.pointwise_stabilizer(points).order() != 1:
        raise AssertionError("constructed vectors are not a base for the linear part")
    return t, basis, base_vectors


def compute_invariants(
    action_or_group,
    *,
    exact_base: bool = True,
    exact_mu: bool = True,
    base_budget: int = DEFAULT_BASE_BUDGET,
    mu_order_cap: int = DEFAULT_MU_ORDER_CAP,
    threads=None,
) -> InvariantReport:
    """Run the full invariant battery on a group or constructed action.

    Exact searches can be switched off (or priced out by their budgets),
    in which case the report keeps the surviving bounds; the family
    witness recipe contributes mu_witness_upper whenever one applies.
    """
    action = action_or_group if hasattr(action_or_group, "group") else None
    g = action.group if action is not None else action_or_group
    order = g.order()
    n = g.degree
    t0 = time.monotonic()
    b_lower = base_size_lower(n, order)
    b_greedy, greedy_base = base_size_greedy(g)
    b_exact = None
    base_witness = None
    if exact_base:
        try:
            b_exact, base_witness = base_size_exact(g, budget=base_budget)
        except BudgetExceeded as exc:
            b_lower = max(b_lower, exc.lower)
    elapsed_base = time.monotonic() - t0
    t0 = time.monotonic()
    mu_exact = None
    mu_witness_upper = None
    mu_witness = None
    if exact_mu and order > 1:
        try:
            mu_exact, mu_witness = minimal_degree_exact(
                g, order_cap=mu_order_cap, threads=threads
            )
        except BudgetExceeded:
            pass
    if action is not None and has_witness_recipe(action):
        try:
            mu_witness_upper, found = minimal_degree_witness(action)
            if mu_witness is None:
                mu_witness = found
        except BudgetExceeded:
            pass
    elapsed_mu = time.monotonic() - t0
    return InvariantReport(
        n=n,
        order=order,
        transitive=g.is_transitive(),
        b_lower=b_lower,
        b_greedy_upper=b_greedy,
        b_exact=b_exact,
        base_witness=base_witness,
        mu_exact=mu_exact,
        mu_witness_upper=mu_witness_upper,
        mu_witness=mu_witness,
        elapsed_base=elapsed_base,
        elapsed_mu=elapsed_mu,
    )
