import numpy as np
import pytest

from primbase import domains, forms, formulas
from primbase import permutation as perm
from primbase.fields import field_ops
from primbase.linalg import DTYPE, identity_matrix, mat_mul, scalar_matrix


def unit(d, i):
    v = np.zeros(d, dtype=DTYPE)
    v[i] = 1
    return v


def random_invertible(rng, F, d):
    from primbase.linalg import is_invertible

    while True:
        m = rng.integers(0, F.q, size=(d, d)).astype(DTYPE)
        if is_invertible(F, m):
            return m


def test_projective_domain_sizes():
    assert len(domains.enumerate_domain("P", 1, 3, 2)) == 7
    assert len(domains.enumerate_domain("P", 2, 3, 2)) == 7
    assert len(domains.enumerate_domain("P", 1, 4, 3)) == formulas.gaussian_binomial(4, 1, 3)
    assert len(domains.enumerate_domain("P", 2, 4, 2)) == formulas.gaussian_binomial(4, 2, 2)


def test_members_are_sorted_and_unique():
    dom = domains.enumerate_domain("P", 2, 4, 2)
    keys = [m.tobytes() for m in dom.members]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    assert all(dom.index[k] == i for i, k in enumerate(keys))


def test_singular_domain_sizes_match_formulas():
    minus = forms.make_form("quadratic", 6, 2, "-")
    plus = forms.make_form("quadratic", 6, 2, "+")
    assert len(domains.enumerate_domain("S", 1, minus)) == 27
    assert len(domains.enumerate_domain("S", 1, plus)) == 35
    small_plus = forms.make_form("quadratic", 4, 2, "+")
    assert len(domains.enumerate_domain("S", 2, small_plus)) == 6
    sym = forms.make_form("symplectic", 4, 2)
    assert len(domains.enumerate_domain("S", 1, sym)) == 15
    herm = forms.make_form("hermitian", 3, 4)
    assert len(domains.enumerate_domain("S", 1, herm)) == formulas.degree(
        "SU", d=3, q=2, domain="S1"
    )


def test_nonsingular_domain_sizes():
    minus = forms.make_form("quadratic", 6, 2, "-")
    assert len(domains.enumerate_domain("N", 1, minus)) == formulas.degree(
        "GO", d=6, q=2, sign="-", domain="N1"
    )
    odd = forms.make_form("quadratic", 7, 3, "o")
    assert len(domains.enumerate_domain("N", 1, odd, sign="+")) == 378
    assert len(domains.enumerate_domain("N", 1, odd, sign="-")) == 351
    evenodd = forms.make_form("quadratic", 4, 3, "+")
    for s in "+-":
        assert len(domains.enumerate_domain("N", 1, evenodd, sign=s)) == 12
        assert len(domains.enumerate_domain("N", 1, evenodd, sign=s)) == formulas.degree(
            "GO", d=4, q=3, sign="+", domain="N1"
        )
    herm = forms.make_form("hermitian", 3, 4)
    assert len(domains.enumerate_domain("N", 1, herm)) == formulas.degree(
        "SU", d=3, q=2, domain="N1"
    )


def test_empty_singular_domain_raises():
    minus = forms.make_form("quadratic", 6, 2, "-")
    with pytest.raises(ValueError):
        domains.enumerate_domain("S", 3, minus)
    tiny = forms.make_form("quadratic", 2, 2, "-")
    with pytest.raises(ValueError):
        domains.enumerate_domain("S", 1, tiny)


def test_domain_argument_validation():
    plus = forms.make_form("quadratic", 6, 2, "+")
    with pytest.raises(ValueError):
        domains.enumerate_domain("P", 1, plus)
    with pytest.raises(ValueError):
        domains.enumerate_domain("S", 1, 6, 2)
    with pytest.raises(ValueError):
        domains.enumerate_domain("N", 1, plus, sign="+")
    odd = forms.make_form("quadratic", 7, 3, "o")
    with pytest.raises(ValueError):
        domains.enumerate_domain("N", 1, odd)
    with pytest.raises(ValueError):
        domains.enumerate_domain("N", 1, forms.make_form("quadratic", 4, 3, "-"))
    with pytest.raises(ValueError):
        domains.enumerate_domain("N", 2, plus)
    with pytest.raises(ValueError):
        domains.enumerate_domain("X", 1, plus)
    with pytest.raises(ValueError):
        domains.enumerate_domain("P", 5, 4, 2)


def test_identity_and_scalar_act_trivially():
    dom = domains.enumerate_domain("P", 1, 3, 3)
    eye_perm = domains.matrix_action_on_domain(identity_matrix(3), dom)
    assert (eye_perm == np.arange(len(dom))).all()
    scalar_perm = domains.matrix_action_on_domain(scalar_matrix(3, 2), dom)
    assert (scalar_perm == np.arange(len(dom))).all()


def test_action_is_functorial():
    rng = np.random.default_rng(41)
    F = field_ops(3)
    dom = domains.enumerate_domain("P", 1, 3, 3)
    for _ in range(100):
        a = random_invertible(rng, F, 3)
        b = random_invertible(rng, F, 3)
        left = domains.matrix_action_on_domain(mat_mul(F, a, b), dom)
        right = perm.compose(
            domains.matrix_action_on_domain(a, dom),
            domains.matrix_action_on_domain(b, dom),
        )
        assert (left == right).all()


def test_noninvertible_matrix_rejected():
    dom = domains.enumerate_domain("P", 1, 3, 2)
    bad = np.zeros((3, 3), dtype=DTYPE)
    with pytest.raises(ValueError):
        domains.matrix_action_on_domain(bad, dom)


def test_form_violating_matrix_rejected():
    minus = forms.make_form("quadratic", 4, 2, "-")
    dom = domains.enumerate_domain("S", 1, minus)
    shear = identity_matrix(4)
    shear[2, 0] = 1
    with pytest.raises(ValueError):
        domains.matrix_action_on_domain(shear, dom)


def test_elliptic_witness_fixes_35_singular_points():
    form = forms.make_form("quadratic", 8, 2, "-")
    F = form.F
    g = mat_mul(
        F, forms.reflection(form, unit(8, 0)), forms.reflection(form, unit(8, 1))
    )
    dom = domains.enumerate_domain("S", 1, form)
    action = domains.matrix_action_on_domain(g, dom)
    assert len(dom) == 119
    assert int(np.count_nonzero(action == np.arange(len(dom)))) == 35
    ndom = domains.enumerate_domain("N", 1, form)
    naction = domains.matrix_action_on_domain(g, ndom)
    assert len(ndom) == 136
    assert int(np.count_nonzero(naction == np.arange(len(ndom)))) == 28


def test_reflections_act_on_nonsingular_classes():
    odd = forms.make_form("quadratic", 7, 3, "o")
    r = forms.reflection(odd, unit(7, 0))
    for sign in "+-":
        dom = domains.enumerate_domain("N", 1, odd, sign=sign)
        action = domains.matrix_action_on_domain(r, dom)
        assert sorted(action.tolist()) == list(range(len(dom)))


def test_coset_domain_sizes_and_seeds():
    for d in (4, 6, 8):
        sym = forms.make_form("symplectic", d, 2)
        plus = domains.enumerate_quadratic_coset_domain(sym, "+")
        minus = domains.enumerate_quadratic_coset_domain(sym, "-")
        assert len(plus) == formulas.degree("SpGOCosets", d=d, sign="+")
        assert len(minus) == formulas.degree("SpGOCosets", d=d, sign="-")
        assert len(plus) + len(minus) == 2**d
        zero = np.zeros((1, d), dtype=DTYPE)
        assert zero.tobytes() in plus.index
        seed_minus = np.zeros((1, d), dtype=DTYPE)
        seed_minus[0, 0] = seed_minus[0, 1] = 1
        assert seed_minus.tobytes() in minus.index


def test_coset_domain_action():
    sym = forms.make_form("symplectic", 6, 2)
    F = sym.F
    dom = domains.enumerate_quadratic_coset_domain(sym, "+")
    eye = domains.matrix_action_on_domain(identity_matrix(6), dom)
    assert (eye == np.arange(len(dom))).all()
    vs = [unit(6, 0), unit(6, 3), (unit(6, 1) + unit(6, 4)).astype(DTYPE)]
    ts = [forms.symplectic_transvection(sym, v, 1) for v in vs]
    for t in ts:
        action = domains.matrix_action_on_domain(t, dom)
        assert sorted(action.tolist()) == list(range(len(dom)))
    left = domains.matrix_action_on_domain(mat_mul(F, ts[0], ts[1]), dom)
    right = perm.compose(
        domains.matrix_action_on_domain(ts[0], dom),
        domains.matrix_action_on_domain(ts[1], dom),
    )
    assert (left == right).all()


def test_coset_domain_validation():
    with pytest.raises(ValueError):
        domains.enumerate_quadratic_coset_domain(
            forms.make_form("symplectic", 4, 3), "+"
        )
    with pytest.raises(ValueError):
        domains.enumerate_quadratic_coset_domain(
            forms.make_form("quadratic", 4, 2, "+"), "+"
        )
    sym = forms.make_form("symplectic", 4, 2)
    with pytest.raises(ValueError):
        domains.enumerate_quadratic_coset_domain(sym, "o")
