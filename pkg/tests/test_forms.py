import numpy as np
import pytest

from primbase import forms, formulas
from primbase.errors import ConstructionError
from primbase.fields import field_ops
from primbase.linalg import DTYPE, identity_matrix, mat_mul, row_image


def unit(d, i):
    v = np.zeros(d, dtype=DTYPE)
    v[i] = 1
    return v


def test_singular_point_counts_match_closed_forms():
    cases = [
        ("quadratic", 6, 2, "+", 35),
        ("quadratic", 6, 2, "-", 27),
        ("quadratic", 8, 2, "+", 135),
        ("quadratic", 8, 2, "-", 119),
        ("quadratic", 4, 2, "+", 9),
        ("quadratic", 4, 2, "-", 5),
        ("quadratic", 4, 3, "+", 16),
        ("quadratic", 4, 3, "-", 10),
        ("quadratic", 7, 3, "o", 364),
        ("quadratic", 3, 3, "o", 4),
        ("quadratic", 6, 4, "+", 357),
        ("quadratic", 6, 4, "-", 325),
        ("quadratic", 4, 5, "+", 36),
        ("quadratic", 4, 5, "-", 26),
        ("quadratic", 4, 8, "+", 81),
        ("quadratic", 4, 9, "-", 82),
    ]
    for kind, d, q, sign, expected in cases:
        form = forms.make_form(kind, d, q, sign)
        assert forms.singular_point_count(form) == expected, (d, q, sign)
        assert forms.classify_quadratic(form) == sign


def test_counts_agree_with_degree_formulas():
    for d, q, sign in [(4, 2, "+"), (6, 2, "-"), (8, 2, "+"), (4, 3, "-"), (6, 3, "+")]:
        form = forms.make_form("quadratic", d, q, sign)
        assert forms.singular_point_count(form) == formulas.degree(
            "GO", d=d, q=q, sign=sign, domain="S1"
        )
    form = forms.make_form("quadratic", 7, 3, "o")
    assert forms.singular_point_count(form) == formulas.degree(
        "GO", d=7, q=3, sign="o", domain="S1"
    )


def test_odd_dimension_square_class_split():
    # over GF(3) scaling preserves Q values, so each nonsingular point
    # contributes q-1 vectors of one fixed value
    form = forms.make_form("quadratic", 7, 3, "o")
    values = forms.evaluate_batch(form, forms.all_vectors(7, 3))
    n_square = int(np.count_nonzero(values == 1)) // 2
    n_nonsquare = int(np.count_nonzero(values == 2)) // 2
    assert n_square == formulas.degree("GO", d=7, q=3, sign="o", domain="N1+")
    assert n_nonsquare == formulas.degree("GO", d=7, q=3, sign="o", domain="N1-")
    assert n_square == 378
    assert n_nonsquare == 351


def test_hermitian_isotropic_counts():
    for d, q2, expected in [(3, 4, 9), (4, 4, 45), (3, 9, 28), (4, 9, 280)]:
        form = forms.make_form("hermitian", d, q2)
        assert forms.singular_point_count(form) == expected


def test_polarization_identity_random_pairs():
    rng = np.random.default_rng(23)
    cases = [
        (forms.make_form("quadratic", 6, 2, "-"), 250),
        (forms.make_form("quadratic", 5, 3, "o"), 250),
        (forms.make_form("quadratic", 4, 4, "+"), 250),
        (forms.make_form("quadratic", 4, 5, "-"), 250),
    ]
    for form, trials in cases:
        F = form.F
        for _ in range(trials):
            u = rng.integers(0, form.q, size=form.d).astype(DTYPE)
            v = rng.integers(0, form.q, size=form.d).astype(DTYPE)
            lhs = forms.polar(form, u, v)
            uv = F.add_table[u, v].astype(DTYPE)
            rhs = F.sub(
                F.sub(forms.evaluate(form, uv), forms.evaluate(form, u)),
                forms.evaluate(form, v),
            )
            assert lhs == rhs


def test_polar_symmetry_and_hermitian_conjugate_symmetry():
    form = forms.make_form("quadratic", 4, 3, "+")
    rng = np.random.default_rng(29)
    for _ in range(50):
        u = rng.integers(0, 3, size=4).astype(DTYPE)
        v = rng.integers(0, 3, size=4).astype(DTYPE)
        assert forms.polar(form, u, v) == forms.polar(form, v, u)
    herm = forms.make_form("hermitian", 3, 4)
    F = herm.F
    for _ in range(50):
        u = rng.integers(0, 4, size=3).astype(DTYPE)
        v = rng.integers(0, 4, size=3).astype(DTYPE)
        assert forms.polar(herm, u, v) == F.conj(forms.polar(herm, v, u))


def test_reflection_pair_gives_pinned_block_matrix():
    form = forms.make_form("quadratic", 4, 2, "-")
    r1 = forms.reflection(form, unit(4, 0))
    r2 = forms.reflection(form, unit(4, 1))
    assert r1.tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert r2.tolist() == [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    g = mat_mul(form.F, r1, r2)
    assert g.tolist() == [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_reflection_involution_preservation_and_vector_action():
    for d, q, sign in [(4, 2, "-"), (6, 2, "+"), (3, 3, "o"), (4, 3, "-")]:
        form = forms.make_form("quadratic", d, q, sign)
        F = form.F
        eye = identity_matrix(d)
        vecs = forms.all_vectors(d, q)[1:]
        values = forms.evaluate_batch(form, vecs)
        for v, qv in zip(vecs, values):
            if not qv:
                continue
            r = forms.reflection(form, v)
            assert forms.form_preserved(form, r)
            assert (mat_mul(F, r, r) == eye).all()
            image = row_image(F, v, r)
            if q % 2:
                neg = F.mul_table[v, F.neg(1)].astype(DTYPE)
                assert (image == neg).all()
            else:
                assert (image == v).all()


def test_reflection_rejects_singular_vector():
    form = forms.make_form("quadratic", 4, 2, "+")
    with pytest.raises(ValueError):
        forms.reflection(form, unit(4, 0))


def test_elliptic_witness_fixed_point_counts():
    # g moves only the anisotropic head plane; its fixed vectors are
    # exactly the chain subspace on the last six coordinates
    form = forms.make_form("quadratic", 8, 2, "-")
    F = form.F
    g = mat_mul(F, forms.reflection(form, unit(8, 0)), forms.reflection(form, unit(8, 1)))
    assert forms.form_preserved(form, g)
    vecs = forms.all_vectors(8, 2)[1:]
    values = forms.evaluate_batch(form, vecs)
    fixed = np.array([(row_image(F, v, g) == v).all() for v in vecs])
    fixed_singular = int(np.count_nonzero(fixed & (values == 0)))
    fixed_nonsingular = int(np.count_nonzero(fixed & (values != 0)))
    assert fixed_singular == 35
    assert fixed_nonsingular == 28
    total_singular = int(np.count_nonzero(values == 0))
    total_nonsingular = int(np.count_nonzero(values != 0))
    assert total_singular - fixed_singular == 84
    assert total_nonsingular - fixed_nonsingular == 108


def test_form_restrict_of_elliptic_tail_is_hyperbolic_chain():
    form = forms.make_form("quadratic", 8, 2, "-")
    basis = identity_matrix(8)[2:]
    sub = forms.form_restrict(form, basis)
    assert sub.d == 6
    expected = np.zeros((6, 6), dtype=DTYPE)
    for i in range(5):
        expected[i, i + 1] = 1
    assert (sub.coeff == expected).all()
    assert forms.classify_quadratic(sub) == "+"
    assert forms.singular_point_count(sub) == 35


def test_classify_rejects_degenerate_restriction():
    form = forms.make_form("quadratic", 4, 2, "+")
    basis = np.array([unit(4, 0), unit(4, 2)], dtype=DTYPE)
    sub = forms.form_restrict(form, basis)
    with pytest.raises(ConstructionError):
        forms.classify_quadratic(sub)


def test_diag_vector_forms_over_chain_gram_split_by_type():
    # quadratic forms polarizing to the chain Gram, encoded by their
    # diagonal vectors; the two type classes partition all 2^d of them
    sym = forms.make_form("symplectic", 4, 2)
    F = sym.F
    counts = {"+": 0, "-": 0}
    for a in forms.all_vectors(4, 2):
        C = np.triu(sym.gram, 1).astype(DTYPE)
        np.fill_diagonal(C, a)
        candidate = forms.Form("quadratic", 4, 2, None, C, sym.gram, F)
        counts[forms.classify_quadratic(candidate)] += 1
    assert counts == {"+": 10, "-": 6}
    seed_minus = np.array([1, 1, 0, 0], dtype=DTYPE)
    C = np.triu(sym.gram, 1).astype(DTYPE)
    np.fill_diagonal(C, seed_minus)
    candidate = forms.Form("quadratic", 4, 2, None, C, sym.gram, F)
    assert forms.classify_quadratic(candidate) == "-"


def test_symplectic_transvection_preserves_form():
    for d, q in [(4, 2), (6, 2), (4, 3)]:
        form = forms.make_form("symplectic", d, q)
        F = form.F
        rng = np.random.default_rng(31)
        eye = identity_matrix(d)
        for _ in range(20):
            v = rng.integers(0, q, size=d).astype(DTYPE)
            if not v.any():
                continue
            for lam in range(1, q):
                t = forms.symplectic_transvection(form, v, lam)
                assert forms.form_preserved(form, t)
                t_back = forms.symplectic_transvection(form, v, F.neg(lam))
                assert (mat_mul(F, t, t_back) == eye).all()


def test_unitary_transvection_preserves_form():
    herm4 = forms.make_form("hermitian", 3, 4)
    v = np.array([1, 1, 0], dtype=DTYPE)
    assert forms.evaluate(herm4, v) == 0
    t = forms.unitary_transvection(herm4, v, 1)
    assert forms.form_preserved(herm4, t)
    assert not (t == identity_matrix(3)).all()

    herm9 = forms.make_form("hermitian", 3, 9)
    F = herm9.F
    lams = [x for x in F.elements() if x and F.conj(x) == F.neg(x)]
    assert lams
    vecs = forms.all_vectors(3, 9)[1:]
    values = forms.evaluate_batch(herm9, vecs)
    v = vecs[np.nonzero(values == 0)[0][0]]
    for lam in lams:
        t = forms.unitary_transvection(herm9, v, lam)
        assert forms.form_preserved(herm9, t)


def test_unitary_transvection_rejects_bad_inputs():
    herm = forms.make_form("hermitian", 3, 4)
    with pytest.raises(ValueError):
        forms.unitary_transvection(herm, unit(3, 0), 1)  # not isotropic
    bad_lam = [x for x in herm.F.elements() if x and herm.F.conj(x) != herm.F.neg(x)]
    v = np.array([1, 1, 0], dtype=DTYPE)
    with pytest.raises(ValueError):
        forms.unitary_transvection(herm, v, bad_lam[0])


def test_form_preserved_rejects_non_isometry():
    form = forms.make_form("quadratic", 4, 2, "-")
    shear = identity_matrix(4)
    shear[2, 0] = 1
    assert not forms.form_preserved(form, shear)


def test_make_form_validation():
    with pytest.raises(ValueError):
        forms.make_form("quadratic", 5, 2, "+")
    with pytest.raises(ValueError):
        forms.make_form("quadratic", 4, 2, "o")
    with pytest.raises(ValueError):
        forms.make_form("quadratic", 3, 2, "o")
    with pytest.raises(ValueError):
        forms.make_form("quadratic", 4, 2, None)
    with pytest.raises(ValueError):
        forms.make_form("symplectic", 5, 2)
    with pytest.raises(ValueError):
        forms.make_form("symplectic", 4, 2, "+")
    with pytest.raises(ValueError):
        forms.make_form("hermitian", 3, 3)
    with pytest.raises(ValueError):
        forms.make_form("cubic", 3, 2)


def test_symplectic_gram_matches_hyperbolic_polarization_even_q():
    sym = forms.make_form("symplectic", 6, 2)
    hyp = forms.make_form("quadratic", 6, 2, "+")
    assert (sym.gram == hyp.gram).all()


def test_evaluate_batch_rejects_symplectic():
    sym = forms.make_form("symplectic", 4, 2)
    with pytest.raises(ValueError):
        forms.evaluate(sym, unit(4, 0))
