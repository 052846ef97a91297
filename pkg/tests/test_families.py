import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primbase import families, formulas, forms
from primbase import permutation as perm
from primbase.errors import ConstructionError
from primbase.families import FamilySpec, build, parse_spec, spec
from primbase.fields import field_ops
from primbase.linalg import DTYPE, identity_matrix, mat_mul, row_image


def test_degrees_match_closed_forms():
    cases = [
        ("SymSubsets(m=5,k=2)", 10),
        ("SymSubsets(m=8,k=3)", 56),
        ("AltSubsets(m=7,k=3)", 35),
        ("SymPartitions(a=2,b=3)", 15),
        ("SymPartitions(a=4,b=2)", 35),
        ("SymPartitions(a=2,b=4)", 105),
        ("Affine(d=3,q=2)", 8),
        ("Affine(d=2,q=5)", 25),
        ("LinearOnPk(d=3,q=2,k=1)", 7),
        ("LinearOnPk(d=4,q=2,k=2)", 35),
        ("LinearOnPk(d=4,q=3,k=1)", 40),
        ("SpOnSk(d=6,q=2,k=1)", 63),
        ("SpOnSk(d=6,q=2,k=3)", 135),
        ("GOOnS1(d=6,q=2,sign=+)", 35),
        ("GOOnS1(d=6,q=2,sign=-)", 27),
        ("GOOnS1(d=8,q=2,sign=-)", 119),
        ("GOOnN1(d=8,q=2,sign=-)", 136),
        ("GOOnS1(d=7,q=3,sign=o)", 364),
        ("GOOnN1(d=7,q=3,sign=+)", 378),
        ("GOOnN1(d=7,q=3,sign=-)", 351),
        ("UnitaryOnS1(d=3,q=2)", 9),
        ("UnitaryOnN1(d=4,q=2)", 40),
        ("SpOnGOCosets(d=6,sign=+)", 36),
        ("SpOnGOCosets(d=6,sign=-)", 28),
        ("Mathieu24()", 24),
    ]
    for text, expected in cases:
        action = build(text)
        assert action.n == expected
        assert action.n == families.predicted_degree(parse_spec(text))
        assert len(action.labels) == expected
        assert len(set(action.labels)) == expected


def test_orders_match_classical_formulas():
    cases = [
        ("LinearOnPk(d=3,q=2,k=1)", 168),
        ("LinearOnPk(d=4,q=2,k=1)", 20160),
        ("LinearOnPk(d=2,q=4,k=1)", 60),
        ("LinearOnPk(d=3,q=4,k=1)", 20160),
        ("SpOnSk(d=6,q=2,k=1)", 1451520),
        ("SpOnSk(d=4,q=3,k=1)", 25920),
        ("GOOnS1(d=6,q=2,sign=-)", 51840),
        ("GOOnS1(d=6,q=2,sign=+)", 40320),
        ("OmegaOnS1(d=6,q=2,sign=-)", 25920),
        ("UnitaryOnS1(d=4,q=2)", 25920),
        ("UnitaryOnS1(d=3,q=3)", 6048),
        ("UnitaryOnS1(d=3,q=2)", 72),
        ("Affine(d=3,q=2)", 1344),
        ("Affine(d=2,q=4)", 2880),
        ("Affine(d=1,q=3)", 6),
        ("SpOnGOCosets(d=4,sign=-)", 720),
        ("Mathieu24()", 244823040),
    ]
    for text, expected in cases:
        action = build(text)
        assert action.group.order() == expected
        assert action.expected_order == expected


def test_all_actions_transitive():
    for text in [
        "SymSubsets(m=6,k=3)",
        "SymPartitions(a=3,b=2)",
        "Affine(d=4,q=2)",
        "LinearOnPk(d=5,q=2,k=1)",
        "OmegaOnN1(d=6,q=2,sign=-)",
        "WreathProduct(inner=SymSubsets(m=4,k=1),r=2)",
    ]:
        assert build(text).group.is_transitive()


PRIMITIVE = [
    "SymSubsets(m=5,k=2)",
    "AltSubsets(m=7,k=3)",
    "SymPartitions(a=2,b=3)",
    "SymPartitions(a=4,b=2)",
    "Affine(d=3,q=2)",
    "LinearOnPk(d=4,q=2,k=2)",
    "SpOnSk(d=4,q=2,k=2)",
    "GOOnS1(d=4,q=3,sign=+)",
    "GOOnN1(d=4,q=3,sign=-)",
    "OmegaOnS1(d=4,q=2,sign=-)",
    "UnitaryOnS1(d=3,q=2)",
    "UnitaryOnN1(d=4,q=2)",
    "SpOnGOCosets(d=4,sign=+)",
    "WreathProduct(inner=SymSubsets(m=5,k=2),r=2)",
    "Mathieu24()",
]

# Degenerate small cases with a visible invariant structure: subsets at
# m = 2k pair with their complements; the d=4 hyperbolic quadric over
# GF(3) is a 4x4 grid and the Omega/N1 actions there lose the factor
# swap; the twelve nondegenerate points of the d=3 hermitian space fall
# into four self-polar triangles.
IMPRIMITIVE = [
    "SymSubsets(m=6,k=3)",
    "SymSubsets(m=8,k=4)",
    "AltSubsets(m=6,k=3)",
    "OmegaOnS1(d=4,q=3,sign=+)",
    "OmegaOnN1(d=4,q=3,sign=+)",
    "GOOnN1(d=4,q=3,sign=+)",
    "UnitaryOnN1(d=3,q=2)",
]


def test_primitivity_catalogue():
    for text in PRIMITIVE:
        assert build(text).group.is_primitive(), text
    for text in IMPRIMITIVE:
        assert not build(text).group.is_primitive(), text


def test_subset_embedding_is_functorial():
    action = build("SymSubsets(m=6,k=2)")
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = perm.as_perm(rng.permutation(6).astype(np.int32))
        h = perm.as_perm(rng.permutation(6).astype(np.int32))
        left = action.embed(perm.compose(g, h))
        right = perm.compose(action.embed(g), action.embed(h))
        assert (left == right).all()


def test_classical_embedding_is_functorial():
    form = forms.make_form("quadratic", 6, 2, "-")
    action = build("GOOnS1(d=6,q=2,sign=-)")
    F = field_ops(2)
    points = [v for v in forms.all_vectors(6, 2) if forms.evaluate(form, v)]
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = forms.reflection(form, points[rng.integers(len(points))])
        b = forms.reflection(form, points[rng.integers(len(points))])
        left = action.embed(mat_mul(F, a, b))
        right = perm.compose(action.embed(a), action.embed(b))
        assert (left == right).all()


def test_affine_embedding_composes():
    # applying (s1, m1) then (s2, m2) sends x to x(m1 m2) + (s1 m2 + s2)
    action = build("Affine(d=3,q=2)")
    F = field_ops(2)
    rng = np.random.default_rng(13)
    shear = identity_matrix(3)
    shear[0, 1] = 1
    mats = [identity_matrix(3), shear]
    for _ in range(50):
        s1 = rng.integers(0, 2, 3).astype(DTYPE)
        s2 = rng.integers(0, 2, 3).astype(DTYPE)
        m1, m2 = mats[rng.integers(2)], mats[rng.integers(2)]
        combined_m = mat_mul(F, m1, m2)
        combined_s = F.add_table[row_image(F, s1, m2), s2].astype(DTYPE)
        left = action.embed(combined_s, combined_m)
        right = perm.compose(action.embed(s1, m1), action.embed(s2, m2))
        assert (left == right).all()


def test_wreath_structure():
    inner = build("SymSubsets(m=3,k=1)")
    action = families.wreath_product_action(inner, 2)
    assert action.n == 9
    assert action.group.order() == 72
    assert action.labels[0].count(";") == 1
    top = build("WreathProduct(inner=SymSubsets(m=5,k=2),r=2)")
    assert top.n == 100
    assert top.group.order() == 120**2 * 2
    assert top.labels[0] == "({1,2};{1,2})"


def test_wreath_embedding_is_functorial():
    inner = build("SymSubsets(m=4,k=1)")
    action = families.wreath_product_action(inner, 2)
    rng = np.random.default_rng(17)
    for _ in range(60):
        g = perm.as_perm(rng.permutation(4).astype(np.int32))
        h = perm.as_perm(rng.permutation(4).astype(np.int32))
        left = action.embed(perm.compose(g, h))
        right = perm.compose(action.embed(g), action.embed(h))
        assert (left == right).all()


def test_parse_spec_round_trip():
    texts = [
        "SymSubsets(k=2,m=5)",
        "GOOnN1(d=7,q=3,sign=-)",
        "SpOnGOCosets(d=6,sign=+)",
        "WreathProduct(inner=SymSubsets(k=2,m=5),r=2)",
        "WreathProduct(inner=WreathProduct(inner=Affine(d=1,q=3),r=2),r=2)",
        "Mathieu24()",
        "Mathieu24",
    ]
    for text in texts:
        sp = parse_spec(text)
        assert parse_spec(str(sp)) == sp


def test_parse_spec_rejects_malformed():
    for text in [
        "NoSuchFamily(d=3)",
        "SymSubsets(m=5,k=2",
        "SymSubsets(m=5,,k=2)",
        "SymSubsets(m=five,k=2)",
        "SymSubsets(m=5,m=6)",
        "GOOnS1(d=6,q=2,sign=*)",
        "",
    ]:
        with pytest.raises(ValueError):
            parse_spec(text)


@given(
    m=st.integers(min_value=3, max_value=30),
    k=st.integers(min_value=1, max_value=15),
)
def test_parse_spec_round_trip_subsets(m, k):
    sp = spec("SymSubsets", m=m, k=k)
    assert parse_spec(str(sp)) == sp


def test_spec_str_is_sorted_and_stable():
    sp = spec("GOOnS1", q=2, d=6, sign="-")
    assert str(sp) == "GOOnS1(d=6,q=2,sign=-)"
    assert str(parse_spec("GOOnS1(sign=-,q=2,d=6)")) == "GOOnS1(d=6,q=2,sign=-)"


def test_mathieu_group_facts():
    action = build("Mathieu24()")
    group = action.group
    assert group.order() == 244823040
    assert group.is_primitive()
    chain = group.build_chain(initial_base=(0, 1, 2, 3, 4))
    assert list(chain.orbit_sizes())[:5] == [24, 23, 22, 21, 20]
    assert action.labels[0] == "0"
    assert action.labels[23] == "inf"


def test_mathieu_data_file_integrity():
    import hashlib
    from importlib import resources

    raw = (
        resources.files("primbase")
        .joinpath("data/mathieu24.txt")
        .read_text(encoding="ascii")
    )
    lines = raw.strip("\n").split("\n")
    assert lines[0] == "24"
    assert len(lines) == 4
    body = "\n".join(lines[:-1]) + "\n"
    assert lines[-1] == "sha256 " + hashlib.sha256(body.encode("ascii")).hexdigest()


def test_degree_cap_rejected_before_construction():
    with pytest.raises(ValueError, match="cap"):
        build("SymSubsets(m=100,k=3)")
    with pytest.raises(ValueError, match="cap"):
        build("Affine(d=13,q=2)")
    with pytest.raises(ValueError, match="cap"):
        build("Affine(d=3,q=2)", degree_cap=4)


def test_envelope_rejection():
    for text in [
        "LinearOnPk(d=7,q=2,k=1)",
        "LinearOnPk(d=3,q=7,k=1)",
        "SpOnSk(d=10,q=2,k=1)",
        "GOOnS1(d=10,q=2,sign=+)",
        "UnitaryOnS1(d=5,q=2)",
        "SpOnGOCosets(d=10,sign=+)",
    ]:
        with pytest.raises(ValueError, match="envelope"):
            build(text)


def test_reflection_exception_aborts():
    # reflections generate an index-2 subgroup of the d=4 hyperbolic
    # orthogonal group over GF(2), so these constructions must refuse
    for text in [
        "GOOnS1(d=4,q=2,sign=+)",
        "GOOnN1(d=4,q=2,sign=+)",
        "OmegaOnS1(d=4,q=2,sign=+)",
    ]:
        with pytest.raises(ConstructionError, match="order"):
            build(text)


def test_orthogonal_sign_validation():
    with pytest.raises(ValueError):
        build("GOOnS1(d=7,q=3,sign=+)")
    with pytest.raises(ValueError):
        build("GOOnN1(d=7,q=3,sign=o)")
    with pytest.raises(ValueError):
        build("GOOnS1(d=6,q=2,sign=o)")


def test_subset_parameter_validation():
    with pytest.raises(ValueError):
        families.sym_on_subsets(5, 0)
    with pytest.raises(ValueError):
        families.sym_on_subsets(5, 3)
    with pytest.raises(ValueError):
        families.sym_on_partitions(1, 3)
    with pytest.raises(ValueError):
        families.wreath_product_action(build("SymSubsets(m=4,k=1)"), 1)


def test_affine_custom_point_group():
    action = families.affine(3, 2, matrices=[identity_matrix(3)])
    assert action.n == 8
    assert action.group.order() == 8
    assert action.expected_order is None
    m = identity_matrix(3)
    m[0, 1] = 1
    richer = families.affine(3, 2, matrices=[m])
    assert richer.group.order() == 16


def test_affine_su_spec_examples():
    assert build("Affine(d=1,q=3)").group.order() == 6
    a24 = build("Affine(d=2,q=4)")
    assert a24.n == 16
    assert a24.group.order() == 16 * 180
