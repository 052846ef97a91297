"""Field arithmetic against hand-checked values and exhaustive laws."""

import pytest

from primbase.fields import SUPPORTED_Q, Field, field_ops


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_construction_runs_axiom_check(q):
    F = Field(q)
    assert F.q == q
    assert len(F.elements()) == q


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 16, 25, 27])
def test_unsupported_sizes_rejected(q):
    with pytest.raises(ValueError):
        Field(q)


def test_gf2_arithmetic():
    F = field_ops(2)
    assert F.add(1, 1) == 0
    assert F.mul(1, 1) == 1
    assert F.neg(1) == 1
    assert F.inv(1) == 1


def test_gf4_reduction_pin():
    F = field_ops(4)
    assert F.mul(2, 2) == 3
    assert F.mul(2, 3) == 1


def test_gf8_reduction_pin():
    F = field_ops(8)
    assert F.mul(2, 2) == 4
    assert F.mul(4, 2) == 3


def test_gf9_reduction_pin():
    F = field_ops(9)
    assert F.mul(3, 3) == 4


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_inverses_and_division(q):
    F = field_ops(q)
    for x in range(1, q):
        assert F.mul(x, F.inv(x)) == 1
        assert F.div(x, x) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_power_laws(q):
    F = field_ops(q)
    for x in range(q):
        assert F.power(x, q) == x
        assert F.power(x, 1) == x
        if x:
            assert F.power(x, q - 1) == 1
            assert F.power(x, -1) == F.inv(x)
            assert F.power(x, 0) == 1


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_frobenius_is_pth_power(q):
    F = field_ops(q)
    for x in range(q):
        assert F.frobenius(x) == F.power(x, F.p)


def test_conjugation_square_fields():
    for q, p in ((4, 2), (9, 3)):
        F = field_ops(q)
        for x in range(q):
            assert F.conj(x) == F.power(x, p)
            assert F.conj(F.conj(x)) == x
        fixed = [x for x in range(q) if F.conj(x) == x]
        assert len(fixed) == p


@pytest.mark.parametrize("q", [2, 3, 5, 7, 8])
def test_conjugation_needs_square_field(q):
    with pytest.raises(ValueError):
        field_ops(q).conj(1)


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_generator_has_full_order(q):
    F = field_ops(q)
    g = F.generator()
    seen = set()
    x = 1
    for _ in range(q - 1):
        x = F.mul(x, g)
        seen.add(x)
    assert len(seen) == q - 1
    assert x == 1
    for smaller in range(1, g):
        order = 1
        y = smaller
        while y != 1:
            y = F.mul(y, smaller)
            order += 1
            assert order <= q
        assert order < q - 1 or smaller == g


def test_field_ops_cached():
    assert field_ops(4) is field_ops(4)
    assert field_ops(4) is not field_ops(8)
