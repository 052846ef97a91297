"""Arithmetic for the small finite fields GF(p^f) with q in {2,3,4,5,7,8,9}.

Elements are encoded as integers 0..q-1.  For prime q the encoding is the
residue itself; for q = p^f the integer sum(c_i * p^i) encodes the
polynomial sum(c_i * x^i) reduced by a pinned polynomial, so the encoding
and everything enumerated from it is identical across runs and platforms.

Pinned reduction polynomials (monic, coefficients listed c_0, c_1, ...):

    GF(4): x^2 + x + 1      -> (1, 1, 1)
    GF(8): x^3 + x + 1      -> (1, 1, 0, 1)
    GF(9): x^2 + 2x + 2     -> (2, 2, 1)

Every table is verified against the field axioms exhaustively when the
field is first constructed.
"""

from __future__ import annotations

import numpy as np

SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)

REDUCTION_POLYS = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
}

_CACHE = {}


def _factor_prime_power(q):
    for p in (2, 3, 5, 7):
        if q % p == 0:
            f = 0
            m = q
            while m > 1:
                if m % p:
                    raise ValueError(f"{q} is not a prime power")
                m //= p
                f += 1
            return p, f
    raise ValueError(f"{q} is not a supported prime power")


def _encode(coeffs, p):
    value = 0
    for c in reversed(coeffs):
        value = value * p + c
    return value


def _decode(value, p, f):
    coeffs = []
    for _ in range(f):
        coeffs.append(value % p)
        value //= p
    return coeffs


def _poly_mul_mod(a, b, p, reduction):
    f = len(reduction) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            prod[i + j] = (prod[i + j] + ca * cb) % p
    for top in range(len(prod) - 1, f - 1, -1):
        c = prod[top]
        if c:
            # x^top = -(reduction without leading term) * x^(top-f)
            for i in range(f):
                prod[top - f + i] = (prod[top - f + i] - c * reduction[i]) % p
        prod[top] = 0
    return [c % p for c in prod[:f]]


class Field:
    """GF(q) with full lookup tables; immutable after construction."""

    def __init__(self, q):
        if q not in SUPPORTED_Q:
            raise ValueError(f"unsupported field size {q}; supported: {SUPPORTED_Q}")
        self.q = q
        self.p, self.f = _factor_prime_power(q)
        self.add_table = np.zeros((q, q), dtype=np.int32)
        self.mul_table = np.zeros((q, q), dtype=np.int32)
        if self.f == 1:
            grid = np.arange(q)
            self.add_table[:, :] = (grid[:, None] + grid[None, :]) % q
            self.mul_table[:, :] = (grid[:, None] * grid[None, :]) % q
        else:
            reduction = REDUCTION_POLYS[q]
            for a in range(q):
                ca = _decode(a, self.p, self.f)
                for b in range(q):
                    cb = _decode(b, self.p, self.f)
                    s = [(x + y) % self.p for x, y in zip(ca, cb)]
                    self.add_table[a, b] = _encode(s, self.p)
                    m = _poly_mul_mod(ca, cb, self.p, reduction)
                    self.mul_table[a, b] = _encode(m, self.p)
        self.neg_table = np.zeros(q, dtype=np.int32)
        self.inv_table = np.zeros(q, dtype=np.int32)
        for a in range(q):
            row = self.add_table[a]
            self.neg_table[a] = int(np.nonzero(row == 0)[0][0])
            if a:
                hits = np.nonzero(self.mul_table[a] == 1)[0]
                self.inv_table[a] = int(hits[0])
        self.frobenius_table = np.array(
            [self.power(a, self.p) for a in range(q)], dtype=np.int32
        )
        self._axiom_check()

    # -- scalar operations -------------------------------------------------

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        e = int(e)
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a):
        return int(self.frobenius_table[a])

    def conj(self, a):
        """x -> x^(p^(f/2)), the order-2 automorphism used by hermitian forms."""
        if self.f % 2:
            raise ValueError(f"GF({self.q}) has no square subfield conjugation")
        return self.power(a, self.p ** (self.f // 2))

    def elements(self):
        return range(self.q)

    def generator(self):
        """Smallest element (in encoding order) of multiplicative order q-1."""
        if self.q == 2:
            return 1
        for a in range(2, self.q):
            x, order = a, 1
            while x != 1:
                x = self.mul(x, a)
                order += 1
            if order == self.q - 1:
                return a
        raise AssertionError("no multiplicative generator found")

    # -- construction-time verification -------------------------------------

    def _axiom_check(self):
        q = self.q
        i = np.arange(q)
        a3 = i[:, None, None]
        b3 = i[None, :, None]
        c3 = i[None, None, :]
        add, mul = self.add_table, self.mul_table
        assert (add == add.T).all(), "addition not commutative"
        assert (mul == mul.T).all(), "multiplication not commutative"
        assert (add[0] == i).all(), "0 is not the additive identity"
        assert (mul[1] == i).all(), "1 is not the multiplicative identity"
        assert (add[add[a3, b3], c3] == add[a3, add[b3, c3]]).all(), "add not associative"
        assert (mul[mul[a3, b3], c3] == mul[a3, mul[b3, c3]]).all(), "mul not associative"
        assert (mul[a3, add[b3, c3]] == add[mul[a3, b3], mul[a3, c3]]).all(), "not distributive"
        assert (add[i, self.neg_table] == 0).all(), "negation broken"
        nz = i[1:]
        assert (mul[nz, self.inv_table[nz]] == 1).all(), "inversion broken"
        assert (mul[0] == 0).all(), "0 does not annihilate"

    def __repr__(self):
        return f"GF({self.q})"


def field_ops(q):
    """The cached field object for GF(q)."""
    if q not in _CACHE:
        _CACHE[q] = Field(q)
    return _CACHE[q]
