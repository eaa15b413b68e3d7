"""Finite fields GF(p^k), p odd, plus Lucas binomials and the Catalan residue test.

Elements of GF(p^k) are coordinate tuples over GF(p) in the power basis of a
fixed irreducible modulus.  For vectorised work every element also has an
integer index  sum c_i p^i  and `FieldSpec.tables()` returns add/mul/neg/inv
tables over those indices.
"""
from __future__ import annotations

from functools import lru_cache
from fractions import Fraction
from math import comb, factorial

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q):
    """Return (p, k) with q = p^k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _irreducible_quadratic(p):
    # monic t^2 + b t + c with no root in GF(p); first hit in (b, c) order
    for b in range(p):
        for c in range(1, p):
            if all((x * x + b * x + c) % p for x in range(p)):
                return (c, b, 1)
    raise RuntimeError("no irreducible quadratic")  # pragma: no cover


@lru_cache(maxsize=None)
def _modulus_table():
    tab = {}
    for p in range(3, 14):
        if is_prime(p):
            tab[(p, 1)] = (0, 1)
            tab[(p, 2)] = _irreducible_quadratic(p)
    return tab


class FieldSpec:
    """GF(q), q = p^k, with k <= 2 and q <= 13^2.  Immutable."""

    __slots__ = ("p", "k", "q", "modulus", "_tables")

    def __init__(self, q):
        p, k = prime_power(q)
        if p == 2:
            raise ValueError("characteristic must be odd")
        if (p, k) not in _modulus_table():
            raise ValueError(f"unsupported field order {q} (need p<=13, k<=2)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "modulus", _modulus_table()[(p, k)])
        object.__setattr__(self, "_tables", None)
        self._check_modulus()

    def __setattr__(self, *a):
        raise AttributeError("FieldSpec is immutable")

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"FieldSpec(q={self.q})"

    def _check_modulus(self):
        # a degree <= 2 polynomial is irreducible iff it has no root
        if self.k == 1:
            return
        c = self.modulus
        for x in range(self.p):
            if sum(ci * x ** i for i, ci in enumerate(c)) % self.p == 0:
                raise ValueError("modulus has a root")

    # element helpers
    def elem(self, v):
        if isinstance(v, FieldElem):
            if v.spec != self:
                raise ValueError("field mismatch")
            return v
        if isinstance(v, (tuple, list)):
            if len(v) != self.k:
                raise ValueError("wrong coordinate length")
            return FieldElem(self, tuple(int(c) % self.p for c in v))
        return FieldElem(self, (int(v) % self.p,) + (0,) * (self.k - 1))

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def gen(self):
        """Class of t in GF(p)[t]/(modulus); a primitive root when k = 1."""
        if self.k == 1:
            return self.primitive_root()
        return self.elem((0, 1))

    def elements(self):
        return [self.from_index(i) for i in range(self.q)]

    def from_index(self, i):
        c = []
        for _ in range(self.k):
            c.append(i % self.p)
            i //= self.p
        return FieldElem(self, tuple(c))

    def primitive_root(self):
        order = self.q - 1
        primes = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        for i in range(2, self.q):
            g = self.from_index(i)
            if all(g ** (order // r) != self.one() for r in primes):
                return g
        return self.one()  # q = 2 never reached; q = 3 gives 2 above

    def tables(self):
        """(add, mul, neg, inv) integer tables over element indices."""
        if self._tables is None:
            els = self.elements()
            q = self.q
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for i, a in enumerate(els):
                for j, b in enumerate(els):
                    add[i, j] = (a + b).index
                    mul[i, j] = (a * b).index
            neg = np.array([(-a).index for a in els], dtype=np.int64)
            inv = np.array([0] + [a.inverse().index for a in els[1:]], dtype=np.int64)
            object.__setattr__(self, "_tables", (add, mul, neg, inv))
        return self._tables


class FieldElem:
    __slots__ = ("spec", "c")

    def __init__(self, spec, c):
        self.spec = spec
        self.c = c

    @property
    def index(self):
        return sum(ci * self.spec.p ** i for i, ci in enumerate(self.c))

    def _other(self, b):
        if isinstance(b, FieldElem):
            if b.spec != self.spec:
                raise ValueError("mismatched fields")
            return b
        return self.spec.elem(b)

    def __add__(self, b):
        b = self._other(b)
        p = self.spec.p
        return FieldElem(self.spec, tuple((x + y) % p for x, y in zip(self.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElem(self.spec, tuple((-x) % p for x in self.c))

    def __sub__(self, b):
        return self + (-self._other(b))

    def __rsub__(self, b):
        return self._other(b) - self

    def __mul__(self, b):
        b = self._other(b)
        p, k = self.spec.p, self.spec.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(self.c):
            for j, y in enumerate(b.c):
                prod[i + j] += x * y
        mod = self.spec.modulus  # monic, low degree first
        for d in range(len(prod) - 1, k - 1, -1):
            lead = prod[d]
            if lead:
                for i in range(k):
                    prod[d - k + i] -= lead * mod[i]
                prod[d] = 0
        return FieldElem(self.spec, tuple(x % p for x in prod[:k]))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r, b = self.spec.one(), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def is_zero(self):
        return not any(self.c)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.spec.q)
        return self ** (self.spec.q - 2)

    def __truediv__(self, b):
        return self * self._other(b).inverse()

    def __rtruediv__(self, b):
        return self._other(b) * self.inverse()

    def __eq__(self, b):
        if isinstance(b, FieldElem):
            return self.spec == b.spec and self.c == b.c
        if isinstance(b, int):
            return self == self.spec.elem(b)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.q, self.c))

    def __int__(self):
        if any(self.c[1:]):
            raise ValueError("element not in the prime field")
        return self.c[0]

    def __repr__(self):
        if self.spec.k == 1:
            return str(self.c[0])
        return "+".join(f"{c}*t^{i}" if i else str(c) for i, c in enumerate(self.c) if c) or "0"


def field_arithmetic(a, b, op, n=None):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** n
    raise ValueError(f"unknown op {op}")


def frobenius(a, i=1):
    """a -> a^(q^i).  Polynomials: every variable to the q^i power (coefficients fixed)."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if isinstance(a, FieldElem):
        return a ** (a.spec.q ** i)
    return a.frobenius(i)


def binomial_mod_p(n, r, p):
    """C(n, r) mod p by Lucas' theorem."""
    if r < 0 or n < 0 or r > n:
        return 0
    out = 1
    while n or r:
        ni, ri = n % p, r % p
        if ri > ni:
            return 0
        out = out * comb(ni, ri) % p
        n //= p
        r //= p
    return out


def lucas_vec(n, r, p):
    """Vectorised C(n, r) mod p over integer arrays."""
    n = np.asarray(n, dtype=np.int64)
    r = np.asarray(r, dtype=np.int64)
    n, r = np.broadcast_arrays(n, r)
    small = np.array([[comb(a, b) % p for b in range(p)] for a in range(p)], dtype=np.int64)
    out = np.where((r >= 0) & (r <= n), 1, 0).astype(np.int64)
    nn, rr = n.copy(), np.where(r < 0, 0, r)
    while True:
        live = (nn > 0) | (rr > 0)
        if not live.any():
            break
        out = out * small[nn % p, rr % p] % p
        nn //= p
        rr //= p
    return out


def digit_sum(k, q):
    s = 0
    while k:
        s += k % q
        k //= q
    return s


def catalan(j):
    return comb(2 * j, j) // (j + 1)


def catalan_congruence(q, j):
    """Compare (-1)^j (q-1)(q-2-j)!/(j!(q-1-2j)!) with Cat(j) mod p.

    Returns (holds, lhs, rhs).
    """
    p, _ = prime_power(q)
    if not 0 <= j <= (q - 1) // 2:
        raise ValueError("j out of range")
    val = Fraction((-1) ** j * (q - 1) * factorial(q - 2 - j),
                   factorial(j) * factorial(q - 1 - 2 * j))
    if val.denominator % p == 0:
        raise ArithmeticError("denominator divisible by p")
    lhs = val.numerator * pow(val.denominator, -1, p) % p
    rhs = catalan(j) % p
    return lhs == rhs, lhs, rhs
