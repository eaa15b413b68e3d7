"""Randomised property suites (500 cases each)."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ortho_invar import invariants as inv
from ortho_invar.matgroup import act, closure, generators
from ortho_invar.ring import Polynomial, s_frame
from ortho_invar.solver import express
from ortho_invar.steenrod import adem_rhs, check_cartan, check_stability, steenrod

Q, M = 3, 2
FR = s_frame(M)
CASES = settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def polys(draw, max_deg=3, max_terms=3, homogeneous=True):
    deg = draw(st.integers(1, max_deg))
    k = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(k):
        if homogeneous:
            cuts = sorted(draw(st.lists(st.integers(0, deg), min_size=FR.n - 1, max_size=FR.n - 1)))
            e = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
        else:
            e = tuple(draw(st.lists(st.integers(0, max_deg), min_size=FR.n, max_size=FR.n)))
        terms[e] = draw(st.integers(1, Q - 1))
    f = Polynomial.from_terms(FR, Q, terms)
    return f if not f.is_zero() else Polynomial.var(FR, Q, 0)


_G = sorted(closure(generators("oplus", M, Q)), key=lambda g: g._key)
ELEMENTS = [_G[int(i)] for i in np.random.default_rng(7).choice(len(_G), 20, replace=False)]


@CASES
@given(polys(), polys(), st.integers(0, 8))
def test_cartan(f, g, i):
    assert check_cartan(f, g, i)[0]


@CASES
@given(polys(max_deg=4), st.integers(1, 4), st.integers(1, 11))
def test_adem(f, j, i):
    if i >= Q * j:
        i = i % (Q * j) or 1
    assert steenrod(steenrod(f, j), i) == adem_rhs(f, i, j)


@CASES
@given(polys(max_deg=4))
def test_stability(f):
    assert check_stability(f)[0]


@CASES
@given(polys(), st.integers(0, 19), st.integers(0, 6))
def test_steenrod_commutes_with_group(f, k, i):
    g = ELEMENTS[k]
    assert act(steenrod(f, i), g) == steenrod(act(f, g), i)


@CASES
@given(polys(homogeneous=False), polys(homogeneous=False), polys(homogeneous=False))
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero() and a + 0 == a and a * 1 == a


GENS = [inv.xi(0, M, Q), inv.xi(1, M, Q), inv.var(M, Q, "x1")]
GDEG = [2, 4, 1]


@CASES
@given(st.integers(2, 8), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(1, Q - 1)),
                                   min_size=1, max_size=4))
def test_express_soundness(d, picks):
    f = Polynomial.zero(FR, Q)
    for a, b, c in picks:
        rest = d - 2 * a - 4 * b
        if rest < 0:
            continue
        f = f + (GENS[0] ** a * GENS[1] ** b * GENS[2] ** rest).scale(c)
    if f.is_zero():
        return
    ex = express(f, GENS, names=["a", "b", "x"])
    assert ex.ok
    assert ex.evaluate() == f
