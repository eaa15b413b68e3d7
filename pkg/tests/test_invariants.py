import pytest

from ortho_invar import invariants as inv
from ortho_invar.matgroup import act, generators
from ortho_invar.ring import LEX, T, lead_term, parse, render, s_frame, t_frame
from ortho_invar.steenrod import psi1, steenrod

Q = 3


def test_xi_definitions():
    assert inv.xi(0, 2, Q) == parse("y1*x1 + y2*x2", s_frame(2), Q)
    assert inv.xi(1, 1, Q) == parse("y1^3*x1 + y1*x1^3", s_frame(1), Q)
    with pytest.raises(ValueError):
        inv.xi(0, 2, 4)


def test_small_rank_objects():
    c1 = inv.catalog(Q, 1)
    assert c1.u() == inv.xi(0, 1, Q)
    assert c1.d(1) == parse("y1^2 + x1^2", s_frame(1), Q)


def test_degrees():
    assert inv.deg_u(2, 3) == 16
    assert inv.deg_d(1, 2, 3) == 18
    assert inv.deg_d(2, 2, 3) == 24
    assert [inv.deg_xi(i, 3) for i in range(4)] == [2, 4, 10, 28]
    cat = inv.catalog(3, 2)
    assert cat.u().hom_degree() == 16
    assert cat.d(1).hom_degree() == 18
    assert cat.d(1, by_factors=True) == cat.d(1)


def test_u2d1_quotient():
    cat = inv.catalog(Q, 2)
    u = cat.u()
    assert steenrod(u, 9) == u * cat.d(1)


def test_invariance_of_u_and_d():
    cat = inv.catalog(Q, 2)
    G = generators("oplus", 2, Q)
    for f in (cat.d(1), cat.d(2)):
        assert all(act(f, g) == f for g in G)
    # u_2 is only semi-invariant (the Weyl element can change its sign)
    assert all(act(cat.u(), g) in (cat.u(), -cat.u()) for g in G)


def test_c22_closed_forms():
    assert render(inv.c22_T(3)) == "T1^2*T0 + T0^5"
    assert render(inv.c22_T(5)) == "T1^4*T0 + T1^2*T0^7 + 2*T0^13"


def test_minors():
    assert inv.minor_M(0, 2, Q) == (T(3, Q, 2) * T(3, Q, 0, Q) - T(3, Q, 1, Q + 1))
    assert inv.minor_M(2, 2, Q) == (T(3, Q, 3) * T(3, Q, 1, Q) - T(3, Q, 2, Q + 1))


def test_dickson():
    y1, y2 = inv.var(2, Q, "y1"), inv.var(2, Q, "y2")
    assert inv.dickson(1, [y1]) == y1 ** (Q - 1)
    assert inv.dickson(1, [y1, y2]).hom_degree() == Q * Q - Q
    with pytest.raises(ValueError):
        inv.dickson(1, [y1, y1])


def test_dickson_signs_recorded():
    # d_{i,2} mod x = sign * (Dickson d_i)^q, signs frozen from computation
    cat = inv.catalog(Q, 2)
    fr = s_frame(2)
    ys = [inv.var(2, Q, "y1"), inv.var(2, Q, "y2")]
    got = {}
    for i in (1, 2):
        d = cat.d(i)
        keep = (d.exps()[:, 2:] == 0).all(axis=1)
        red = d.filter_keys(keep)
        D = inv.dickson(i, ys) ** Q
        got[i] = 1 if red == D else (-1 if red == -D else 0)
    assert got == {1: 1, 2: 1}


def test_block_bases():
    assert len(inv.block_basis("Gamma", 2, Q)) == Q
    assert len(inv.block_basis("Gamma0", 2, Q)) == Q ** 2
    assert inv.block_basis("Gamma0", 2, Q).top == [Q - 1, Q - 1]


def test_compliance():
    x1, y1 = inv.var(2, Q, "x1"), inv.var(2, Q, "y1")
    assert inv.nu1(x1 ** 2 * y1 + x1 ** 3) == 2
    Ny = inv.hook_norm_y1(2, Q)
    assert inv.is_compliant(Ny)
    assert inv.is_strongly_compliant(x1 * Ny - inv.xi(2, 2, Q))
    assert inv.lemma_digit_check(kmax=2000) is None


def test_peeling_rebuilds():
    x1 = inv.var(2, Q, "x1")
    f = x1 * inv.hook_norm_y1(2, Q) - inv.xi(2, 2, Q)
    pr = inv.peel_strongly_compliant(f, 2, Q)
    assert pr.ok and pr.rebuild(2, Q) == f
    for _, c in pr.pieces:
        assert c.collect("y1").keys() <= {0}


def test_hsop_degrees():
    assert inv.hsop_degrees("H", 2, Q) == [2, 4, 18, 24]
    assert inv.hsop_degrees("H0", 2, Q) == [9, 3, 3, 1]
