import pytest

from ortho_invar import invariants as inv
from ortho_invar.ring import (GREVLEX, LEX, InexactDivision, Polynomial, T, exact_divide, from_json, lead_term,
                              parse, phi_eval, render, s_degree, s_frame, substitute, t_frame, to_json,
                              weighted_grevlex)

Q = 3


def v(name, m=2):
    return inv.var(m, Q, name)


def test_basic_products_and_frobenius():
    a = v("y1") * v("x1")
    assert a * a == parse("y1^2*x1^2", s_frame(2), Q)
    assert (v("y1") + v("x1")) ** Q == v("y1") ** Q + v("x1") ** Q
    assert v("y1").frobenius() == v("y1") ** Q


def test_xi0_square():
    x0 = inv.xi(0, 2, Q)
    assert x0 ** 2 == parse("y1^2*x1^2 + 2*y1*x1*y2*x2 + y2^2*x2^2", s_frame(2), Q)


def test_lex_lead_terms_of_xi():
    fr = s_frame(2)
    for i in range(4):
        e, c = lead_term(inv.xi(i, 2, Q), LEX)
        want = [0] * fr.n
        want[fr.index("y1")] = Q ** i if i else 1
        want[fr.index("x1")] = 1
        assert list(e) == want and c == 1


def test_weighted_grevlex_on_T():
    fr = t_frame(2, Q)
    f = T(2, Q, 0, 3) * T(2, Q, 2) - T(2, Q, 1, 4)
    e, c = lead_term(f, weighted_grevlex(fr))
    assert e == (0, 4, 0) and c == Q - 1


def test_constant_lead_term():
    c = Polynomial.const(s_frame(2), Q, 2)
    assert lead_term(c, GREVLEX) == ((0, 0, 0, 0), 2)


def test_exact_division():
    a = v("y1") ** 2 * v("x1") ** 2
    assert exact_divide(a, v("y1") * v("x1")) == v("y1") * v("x1")
    with pytest.raises(InexactDivision) as err:
        exact_divide(a + v("y2") ** 4, v("y1") * v("x1"))
    assert err.value.witness is not None


def test_substitute():
    fr = s_frame(2)
    x0 = inv.xi(0, 2, Q)
    ident = [Polynomial.var(fr, Q, i) for i in range(fr.n)]
    assert substitute(x0, ident) == x0
    kill_x = [Polynomial.var(fr, Q, i) if fr.names[i][0] == "y" else Polynomial.zero(fr, Q) for i in range(fr.n)]
    assert substitute(x0, kill_x).is_zero()


def test_phi_eval():
    assert phi_eval(T(0, Q, 0), 2) == inv.xi(0, 2, Q)
    assert phi_eval(Polynomial.const(t_frame(0, Q), Q, 1), 2) == Polynomial.const(s_frame(2), Q, 1)
    F = T(2, Q, 0, Q) * T(2, Q, 2) - T(2, Q, 1, Q + 1)
    assert s_degree(F) == 16
    X = lambda i: inv.xi(i, 2, Q)
    assert phi_eval(F, 2) == X(0) ** Q * X(2) - X(1) ** (Q + 1)


def test_parse_render_json():
    fr = s_frame(2)
    assert parse("y1*x1 + y2*x2", fr, Q) == inv.xi(0, 2, Q)
    assert render(Polynomial.zero(fr, Q)) == "0"
    u2 = inv.catalog(Q, 2).u()
    assert parse(render(u2), fr, Q) == u2
    assert from_json(to_json(u2)) == u2
    with pytest.raises(ValueError):
        parse("y1 + z9", fr, Q)


def test_frame_mismatch():
    with pytest.raises(ValueError):
        inv.xi(0, 2, Q) + inv.xi(0, 1, Q)
