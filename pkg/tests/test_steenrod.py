import pytest

from ortho_invar import invariants as inv
from ortho_invar.ring import Polynomial, T, phi_eval, s_frame, t_frame
from ortho_invar.steenrod import (check_adem, check_cartan, phi_iso, psi1, psi_j, psi_series,
                                  psi_series_from_steenrod, r_steenrod, sigma, steenrod, steenrod_series)

Q = 3


def X(i, m=2, q=Q):
    return inv.xi(i, m, q)


def test_total_operation_on_xi0_xi1():
    s0 = steenrod_series(X(0))
    assert [s0[k] for k in range(3)] == [X(0), X(1), X(0) ** Q]
    s1 = steenrod_series(X(1))
    assert s1[1] == (X(0) ** Q).scale(2)
    assert s1[Q] == X(2)
    assert s1[Q + 1] == X(1) ** Q


def test_top_operation_on_xi_i():
    for i in range(2, 3):
        assert steenrod(X(i), Q ** i) == X(i + 1)


def test_cartan_and_adem_probes():
    assert steenrod(X(0) ** 2, 1) == (X(0) * X(1)).scale(2)
    ok, _ = check_cartan(X(0), X(0), 1)
    assert ok
    f = Polynomial.monomial(s_frame(2), Q, [3, 0, 0, 2])
    assert check_adem(1, 1, f)[0]
    with pytest.raises(ValueError):
        check_adem(3, 1, f)


def test_frobenius_rule():
    f = X(0) + inv.var(2, Q, "y2") ** 2
    f = X(0)
    for i in range(0, 2 * Q + 1):
        want = steenrod(f, i // Q) ** Q if i % Q == 0 else Polynomial.zero(f.frame, Q)
        assert steenrod(f ** Q, i) == want


def test_u2_low_operations_vanish():
    u2 = inv.catalog(Q, 2).u()
    for i in range(1, Q):
        assert steenrod(u2, i).is_zero()


def test_psi_routes_agree_and_xi0_formula():
    ser = psi_series(X(0))
    assert ser == psi_series_from_steenrod(X(0))
    assert ser[0] == X(0) ** Q
    assert ser[Q - 1] == -X(1)
    assert ser[2 * (Q - 1)] == X(0)


def test_psi1_basics():
    x1 = inv.var(2, Q, "x1")
    assert psi1(x1).is_zero()
    # psi1 of xi_0 is the sum X_i Y_i
    W = inv.X_(2, 2, Q) * inv.Y_(2, 2, Q)
    assert psi1(X(0)) == W
    f = X(1) + X(0) ** 2 * inv.var(2, Q, "y2") ** 2
    assert psi1(psi1(f)) == psi1(f) ** Q


def test_sigma_and_phi():
    s = sigma(X(0, 1))
    assert s == inv.var(2, Q, "y2") * inv.var(2, Q, "x2")
    for i in range(2):
        assert phi_iso(psi_j(X(i, 1), 0)) == psi_j(X(i, 2), 1)


def test_r_side_matches_s_side():
    F = T(2, Q, 0, 2) * T(2, Q, 1) + T(2, Q, 2)
    for i in range(0, 12):
        assert phi_eval(r_steenrod(F, i), 2) == steenrod(phi_eval(F, 2), i)
