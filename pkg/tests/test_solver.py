import numpy as np
import pytest

from ortho_invar import invariants as inv
from ortho_invar.matgroup import generators
from ortho_invar.ring import Polynomial, T, render, s_frame
from ortho_invar.solver import (express, express_in_xi, hilbert_block, independence_check, invariant_dimension,
                                monomial_span_rank, nullspace_mod_p, r_valuation, rank_mod_p, solve_mod_p,
                                t0_adic_bound, variety_scan)

Q = 3


def test_linear_algebra_mod_p():
    A = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    assert rank_mod_p(A, 3) == 2
    N = nullspace_mod_p(A, 3)
    N = np.asarray(N)
    assert N.size and not (A @ (N.T if N.shape[-1] == 3 else N) % 3).any()
    x = solve_mod_p(np.array([[1, 1], [0, 2]]), np.array([2, 1]), 3)
    assert list(x) == [0, 2]


def test_invariant_dimensions():
    G = generators("oplus", 2, Q)
    assert invariant_dimension(G, 0, m=2, q=Q) == 1
    assert invariant_dimension(G, 2, m=2, q=Q) == 1
    assert [invariant_dimension(G, d, m=2, q=Q) for d in range(9)] == [1, 0, 1, 0, 2, 0, 2, 0, 3]
    P = generators("sylow", 2, Q)
    assert invariant_dimension(P, 2, m=2, q=Q) >= 1


def test_express_oracles():
    X = lambda i: inv.xi(i, 2, Q)
    ex = express(X(1) ** 2, [X(1)], names=["a"])
    assert ex.ok and render(ex.rep) == "a^2"
    u2 = inv.catalog(Q, 2).u()
    ex = express(X(0) ** Q * X(2) - u2, [X(0), X(1)], names=["a", "b"])
    assert ex.ok and ex.evaluate() == X(0) ** Q * X(2) - u2
    assert render(ex.rep) == "2*a^8 + 2*a^4*b^2 + b^4"
    bad = express(inv.var(2, Q, "y1") ** 2, [X(0)])
    assert not bad.ok


def test_express_in_xi_and_bounds():
    X = lambda i: inv.xi(i, 2, Q)
    ex = express_in_xi(X(0) ** 3 * X(1), 2, Q, top=1)
    assert ex.ok and ex.rep == T(1, Q, 0, 3) * T(1, Q, 1)
    assert t0_adic_bound(ex.rep) == 3
    assert r_valuation(T(2, Q, 1, Q)) == Q
    assert r_valuation(T(2, Q, 1, Q) - T(2, Q, 2) * T(2, Q, 1, (Q - 1) // 2)) == (Q + 1) // 2


def test_hilbert_block():
    assert hilbert_block([1], [0], 5) == [1] * 6
    # the full group at (2, 3) with H and Gamma
    G = generators("oplus", 2, Q)
    hb = hilbert_block(inv.hsop_degrees("H", 2, Q), inv.block_basis("Gamma", 2, Q).factor_degrees(), 20)
    assert hb == [invariant_dimension(G, d, m=2, q=Q) for d in range(21)]
    assert hilbert_block([2], [0], 4, relation_degs=[2]) == [1, 0, 0, 0, 0]


def test_variety_scans():
    H = inv.hsop("H", 2, Q)
    assert variety_scan(H) == [(0, 0, 0, 0)]
    assert variety_scan(H, ext=2) == [(0, 0, 0, 0)]
    fr = s_frame(2)
    assert variety_scan([Polynomial.var(fr, Q, i) for i in range(4)]) == [(0, 0, 0, 0)]
    assert len(variety_scan([inv.xi(0, 2, Q), inv.xi(1, 2, Q)])) == 33


def test_independence():
    ok, _ = independence_check([inv.xi(i, 2, Q) for i in range(4)], 20)
    assert ok
    x0 = inv.xi(0, 2, Q)
    ok, w = independence_check([x0, x0 ** 2], 4)
    assert not ok
    ok, _ = independence_check([inv.var(2, Q, "y1"), inv.var(2, Q, "x1")], 3)
    assert ok
