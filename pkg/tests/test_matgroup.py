import numpy as np
import pytest

from ortho_invar import invariants as inv
from ortho_invar.matgroup import (GroupElem, act, closure, generators, group_elements, order_formula,
                                  orbit_linear, reynolds)
from ortho_invar.ring import LEX, lead_term, s_frame


def test_group_orders_small():
    assert len(closure(generators("oplus", 2, 3))) == 1152 == order_formula(2, 3)
    assert len(closure(generators("sylow", 2, 3))) == 9
    assert len(closure(generators("hook", 2, 3))) == 9
    assert len(closure([GroupElem.identity(2, 3)])) == 1


def test_borel_is_upper_triangular_part():
    G = group_elements(2, 3)
    B = [g for g in G if g.is_upper_triangular()]
    assert len(B) == 36
    assert len(closure(generators("borel", 2, 3))) == 36


def test_non_orthogonal_rejected():
    with pytest.raises(ValueError):
        GroupElem(np.diag([1, 1, 1, 2]), 3)


def test_right_action_law():
    rng = np.random.default_rng(0)
    G = sorted(closure(generators("oplus", 2, 3)), key=lambda g: g._key)
    f = inv.var(2, 3, "y1") ** 2 * inv.var(2, 3, "x2") + inv.var(2, 3, "y2")
    for _ in range(10):
        g, h = (G[int(i)] for i in rng.integers(0, len(G), 2))
        assert act(act(f, g), h) == act(f, g * h)


def test_orbits_and_norms():
    P = generators("sylow", 2, 3)
    x1 = inv.var(2, 3, "x1")
    assert orbit_linear(x1, P) == [x1]
    H = generators("hook", 2, 3)
    x2 = inv.var(2, 3, "x2")
    assert {str(f) for f in orbit_linear(x2, H)} == {str(x2), str(x2 - x1), str(x2 + x1)}
    cat = inv.catalog(3, 2)
    assert cat.N_x(1) == x1
    assert cat.N_x(2) == x2 ** 3 - x2 * x1 ** 2
    assert len(orbit_linear(inv.var(2, 3, "y1"), P)) == 3 ** 2
    assert cat.N_y(1).hom_degree() == 9


def test_reynolds():
    x0 = inv.xi(0, 2, 3)
    assert reynolds(x0, 2, 3) == x0
    cat = inv.catalog(3, 2)
    R = reynolds(cat.N_y(1) ** 2, 2, 3)
    assert lead_term(R, LEX) == ((18, 0, 0, 0), 1)
    with pytest.raises(ValueError):
        reynolds(inv.var(2, 3, "y2"), 2, 3)
