from ortho_invar import invariants as inv
from ortho_invar.khovanskii import (factor_exponent, hook_basis, khovanskii_verify, subduct, sylow_basis,
                                    tete_a_tete_labels, tete_a_tetes)
from ortho_invar.matgroup import generators

Q = 3


def test_subduction_trivial_cases():
    g = inv.xi(1, 2, Q)
    tr = subduct(g, [g])
    assert tr.reduced and len(tr.steps) == 1
    y1, x1 = inv.var(2, Q, "y1"), inv.var(2, Q, "x1")
    tr = subduct(y1, [x1])
    assert not tr.reduced and tr.residue == y1


def test_hook_tete_a_tete_first_relation():
    x1 = inv.var(2, Q, "x1")
    t = inv.xi(0, 2, Q) ** Q - x1 ** (Q - 1) * inv.xi(1, 2, Q)
    tr = subduct(t, hook_basis(2, Q).polys)
    assert tr.reduced and tr.reconstruct() == t


def test_relation_counts():
    assert len(tete_a_tete_labels("hook", 2, Q)) == 2
    borel_extra = [lab for lab in tete_a_tete_labels("borel", 2, Q) if lab.startswith("(N")]
    assert len(borel_extra) == 2
    assert len(tete_a_tetes("hook", 2, Q)) == 2


def test_factor_exponent():
    assert factor_exponent((4, 2), [(2, 1), (1, 0)]) == [2, 0]
    assert factor_exponent((1, 1), [(2, 0)]) is None


def test_khovanskii_insufficient_generators():
    v = khovanskii_verify([inv.xi(0, 2, Q)], generators("sylow", 2, Q), 4)
    assert not v.passed


def test_sylow_small_degrees():
    gs = sylow_basis(2, Q, max_degree=12)
    v = khovanskii_verify(gs.polys, generators("sylow", 2, Q), 12, tete_a_tetes("sylow", 2, Q, skip_degree=12),
                          labels=tete_a_tete_labels("sylow", 2, Q))
    assert v.passed
    assert v.invariant[:6] == [1, 1, 2, 4, 6, 8]
