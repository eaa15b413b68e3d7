"""Acceptance criteria 1-15; one PASS/FAIL line per criterion.

Runs under pytest, or directly with `python3 tests/test_acceptance.py`.
Long variants (q = 5 direct lead terms, heavy tiers) run when
ORTHO_INVAR_HEAVY=1.
"""
import os
import sys

import pytest

from ortho_invar import invariants as inv
from ortho_invar.verifier import run_check

HEAVY = os.environ.get("ORTHO_INVAR_HEAVY") == "1"


def _run(*cases):
    """Run (name, kwargs) pairs; returns (all passed, failure notes)."""
    notes = []
    for name, kw in cases:
        r = run_check(name, **kw)
        if r.status != "pass":
            notes.append(f"{name}{kw}: {r.status} {r.witness or r.reason}")
    return not notes, notes


def _report(capsys, n, title, ok, notes=()):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    for s in notes:
        if capsys is None:
            print("    " + s)
        else:
            with capsys.disabled():
                print("    " + s)
    assert ok, notes


def criterion_1():
    return _run(("group_orders", {}))


def criterion_2():
    return _run(*[("xi_invariance", {"q": q, "m": m}) for m, q in ((1, 3), (2, 3), (2, 5), (3, 3))])


def criterion_3():
    return _run(*[("u2_identity", {"q": q}) for q in (3, 5, 7)])


def criterion_4():
    ok, notes = _run(("minpoly", {"q": 3, "m": 2}), ("minpoly", {"q": 5, "m": 2}), ("minpoly", {"q": 3, "m": 3}))
    r = run_check("minpoly", q=3, m=2)
    if r.details.get("orbit_size") != 32 or set(r.details.get("coefficient_signs", {}).values()) - {1, -1}:
        ok, notes = False, notes + [f"orbit details {r.details}"]
    return ok, notes


def criterion_5():
    cases = [("lex_lt", {"q": 3, "m": 2}), ("lex_lt", {"q": 5, "m": 2}), ("lex_lt", {"q": 3, "m": 3})]
    if HEAVY:
        cases.append(("lex_lt", {"q": 5, "m": 2, "heavy": True}))
    return _run(*cases)


def criterion_6():
    return _run(("hsop_variety", {"q": 3, "m": 2}), ("dickson_reduction", {"q": 3, "m": 2}))


def criterion_7():
    ok, notes = _run(("variety_xi", {"q": 3, "m": 2}))
    r = run_check("variety_xi", q=3, m=2)
    if r.details.get("points") != 33:
        ok, notes = False, notes + [f"points {r.details.get('points')}"]
    return ok, notes


def criterion_8():
    return _run(("hook_eq1_eq2", {"q": 3, "m": 2}), ("hook_eq1_eq2", {"q": 3, "m": 3}),
                ("hook_compliance", {"q": 3, "m": 2}), ("hook_tetes", {"q": 3, "m": 2}))


def criterion_9():
    return _run(("sylow_khovanskii", {"q": 3, "m": 2, "D": 24}), ("sylow_khovanskii", {"q": 3, "m": 3, "D": 12}),
                ("sylow_block", {"q": 3, "m": 2, "D": 24}), ("sylow_rank", {"q": 3, "m": 2}),
                ("sylow_rank", {"q": 3, "m": 3}), ("sylow_lead_monomials", {"q": 3, "m": 3}))


def criterion_10():
    return _run(("sylow_minimal", {"q": 3, "m": 2}), ("minimal_generation_G", {"q": 3, "m": 2}))


def criterion_11():
    return _run(("borel_ring", {"q": 3, "m": 2, "D": 24}))


def criterion_12():
    return _run(("reynolds_lt", {"q": 3, "m": 2}), ("reynolds_d1", {"q": 3, "m": 2}))


def criterion_13():
    names = ["m2_c22_steenrod", "m2_u2d", "m2_u2_st", "m2_u2d_st", "m2_c32", "m2_part_e",
             "main_a", "main_b", "main_d", "main_e"]
    cases = [(n, {"q": 3}) for n in names] + [(n, {"q": 5}) for n in names]
    if HEAVY:
        cases += [(n, {"q": 5, "heavy": True}) for n in names]
    return _run(*cases)


def criterion_14():
    ok, notes = _run(("steenrod_generation", {"q": 3, "m": 2}))
    r = run_check("steenrod_generation", q=3, m=2)
    if r.details.get("reached", {}).get(2, {}).get("without_closure") is not False:
        ok, notes = False, notes + ["d_2 already expressible without the Steenrod closure"]
    return ok, notes


def criterion_15():
    import test_properties as tp
    notes = []
    for fn in (tp.test_cartan, tp.test_adem, tp.test_stability, tp.test_steenrod_commutes_with_group,
               tp.test_ring_axioms, tp.test_express_soundness):
        try:
            fn()
        except Exception as e:  # hypothesis re-raises the falsifying example
            notes.append(f"{fn.__name__}: {type(e).__name__}: {e}")
    ok2, n2 = _run(("steenrod_cartan", {}), ("steenrod_adem", {}), ("steenrod_stability", {}),
                   ("steenrod_equivariance", {}), ("ring_axioms", {}), ("express_soundness", {}))
    return not notes and ok2, notes + n2


TITLES = {
    1: "group orders (full group, Sylow, Hook)",
    2: "xi_i invariant under the generators",
    3: "u_2 identity with the Catalan closed form; Catalan congruence",
    4: "psi_1(u_m) = 0; psi(u_2)/u_2 is the x_1-orbit polynomial with coefficients +-d_i",
    5: "lex lead terms of u_m and d_{1,m}",
    6: "H has only the trivial zero over F_3 and F_9; d_i mod x is +-Dickson^q",
    7: "zero set of xi_0, xi_1 equals the translates of the isotropic span (33 points)",
    8: "hook relations, compliance and tete-a-tetes",
    9: "Sylow Khovanskii basis, block Hilbert series, rank",
    10: "minimal generating sets",
    11: "Borel invariants and their Hilbert series",
    12: "Reynolds image of N(y1)^(q-1)",
    13: "m = 2 base case identities and the main statement at m = 2",
    14: "Steenrod closure of {xi_0, d_1} reaches d_2",
    15: "property suites (500 cases each)",
}


@pytest.mark.parametrize("n", sorted(TITLES))
def test_criterion(n, capsys):
    ok, notes = globals()[f"criterion_{n}"]()
    _report(capsys, n, TITLES[n], ok, notes)


if __name__ == "__main__":
    sys.path.insert(0, os.path.dirname(__file__))
    bad = 0
    for n in sorted(TITLES):
        ok, notes = globals()[f"criterion_{n}"]()
        try:
            _report(None, n, TITLES[n], ok, notes)
        except AssertionError:
            bad += 1
    sys.exit(1 if bad else 0)
