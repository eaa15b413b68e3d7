import json

import pytest

from ortho_invar import invariants as inv
from ortho_invar import verifier
from ortho_invar.ring import s_frame
from ortho_invar.steenrod import psi1
from ortho_invar.verifier import REGISTRY, Check, Outcome, SkipCheck, run_check, run_suite, select


def test_u2_identity_passes():
    r = run_check("u2_identity", q=3)
    assert r.status == "pass" and r.witness is None


def test_even_q_rejected():
    with pytest.raises(ValueError, match="q must be odd"):
        run_check("u2_identity", q=2)


def test_unknown_check():
    with pytest.raises(KeyError):
        run_check("no_such_check")


def test_skip_carries_reason():
    r = run_check("main_a", q=3, m=3)
    assert r.status == "skip" and r.reason


def test_fail_carries_witness(monkeypatch):
    def bad(q=3, heavy=False):
        return Outcome(False, {"q": q})

    def noisy(q=3, heavy=False):
        raise SkipCheck("budget exceeded")

    monkeypatch.setitem(REGISTRY, "zz_bad", Check("zz_bad", "always fails", bad, {"q": 3}, {}))
    monkeypatch.setitem(REGISTRY, "zz_skip", Check("zz_skip", "always skips", noisy, {"q": 3}, {}))
    r = run_check("zz_bad")
    assert r.status == "fail" and r.witness == {"q": 3}
    assert run_check("zz_skip").reason == "budget exceeded"


def test_reports_are_reproducible_and_order_independent():
    a = run_suite("xi_invariance,u2_identity,m2_c22", workers=1)
    b = run_suite("m2_c22,u2_identity,xi_invariance", workers=2)
    strip = lambda rs: [(r["name"], r["status"], r["witness"], r["details"]) for r in rs]
    assert strip(a) == strip(b)
    assert [r["name"] for r in a] == sorted(r["name"] for r in a)
    json.dumps(a)


def test_registry_covers_named_checks():
    names = {"xi_invariance", "variety_xi", "steenrod_cartan", "steenrod_adem", "steenrod_stability",
             "comst_formulas", "submax_formulas", "minpoly", "lex_lt", "hsop_variety", "dickson_reduction",
             "phibar_kernel_div", "nu_props", "minor_nu", "main_a", "main_b", "main_d", "main_e", "main_f",
             "minimal_generation_G", "hook_eq1_eq2", "hook_compliance", "hook_ring", "sylow_generation",
             "psij_lt", "phi_psi_commute", "sylow_khovanskii", "sylow_block", "sylow_rank", "sylow_minimal",
             "borel_ring", "reynolds_lt", "m2_c22", "m2_c22_steenrod", "m2_u2d", "m2_u2_st", "m2_u2d_st",
             "m2_c32", "m2_part_e", "steenrod_generation", "reynolds_d1", "u2_identity", "sylow_hilbert"}
    assert names <= set(REGISTRY)
    assert select("m2_*") == sorted(n for n in REGISTRY if n.startswith("m2_"))


@pytest.mark.parametrize("q,m", [(3, 2), (3, 3)])
def test_second_hook_relation_literal_form_fails(q, m):
    # the corrected right-hand side holds (checked by hook_eq1_eq2);
    # the form with xi_1 and xi_0 in place of xi_{j-1} and xi_j does not
    X = lambda i: inv.xi(i, m, q)
    x1 = inv.var(m, q, "x1")
    for j in range(1, 2 * m - 2):
        lhs = X(j) ** q - X(j + 1) * x1 ** (q - 1)
        literal = X(1) * x1 ** (q ** (j + 1) - 1) - (X(0) * x1 ** (q ** (j + 1) + q - 2)).scale(2) + psi1(X(j))
        assert lhs != literal
    r = run_check("hook_eq1_eq2", q=q, m=m)
    assert r.status == "pass"
    assert not any(r.details["literal_right_hand_side_holds"].values())


def test_dickson_parity_recorded():
    r = run_check("dickson_reduction", q=3, m=2)
    assert r.status == "pass"
    assert r.details["signs"] == {1: 1, 2: 1}
    par = r.details["ell_parity"]
    assert [par[i]["(-1)^ell"] for i in (1, 2)] == [-1, 1]


def test_orbit_route_matches_direct_d():
    cat = inv.catalog(3, 2)
    for k in (1, 2):
        d = cat.d(k)
        red = d.filter_keys((d.exps()[:, 2:] == 0).all(axis=1))
        r = verifier.d_on_y_span(k, 2, 2, 3)
        direct = sorted(red.terms().items())
        routed = sorted((e[:2], c) for e, c in ((e, c) for e, c in r.terms().items()))
        direct2 = sorted((e[:2], c) for e, c in direct)
        assert [e for e, _ in routed] == [e for e, _ in direct2]
        s = {(c * pow(c2, -1, 3)) % 3 for (_, c), (_, c2) in zip(routed, direct2)}
        assert len(s) == 1


def test_json_roundtrip(tmp_path):
    reps = run_suite("u2_identity")
    out = tmp_path / "r.json"
    verifier.write_json(reps, out)
    data = json.loads(out.read_text())
    assert data[0]["status"] == "pass" and set(data[0]) >= {"name", "anchor", "params", "status", "witness",
                                                            "reason", "seconds"}
