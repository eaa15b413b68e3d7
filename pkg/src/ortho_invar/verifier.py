"""Registry of named checks and the suite runner.

Every check rebuilds what it needs from the constructors (no cross-check
caching of results), returns pass or fail with a witness, or skips with a
reason.  Anchors name the statement being exercised in words.
"""
from __future__ import annotations

import fnmatch
import inspect
import json
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import invariants as inv
from .gf import FieldSpec, catalan, catalan_congruence
from .khovanskii import (hook_basis, khovanskii_verify, subduct, sylow_basis, tete_a_tete_labels,
                         tete_a_tetes)
from .matgroup import act, closure, generators, order_formula, reynolds
from .ring import (GREVLEX, LEX, Polynomial, T, exact_divide, lead_term, phi_eval, render, s_frame,
                   t_frame, weighted_grevlex)
from .solver import (express, express_in_xi, hilbert_block, invariant_dimension, monomial_span_rank,
                     r_valuation, t0_adic_bound, variety_scan)
from .steenrod import (adem_rhs, check_adem, check_cartan, check_stability, phi_iso, psi1, psi_j,
                       psi_series, psi_series_from_steenrod, r_steenrod, sigma, steenrod, steenrod_series)


# ---------------------------------------------------------------- reports

@dataclass
class CheckReport:
    name: str
    anchor: str
    params: dict
    status: str
    witness: object = None
    reason: str = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return _jsonable(asdict(self))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Polynomial):
        return render(x) if x.nterms < 200 else f"<{x.nterms} terms, lead {lead_term(x)}>"
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


class SkipCheck(Exception):
    pass


class Outcome:
    def __init__(self, ok, witness=None, **details):
        self.ok = bool(ok)
        self.witness = witness
        self.details = details


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    fn: object
    defaults: dict
    heavy: dict


REGISTRY = {}


def check(name, anchor, heavy=None, **defaults):
    def wrap(fn):
        REGISTRY[name] = Check(name, anchor, fn, dict(defaults), dict(heavy or {}))
        return fn
    return wrap


def _params(c, q=None, m=None, D=None, heavy=False):
    p = dict(c.defaults)
    if heavy:
        p.update(c.heavy)
    accepted = inspect.signature(c.fn).parameters
    for k, v in (("q", q), ("m", m), ("D", D)):
        if v is not None and k in accepted:
            p[k] = v
    p["heavy"] = bool(heavy)
    return p


def run_check(name, q=None, m=None, D=None, heavy=False):
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}")
    c = REGISTRY[name]
    p = _params(c, q, m, D, heavy)
    if "q" in p:
        if p["q"] % 2 == 0:
            raise ValueError("q must be odd")
        fs = FieldSpec(p["q"])
        if fs.k != 1:
            raise ValueError("checks run over prime fields")
    t0 = time.time()
    try:
        out = c.fn(**p)
    except SkipCheck as e:
        return CheckReport(name, c.anchor, p, "skip", reason=str(e), seconds=time.time() - t0)
    except (MemoryError, RecursionError) as e:
        return CheckReport(name, c.anchor, p, "skip", reason=f"budget exceeded: {e}", seconds=time.time() - t0)
    dt = time.time() - t0
    if out.ok:
        return CheckReport(name, c.anchor, p, "pass", seconds=dt, details=out.details)
    w = out.witness if out.witness is not None else "no witness recorded"
    return CheckReport(name, c.anchor, p, "fail", witness=w, seconds=dt, details=out.details)


def _run_one(args):
    name, kw = args
    try:
        return run_check(name, **kw).to_dict()
    except Exception as e:  # reported, never swallowed silently
        return {"name": name, "anchor": REGISTRY[name].anchor, "params": kw, "status": "fail",
                "witness": f"{type(e).__name__}: {e}", "reason": traceback.format_exc(limit=3),
                "seconds": 0.0, "details": {}}


def select(pattern="*"):
    pats = [s.strip() for s in pattern.split(",") if s.strip()] or ["*"]
    return sorted(n for n in REGISTRY if any(fnmatch.fnmatch(n, p) for p in pats))


def run_suite(pattern="*", q=None, m=None, D=None, heavy=False, workers=1):
    """Run the matching checks; returns report dicts sorted by name."""
    names = select(pattern)
    jobs = [(n, {"q": q, "m": m, "D": D, "heavy": heavy}) for n in names]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            out = list(ex.map(_run_one, jobs))
    else:
        out = [_run_one(j) for j in jobs]
    return sorted(out, key=lambda r: r["name"])


def write_json(reports, path):
    with open(path, "w") as fh:
        json.dump([r if isinstance(r, dict) else r.to_dict() for r in reports], fh, indent=1)


# ---------------------------------------------------------------- small helpers

def _rng(q, m, salt=0):
    return np.random.default_rng(1000 * q + 10 * m + salt)


def random_poly(frame, q, rng, nterms=4, degree=3, homogeneous=True):
    n = frame.n
    terms = {}
    for _ in range(nterms):
        if homogeneous:
            cut = np.sort(rng.integers(0, degree + 1, size=n - 1))
            e = np.diff(np.concatenate([[0], cut, [degree]]))
        else:
            e = rng.integers(0, degree + 1, size=n)
        terms[tuple(int(v) for v in e)] = int(rng.integers(1, q))
    return Polynomial.from_terms(frame, q, terms)


def _xi_rep(f, m, q, top=None):
    ex = express_in_xi(f, m, q, top=top)
    return ex.rep if ex.ok else None


def _t3_degree(F, k):
    if F.is_zero():
        return 0
    return int(F.frame.var_exp(F.keys, F.frame.index(f"T{k}")).max())


def _drop_top(F, k):
    """View F (in R_{k+1}) inside R_k; raises if T_{k+1} occurs."""
    tgt = t_frame(k, F.p)
    mapping = [tgt.index(nm) if nm in tgt.names else None for nm in F.frame.names]
    return F.embed(tgt, mapping)


def _R(k, q, expr_terms):
    return Polynomial.from_terms(t_frame(k, q), q, expr_terms)


def _Tm(k, q, **exps):
    """Monomial in R_k given as T<j>=e keyword exponents."""
    fr = t_frame(k, q)
    e = [0] * fr.n
    for nm, v in exps.items():
        e[fr.index(nm)] = v
    return Polynomial.monomial(fr, q, e)


def _u2_R(q, k=3):
    return inv.u2_T(q).embed(t_frame(k, q))


def _ud_R(q):
    """u2 d_{1,2} and u2 d_{2,2} in R_3 through the R-side Steenrod operations."""
    u2 = inv.u2_T(q)
    a = _drop_top(r_steenrod(u2, q * q), 3)
    b = _drop_top(r_steenrod(u2, q * q + q), 3)
    return a, b


def _weighted_lt(F):
    return lead_term(F, weighted_grevlex(F.frame))


def _need_heavy(heavy, why):
    if not heavy:
        raise SkipCheck(f"needs --heavy ({why})")


# ---------------------------------------------------------------- groups and xi

@check("group_orders", "orders of the generated groups (full group, Sylow and Hook subgroups)")
def _group_orders(q=3, m=2, heavy=False):
    rows = {}
    bad = None
    cases = [("oplus", 2, 3)] + [("sylow", mm, qq) for mm, qq in ((2, 3), (2, 5), (3, 3))] + \
            [("hook", mm, qq) for mm, qq in ((2, 3), (2, 5), (3, 3))]
    for kind, mm, qq in cases:
        got = len(closure(generators(kind, mm, qq)))
        want = {"oplus": order_formula(mm, qq), "sylow": qq ** (mm * (mm - 1)),
                "hook": qq ** (2 * mm - 2)}[kind]
        rows[f"{kind}({mm},{qq})"] = got
        if got != want and bad is None:
            bad = {"group": kind, "m": mm, "q": qq, "order": got, "expected": want}
    return Outcome(bad is None, bad, orders=rows)


@check("xi_invariance", "xi_i are fixed by the full orthogonal group", q=3, m=2)
def _xi_invariance(q=3, m=2, heavy=False):
    gens = generators("oplus", m, q)
    for i in range(2 * m):
        f = inv.xi(i, m, q)
        for k, g in enumerate(gens):
            if act(f, g) != f:
                return Outcome(False, {"i": i, "generator": k, "matrix": g.matrix.tolist()})
    return Outcome(True, generators=len(gens), top=2 * m - 1)


@check("variety_xi", "zero set of xi_0..xi_{m-1} is the union of translates of the maximal isotropic span", q=3, m=2)
def _variety_xi(q=3, m=2, heavy=False):
    n = 2 * m
    pts = set(variety_scan([inv.xi(i, m, q) for i in range(m)]))
    G = closure(generators("oplus", m, q))
    # coordinates of span{e_1..e_m}: the x-coordinates vanish
    base = []
    for c in np.indices((q,) * m).reshape(m, -1).T:
        v = np.zeros(n, np.int64)
        v[:m] = c
        base.append(v)
    union = set()
    for g in G:
        for v in base:
            union.add(tuple(int(a) for a in g.matrix @ v % q))
    # points are stored as field indices, which agree with residues over a prime field
    if pts != union:
        diff = sorted(pts ^ union)[:5]
        return Outcome(False, {"symmetric_difference": diff, "scan": len(pts), "union": len(union)})
    return Outcome(True, points=len(pts), group_order=len(G))


# ---------------------------------------------------------------- Steenrod basics

def _probe_polys(q, m, rng, count, degree=3, nterms=3):
    fr = s_frame(m)
    return [random_poly(fr, q, rng, nterms=nterms, degree=int(rng.integers(1, degree + 1))) for _ in range(count)]


@check("steenrod_cartan", "Cartan formula on random probes", q=3, m=2, D=20)
def _steenrod_cartan(q=3, m=2, D=20, heavy=False):
    rng = _rng(q, m, 1)
    fs = _probe_polys(q, m, rng, 2 * D)
    for k in range(D):
        f, g = fs[2 * k], fs[2 * k + 1]
        top = f.hom_degree() + g.hom_degree()
        for i in range(top + 2):
            ok, w = check_cartan(f, g, i)
            if not ok:
                return Outcome(False, {"f": render(f), "g": render(g), "i": i, "lead_of_difference": w})
    return Outcome(True, probes=D)


@check("steenrod_adem", "Adem relations on random probes", q=3, m=2, D=10)
def _steenrod_adem(q=3, m=2, D=10, heavy=False):
    rng = _rng(q, m, 2)
    fs = _probe_polys(q, m, rng, D, degree=4)
    count = 0
    for f in fs:
        d = f.hom_degree()
        for j in range(1, d + 1):
            for i in range(1, min(q * j, d * q)):
                if i + j > q * d + d:
                    continue
                ok, w = check_adem(i, j, f)
                count += 1
                if not ok:
                    return Outcome(False, {"f": render(f), "i": i, "j": j, "lead_of_difference": w})
    return Outcome(True, relations=count)


@check("steenrod_stability", "P^0 = id, P^deg f = f^q, P^i f = 0 above the degree", q=3, m=2, D=30)
def _steenrod_stability(q=3, m=2, D=30, heavy=False):
    rng = _rng(q, m, 3)
    for f in _probe_polys(q, m, rng, D, degree=4):
        ok, w = check_stability(f)
        if not ok:
            return Outcome(False, {"f": render(f), "lead_of_difference": w})
    # the Frobenius rule: P^i(f^q) vanishes unless q | i
    for f in _probe_polys(q, m, rng, 5, degree=2):
        F = f ** q
        for i in range(q * f.hom_degree() + 1):
            want = steenrod(f, i // q) ** q if i % q == 0 else Polynomial.zero(f.frame, q)
            if steenrod(F, i) != want:
                return Outcome(False, {"f": render(f), "i": i, "rule": "P^i(f^q)"})
    return Outcome(True, probes=D)


@check("steenrod_equivariance", "P^i commutes with the group action (20 random elements)", q=3, m=2, D=20)
def _steenrod_equivariance(q=3, m=2, D=20, heavy=False):
    rng = _rng(q, m, 4)
    G = sorted(closure(generators("oplus", m, q)), key=lambda g: g._key)
    picks = rng.choice(len(G), size=min(D, len(G)), replace=False)
    fs = _probe_polys(q, m, rng, len(picks), degree=3)
    for k, f in zip(picks, fs):
        g = G[int(k)]
        for i in range(f.hom_degree() + 1):
            if act(steenrod(f, i), g) != steenrod(act(f, g), i):
                return Outcome(False, {"f": render(f), "i": i, "g": g.matrix.tolist()})
    return Outcome(True, elements=len(picks))


@check("comst_formulas", "total Steenrod operation on xi_0, xi_1 and xi_i", q=3, m=2)
def _comst(q=3, m=2, heavy=False):
    n = 2 * m
    X = lambda i: inv.xi(i, m, q)
    zero = Polynomial.zero(s_frame(m), q)

    def expect(i):
        d = X(i).hom_degree()
        slots = [zero] * (d + 1)
        if i == 0:
            slots[0], slots[1], slots[2] = X(0), X(1), X(0) ** q
        elif i == 1:
            slots[0] = X(1)
            slots[1] = X(0).frobenius().scale(2)
            slots[q] = X(2)
            slots[q + 1] = X(1) ** q
        else:
            slots[0] = X(i)
            slots[1] = X(i - 1) ** q
            slots[q ** i] = X(i + 1)
            slots[q ** i + 1] = X(i) ** q
        return slots

    for i in range(n):
        ser = steenrod_series(X(i))
        want = expect(i)
        for k, w in enumerate(want):
            if ser[k] != w:
                return Outcome(False, {"i": i, "slot": k})
    return Outcome(True, checked=list(range(n)))


@check("submax_formulas", "P^{i+j-1}(ab) and the xi_0 multiples just below the top", q=3, m=2, D=12)
def _submax(q=3, m=2, D=12, heavy=False):
    rng = _rng(q, m, 5)
    X0, X1 = inv.xi(0, m, q), inv.xi(1, m, q)
    fs = _probe_polys(q, m, rng, 2 * D, degree=3)
    for k in range(D):
        a, b = fs[2 * k], fs[2 * k + 1]
        i, j = a.hom_degree(), b.hom_degree()
        if steenrod(a * b, i + j - 1) != a ** q * steenrod(b, j - 1) + b ** q * steenrod(a, i - 1):
            return Outcome(False, {"part": "a", "a": render(a), "b": render(b)})
        if steenrod(X0 * b, j + 1) != X1 * b ** q + X0 ** q * steenrod(b, j - 1):
            return Outcome(False, {"part": "b", "b": render(b)})
        if steenrod(X0 ** 2 * b, j + 3) != (X0 ** q * X1 * b ** q).scale(2) + X0 ** (2 * q) * steenrod(b, j - 1):
            return Outcome(False, {"part": "c", "b": render(b)})
        if steenrod(X0 ** q * b, 2 * q + j - 1) != X0 ** (q * q) * steenrod(b, j - 1):
            return Outcome(False, {"part": "d", "b": render(b)})
    return Outcome(True, probes=D)


# ---------------------------------------------------------------- new invariants

@check("minpoly", "psi_1 kills u_m; psi(u_m)/u_m is the orbit polynomial of x_1", q=3, m=2,
       heavy={"m": 3})
def _minpoly(q=3, m=2, heavy=False):
    cat = inv.catalog(q, m)
    u = cat.u()
    if not psi1(u).is_zero():
        return Outcome(False, {"psi1(u_m)": "nonzero", "lead": lead_term(psi1(u))})
    details = {"psi1_u_zero": True}
    if m == 2 and q == 3 or (heavy and m == 2):
        # orbit of x1 under the full group
        G = closure(generators("oplus", m, q))
        x1 = inv.var(m, q, "x1")
        orbit = {}
        for g in G:
            h = act(x1, g)
            orbit[h.keys.tobytes() + h.coeffs.tobytes()] = h
        orbit = list(orbit.values())
        want_size = (q ** m - 1) * (q ** (m - 1) + 1)
        if len(orbit) != want_size:
            return Outcome(False, {"orbit_size": len(orbit), "expected": want_size})
        ext = s_frame(m).extend(["t"])
        t = Polynomial.var(ext, q, ext.index("t"))
        prod = Polynomial.const(ext, q, 1)
        for h in orbit:
            prod = prod * (t - h.embed(ext, list(range(2 * m))))
        from .steenrod import split_t
        prod_ser = split_t(prod)
        ser = psi_series(u)
        ser2 = psi_series_from_steenrod(u)
        if ser != ser2:
            return Outcome(False, {"psi_series": "substitution and Steenrod routes disagree"})
        quot = [exact_divide(c, u) if not c.is_zero() else c for c in ser.trimmed()]
        from .steenrod import TSeries
        if TSeries(quot) != prod_ser:
            return Outcome(False, {"orbit_product": "differs from psi(u)/u"})
        d = u.hom_degree()
        signs = {}
        for i in range(1, m + 1):
            e = inv.e_index(i, m, q)
            ell = d - e
            c = quot[(q - 1) * ell]
            di = cat.d(i)
            if c == di:
                signs[i] = 1
            elif c == -di:
                signs[i] = -1
            else:
                return Outcome(False, {"coefficient_of_t": (q - 1) * ell, "i": i})
        details.update(orbit_size=len(orbit), coefficient_signs=signs)
    return Outcome(True, **details)


def d_on_y_span(k, i, m, q):
    """d_{k,m} restricted to span(y_1..y_i), up to one global sign.

    Read off the x1-orbit product: only the restricted values of the orbit
    forms matter, so the product lives in F_q[y_1..y_i, t].
    """
    from collections import Counter
    from .matgroup import orbit_rows
    from .ring import Frame
    n = 2 * m
    fr = s_frame(m)
    row = np.zeros(n, np.int64)
    row[fr.index("x1")] = 1
    rows = orbit_rows(row, generators("oplus", m, q))
    small = Frame([f"y{j}" for j in range(1, i + 1)] + ["t"])
    t = Polynomial.var(small, q, i)
    mult = Counter(tuple(int(v) for v in r[:i]) for r in rows)
    prod = Polynomial.const(small, q, 1)
    for vals, c in sorted(mult.items()):
        ell = Polynomial.from_terms(small, q, {tuple(int(a == j) for a in range(i + 1)): v
                                               for j, v in enumerate(vals) if v})
        prod = prod * (t - ell) ** c
    power = (q - 1) * (inv.deg_u(m, q) - inv.e_index(k, m, q))
    part = prod.collect(i).get(power)
    yfr = Frame(small.names[:i])
    if part is None:
        return Polynomial.zero(yfr, q)
    return part.embed(yfr, list(range(i)) + [None])


@check("lex_lt", "lex lead terms of u_m and d_{1,m}; grevlex lead terms of d_{i,m}", q=3, m=2,
       heavy={"m": 3})
def _lex_lt(q=3, m=2, heavy=False):
    n = 2 * m
    cat = inv.catalog(q, m)
    fr = s_frame(m)
    want = [0] * n
    for j in range(1, m + 1):
        want[fr.index(f"y{j}")] = q ** (n - j - 1)
        want[fr.index(f"x{j}")] = q ** (j - 1)
    e_fac, c_fac = cat.lt_u()
    if list(e_fac) != want:
        return Outcome(False, {"lt(u) from factors": e_fac, "expected": want})
    details = {"lt_u": want}
    # lead terms of d_i sit on span(y_1..y_i): lex and grevlex both rank those
    # monomials above every monomial involving another variable
    for i in range(1, m + 1):
        if m == 3 and i > 1 and q > 3:
            break
        r = d_on_y_span(i, i, m, q)
        if r.is_zero():
            return Outcome(False, {"d_%d on span(y_1..y_%d)" % (i, i): 0})
        wg = [q ** (n - j) - q ** (n - j - 1) for j in range(1, i + 1)]
        if i == 1:
            e_r = list(lead_term(r, LEX)[0])
            if e_r != [q ** (n - 1) - q ** (n - 2)]:
                return Outcome(False, {"lex lt(d_1) via orbit": e_r})
        e_g = list(lead_term(r, GREVLEX)[0])
        if e_g != wg:
            return Outcome(False, {"grevlex lt(d_%d) via orbit" % i: e_g, "expected": wg})
        details[f"orbit_route_d{i}"] = wg
    if m <= 2 and (q == 3 or heavy):
        e_u, _ = lead_term(cat.u(), LEX)
        if list(e_u) != want:
            return Outcome(False, {"lt(u)": e_u, "expected": want})
        d1 = cat.d(1)
        e_d, c_d = lead_term(d1, LEX)
        wd = [0] * n
        wd[0] = q ** (n - 1) - q ** (n - 2)
        if list(e_d) != wd:
            return Outcome(False, {"lt(d1)": e_d, "expected": wd})
        details["lt_d1"] = wd
        for i in range(1, m + 1):
            e_g, _ = lead_term(cat.d(i), GREVLEX)
            wg = [0] * n
            for j in range(1, i + 1):
                wg[j - 1] = q ** (n - j) - q ** (n - j - 1)
            if list(e_g) != wg:
                return Outcome(False, {"grevlex lt(d_%d)" % i: e_g, "expected": wg})
        details["grevlex_d"] = "ok"
    return Outcome(True, **details)


@check("hsop_variety", "common zeros of xi_0..xi_{m-1}, d_1..d_m are only the origin", q=3, m=2)
def _hsop_variety(q=3, m=2, heavy=False):
    H = inv.hsop("H", m, q)
    res = {}
    for ext in (1, 2):
        pts = variety_scan(H, ext=ext)
        res[ext] = len(pts)
        if pts != [tuple([0] * 2 * m)]:
            return Outcome(False, {"field": q ** ext, "points": pts[:5]})
    return Outcome(True, points_by_extension=res)


@check("dickson_reduction", "d_{i,m} modulo the x's is +-(Dickson d_i of the y's)^(q^(m-1))", q=3, m=2)
def _dickson_reduction(q=3, m=2, heavy=False):
    n = 2 * m
    fr = s_frame(m)
    cat = inv.catalog(q, m)
    ys = [inv.var(m, q, f"y{j}") for j in range(1, m + 1)]
    xs_idx = [fr.index(f"x{j}") for j in range(1, m + 1)]
    signs, parity = {}, {}
    for i in range(1, m + 1):
        d = cat.d(i)
        ex = d.exps()
        keep = (ex[:, xs_idx] == 0).all(axis=1)
        red = d.filter_keys(keep)
        D = inv.dickson(i, ys) ** (q ** (m - 1))
        if red == D:
            signs[i] = 1
        elif red == -D:
            signs[i] = -1
        else:
            return Outcome(False, {"i": i, "reduction": red, "dickson_power": D})
        ell = (q ** (n - i - 1) + q ** m - q ** (m - 1) - 1) // (q - 1)
        parity[i] = {"ell": ell, "(-1)^ell": (-1) ** ell, "(-1)^(i+1)": (-1) ** (i + 1)}
    return Outcome(True, signs=signs, ell_parity=parity)


# ---------------------------------------------------------------- R-side statements

@check("phibar_kernel_div", "kernel of psi_1 is x1 S; psi_1 psi_1 = Frobenius psi_1; kernel elements are u_m multiples", q=3, m=2)
def _phibar(q=3, m=2, heavy=False):
    rng = _rng(q, m, 6)
    fr = s_frame(m)
    x1 = inv.var(m, q, "x1")
    for f in _probe_polys(q, m, rng, 10, degree=3):
        if psi1(psi1(f)) != psi1(f) ** q:
            return Outcome(False, {"f": render(f), "rule": "psi1 psi1 = psi1^q"})
        if not psi1(f * x1).is_zero():
            return Outcome(False, {"f": render(f), "rule": "x1 S in kernel"})
        fx = f.filter_keys(fr.var_exp(f.keys, fr.index("x1")) == 0)
        if not fx.is_zero() and psi1(fx).is_zero():
            return Outcome(False, {"f": render(fx), "rule": "x1-free part injective"})
    # kernel of the composite map for m = 2: multiples of u_2 in R_2
    u2T = inv.u2_T(q)
    u2 = inv.catalog(q, m).u()
    for F in [u2T, u2T * T(2, q, 1), u2T * (T(2, q, 0, 2) + T(2, q, 1))]:
        if not phi_eval(F, 1).is_zero():
            return Outcome(False, {"F": render(F), "rule": "Phi_{2,1}(F) = 0"})
        img = phi_eval(F, m) if m == 2 else None
        if img is not None:
            if not psi1(img).is_zero():
                return Outcome(False, {"F": render(F), "rule": "psi1 Phi(F) = 0"})
            exact_divide(img, u2)
    # a non-kernel element is detected by all three tests together
    F = T(2, q, 2) * T(2, q, 0, q)
    flags = (phi_eval(F, 1).is_zero(), psi1(phi_eval(F, 2)).is_zero())
    if any(flags):
        return Outcome(False, {"F": render(F), "flags": flags})
    return Outcome(True)


@check("nu_props", "nu is additive, does not drop under P^i, and orders monomials of equal S-degree", q=3, m=2, D=12)
def _nu_props(q=3, m=2, D=12, heavy=False):
    n = 2 * m
    rng = _rng(q, m, 7)
    k = n - 2
    fr = t_frame(k, q)
    for _ in range(D):
        f = random_poly(fr, q, rng, nterms=3, degree=int(rng.integers(1, 4)), homogeneous=False)
        g = random_poly(fr, q, rng, nterms=3, degree=int(rng.integers(1, 4)), homogeneous=False)
        if r_valuation(f * g) != r_valuation(f) + r_valuation(g):
            return Outcome(False, {"f": render(f), "g": render(g), "rule": "nu(fg) = nu(f) + nu(g)"})
        if r_valuation(f + g) < min(r_valuation(f), r_valuation(g)):
            return Outcome(False, {"f": render(f), "g": render(g), "rule": "nu(f+g) >= min"})
        h = random_poly(fr, q, rng, nterms=2, degree=2)
        top = int(h.weighted_degrees().max())
        for i in range(1, top + 1):
            P = r_steenrod(h, i)
            if r_valuation(P) < r_valuation(h):
                return Outcome(False, {"h": render(h), "i": i, "rule": "nu(P^i h) >= nu(h)"})
    # monomial comparison
    K = n - 1
    fr = t_frame(K, q)
    order = weighted_grevlex(fr)
    w = fr.weights
    import itertools
    count = 0
    for i in range(0, K):
        for a in range(0, 3):
            for b in range(0, 3):
                if a + b == 0:
                    continue
                e0 = [0] * fr.n
                e0[fr.index(f"T{i}")] = b
                e0[fr.index(f"T{i + 1}")] = a
                sdeg = b * w[fr.index(f"T{i}")] + a * w[fr.index(f"T{i + 1}")]
                caps = [sdeg // ww for ww in w]
                for e in itertools.product(*[range(c + 1) for c in caps]):
                    if sum(x * y for x, y in zip(e, w)) != sdeg or sum(e) <= a + b:
                        continue
                    count += 1
                    if order.compare(list(e), e0) >= 0:
                        return Outcome(False, {"beta": e, "reference": e0})
    return Outcome(True, monomials_compared=count)


@check("minor_nu", "nu(P^{e(i,m)} M(0,m) - M(i,m)) exceeds 1+q+...+q^(m-1)", q=3, m=2, heavy={"m": 3})
def _minor_nu(q=3, m=2, heavy=False):
    n = 2 * m
    bound = sum(q ** j for j in range(m))
    M0 = inv.minor_M(0, m, q)
    M0 = _drop_top(M0, n - 2)
    vals = {}
    if r_valuation(M0) != bound:
        return Outcome(False, {"nu(M(0,m))": r_valuation(M0), "expected": bound})
    for i in range(1, m + 1):
        P = r_steenrod(M0, inv.e_index(i, m, q))
        Mi = inv.minor_M(i, m, q)
        diff = P - Mi.embed(P.frame)
        v = r_valuation(diff)
        vals[i] = v
        if not v > bound:
            return Outcome(False, {"i": i, "nu": v, "bound": bound})
    return Outcome(True, valuations=vals, bound=bound)


@check("main_a", "u_2 in R_2, kernel generator, u_2 d_{i,2} in R_3 with prescribed top coefficient, vanishing P^i(u_2)", q=3, m=2)
def _main_a(q=3, m=2, heavy=False):
    if m != 2:
        raise SkipCheck("stated here for m = 2")
    cat = inv.catalog(q, 2)
    u2 = cat.u()
    u2T = inv.u2_T(q)
    if phi_eval(u2T, 2) != u2:
        return Outcome(False, {"u2": "norm product differs from the R_2 expression"})
    if not phi_eval(u2T, 1).is_zero():
        return Outcome(False, {"kernel": "u2 not killed by Phi_{2,1}"})
    Ud1, Ud2 = _ud_R(q)
    for i, (Ud, coef) in enumerate(((Ud1, _Tm(3, q, T0=q)), (Ud2, _Tm(3, q, T1=q))), start=1):
        if phi_eval(Ud, 2) != u2 * cat.d(i):
            return Outcome(False, {"i": i, "u2 d": "R-side and S-side disagree"})
        parts = Ud.collect("T3")
        if set(parts) - {0, 1} or parts.get(1) != coef:
            return Outcome(False, {"i": i, "T3 coefficient": parts.get(1)})
        for g in generators("oplus", 2, q):
            if act(cat.d(i), g) != cat.d(i):
                return Outcome(False, {"i": i, "d not invariant": g.matrix.tolist()})
    # u_2 = (xi_2 + c22) u_1^q - (xi_1 + c12) (u_1 d_{1,1})^q forces c12 = 0
    c22 = inv.c22_T(q).embed(t_frame(2, q))
    lhs = (T(2, q, 2) + c22) * T(2, q, 0, q) - u2T
    c12 = exact_divide(lhs, T(2, q, 1, q)) - T(2, q, 1)
    if not c12.is_zero():
        return Outcome(False, {"c12": c12})
    for i in range(1, q * q):
        P = r_steenrod(u2T, i)
        if 0 < i < q:
            if not P.is_zero():
                return Outcome(False, {"P^i(u2)": i})
        else:
            try:
                exact_divide(_drop_top(P, 2), u2T)
            except ArithmeticError:
                return Outcome(False, {"P^i(u2)/u2 not in R_2": i})
    return Outcome(True, u2d_top_coefficients=["T0^q", "T1^q"])


@check("main_b", "weighted grevlex lead terms and nu of u_2, u_2 d_{i,2} and the deltas", q=3, m=2)
def _main_b(q=3, m=2, heavy=False):
    if m != 2:
        raise SkipCheck("stated here for m = 2")
    u2 = _u2_R(q)
    Ud1, Ud2 = _ud_R(q)
    bound = 1 + q
    fr = t_frame(3, q)
    sign = (-1) ** (m // 2) % q
    want = {0: ({"T1": q + 1}, u2), 1: ({"T1": 1, "T2": q}, Ud1), 2: ({"T2": q + 1}, Ud2)}
    nus = {}
    for i, (ex, F) in want.items():
        e = [0] * fr.n
        for nm, v in ex.items():
            e[fr.index(nm)] = v
        lt_e, lt_c = _weighted_lt(F)
        if list(lt_e) != e or lt_c != sign:
            return Outcome(False, {"i": i, "lt": (lt_e, lt_c), "expected": (e, sign)})
        if r_valuation(F) != bound:
            return Outcome(False, {"i": i, "nu": r_valuation(F)})
        delta = F - inv.minor_M(i, 2, q).embed(fr)
        nus[i] = r_valuation(delta)
        if not nus[i] > bound:
            return Outcome(False, {"i": i, "nu(delta)": nus[i]})
    return Outcome(True, nu_delta=nus, expected_from_text={0: 2 * q, 1: 2 * q, 2: q * q + 1})


def _c32_R(q):
    """c_{3,2} in R_2 from xi_3 u_2 = (xi_2 + c22) u_2 d_1 - xi_1 u_2 d_2 - u_2 c_{3,2}."""
    fr = t_frame(3, q)
    u2 = _u2_R(q)
    Ud1, Ud2 = _ud_R(q)
    c22 = inv.c22_T(q).embed(fr)
    num = (T(3, q, 2) + c22) * Ud1 - T(3, q, 1) * Ud2 - T(3, q, 3) * u2
    return _drop_top(exact_divide(num, u2), 2)


@check("main_d", "xi_3 = (xi_2 + c22) d_1 - xi_1 d_2 - c_{3,2} with c_{3,2} in R_2", q=3, m=2)
def _main_d(q=3, m=2, heavy=False):
    if m != 2:
        raise SkipCheck("stated here for m = 2")
    try:
        c32 = _c32_R(q)
    except (ArithmeticError, ValueError) as e:
        return Outcome(False, {"c32": str(e)})
    cat = inv.catalog(q, 2)
    X = lambda i: inv.xi(i, 2, q)
    if q == 3 or heavy:
        lhs = (X(2) + inv.c22(q)) * cat.d(1) - X(1) * cat.d(2) - phi_eval(c32, 2)
        if lhs != X(3):
            return Outcome(False, {"identity": "fails on the S side"})
    return Outcome(True, c32_terms=c32.nterms)


@check("main_e", "xi_2^q = xi_1^q d_1 - xi_0^q d_2 - gamma with gamma in R_2, nu(gamma) > q", q=3, m=2)
def _main_e(q=3, m=2, heavy=False):
    if m != 2:
        raise SkipCheck("stated here for m = 2")
    fr = t_frame(3, q)
    u2 = _u2_R(q)
    Ud1, Ud2 = _ud_R(q)
    num = T(3, q, 1, q) * Ud1 - T(3, q, 0, q) * Ud2 - u2 * T(3, q, 2, q)
    try:
        gamma = _drop_top(exact_divide(num, u2), 2)
    except (ArithmeticError, ValueError) as e:
        return Outcome(False, {"gamma": str(e)})
    v = r_valuation(gamma)
    if not v > q:
        return Outcome(False, {"nu(gamma)": v})
    # the associated graded relation: drop gamma
    return Outcome(True, nu_gamma=v)


@check("main_f", "generators H + xi_m..xi_{n-2}; free over F[H] on the block basis; Hilbert series", q=3, m=2, D=30)
def _main_f(q=3, m=2, D=30, heavy=False):
    n = 2 * m
    Hd = inv.hsop_degrees("H", m, q)
    blk = inv.block_basis("Gamma", m, q)
    hb = hilbert_block(Hd, blk.factor_degrees(), D)
    G = generators("oplus", m, q)
    dims = [invariant_dimension(G, d, m=m, q=q) for d in range(D + 1)]
    if hb != dims:
        d = next(i for i in range(D + 1) if hb[i] != dims[i])
        return Outcome(False, {"degree": d, "block": hb[d], "invariants": dims[d]})
    # alternative reading with exponents q^(n-i) - 1 overcounts
    alt_blk = inv.BlockBasis("B", blk.names, blk.degrees, [q ** (n - i) - 1 for i in range(m, n - 1)])
    alt = hilbert_block(Hd, alt_blk.factor_degrees(), D)
    gens = inv.hsop("H", m, q) + [inv.xi(i, m, q) for i in range(m, n - 1)]
    Dg = min(D, 24)
    for d in range(1, Dg + 1):
        r = monomial_span_rank(gens, d)
        if r != dims[d]:
            return Outcome(False, {"degree": d, "span": r, "invariants": dims[d]})
    rank = len(blk)
    if rank != q ** (m * (m - 1) // 2):
        return Outcome(False, {"rank": rank})
    return Outcome(True, hilbert=dims, rank=rank, generation_checked_to=Dg,
                   alternative_exponents_match=(alt == dims))


def _minimal(gens, names):
    out = {}
    for k, (g, nm) in enumerate(zip(gens, names)):
        others = gens[:k] + gens[k + 1:]
        onames = names[:k] + names[k + 1:]
        ex = express(g, others, names=onames)
        if ex.ok:
            return None, {"redundant": nm, "expression": render(ex.rep)}
        out[nm] = {"certificate_rows": len(ex.certificate or [])}
    return out, None


@check("minimal_generation_G", "xi_0..xi_{n-2}, d_1..d_m generate minimally", q=3, m=2)
def _min_G(q=3, m=2, heavy=False):
    n = 2 * m
    gens = [inv.xi(i, m, q) for i in range(n - 1)] + [inv.d(i, m, q) for i in range(1, m + 1)]
    names = [f"xi{i}" for i in range(n - 1)] + [f"d{i}" for i in range(1, m + 1)]
    out, w = _minimal(gens, names)
    return Outcome(out is not None, w, certificates=out)


# ---------------------------------------------------------------- Hook group

@check("hook_eq1_eq2", "psi_1 relations for xi_0 and xi_j (j > 0)", q=3, m=2, heavy={"m": 3})
def _hook_eq(q=3, m=2, heavy=False):
    n = 2 * m
    X = lambda i: inv.xi(i, m, q)
    x1 = inv.var(m, q, "x1")
    W = Polynomial.zero(s_frame(m), q)
    for i in range(2, m + 1):
        W = W + inv.X_(i, m, q) * inv.Y_(i, m, q)
    e1 = X(0) ** q - X(1) * x1 ** (q - 1) + X(0) * x1 ** (2 * q - 2)
    if e1 != W or W != psi1(X(0)):
        return Outcome(False, {"relation": "xi_0"})
    literal = {}
    for j in range(1, n - 1):
        lhs = X(j) ** q - X(j + 1) * x1 ** (q - 1)
        if j == 1:
            rhs = psi1(X(1)) + (X(0) ** q * x1 ** (q * q - q)).scale(2) - X(1) * x1 ** (q * q - 1)
        else:
            rhs = psi1(X(j)) + X(j - 1) ** q * x1 ** (q ** (j + 1) - q ** j) - X(j) * x1 ** (q ** (j + 1) + q - q ** j - 1)
        if lhs != rhs:
            return Outcome(False, {"relation": f"xi_{j}", "difference": lead_term(lhs - rhs)})
        printed = X(1) * x1 ** (q ** (j + 1) - 1) - (X(0) * x1 ** (q ** (j + 1) + q - 2)).scale(2) + psi1(X(j))
        literal[j] = lhs == printed
    return Outcome(True, literal_right_hand_side_holds=literal)


@check("hook_compliance", "x1 N(y1) - xi_{n-2} lies in Q^H[xi_0..xi_{n-3}] (two routes)", q=3, m=2,
       heavy={"m": 3})
def _hook_compliance(q=3, m=2, heavy=False):
    n = 2 * m
    Ny = inv.hook_norm_y1(m, q)
    x1 = inv.var(m, q, "x1")
    f = x1 * Ny - inv.xi(n - 2, m, q)
    info = {"N(y1) compliant": inv.is_compliant(Ny), "N(y1) strongly compliant": inv.is_strongly_compliant(Ny),
            "difference strongly compliant": inv.is_strongly_compliant(f)}
    if not info["N(y1) compliant"] or not info["difference strongly compliant"]:
        return Outcome(False, info)
    # route 1: peel off top y1-coefficients
    pr = inv.peel_strongly_compliant(f, m, q)
    if not pr.ok or pr.rebuild(m, q) != f:
        return Outcome(False, {"peel": pr.failure})
    QH = inv.hook_QH_gens(m, q)
    Hg = generators("hook", m, q)
    iy = f.frame.index("y1")
    for digits, c in pr.pieces + [((), pr.remainder)]:
        if c.is_zero() or c.hom_degree() == 0:
            continue
        if m == 2 or heavy:
            if not express(c, QH).ok:
                return Outcome(False, {"peel coefficient outside Q^H": digits})
        elif (f.frame.var_exp(c.keys, iy) > 0).any() or any(act(c, g) != c for g in Hg):
            # y1-free H-invariants are exactly Q^H
            return Outcome(False, {"peel coefficient not a y1-free invariant": digits})
    info["peel_steps"] = len(pr.pieces)
    # route 2: direct linear solve over the generators
    if m == 2 or heavy:
        gens = QH + [inv.xi(j, m, q) for j in range(n - 2)]
        ex = express(f, gens)
        info["direct_solve"] = ex.ok
        if not ex.ok:
            return Outcome(False, {"direct solve": "no expression", "certificate_rows": len(ex.certificate or [])})
    return Outcome(True, **info)


@check("hook_ring", "Hook Khovanskii basis, tete-a-tetes and the Hilbert series of S^H", q=3, m=2, D=20)
def _hook_ring(q=3, m=2, D=20, heavy=False):
    gs = hook_basis(m, q)
    H = generators("hook", m, q)
    tetes = tete_a_tetes("hook", m, q, skip_degree=D)
    labels = tete_a_tete_labels("hook", m, q)
    v = khovanskii_verify(gs.polys, H, D, tetes, labels=labels)
    if not v.passed:
        return Outcome(False, {"failed_subductions": v.failed, "mismatch_degree": v.mismatch,
                               "monoid": v.monoid, "invariants": v.invariant})
    n = 2 * m
    hs = [1] + [q] * (2 * m - 2) + [q ** (n - 2)]
    blk = inv.block_basis("BH", m, q)
    hb = hilbert_block(hs, blk.factor_degrees(), D)
    if hb != v.invariant:
        return Outcome(False, {"block_series": hb, "invariants": v.invariant})
    return Outcome(True, hilbert=v.invariant, skipped_tetes=v.skipped,
                   steps=[len(t.steps) for t in v.subductions])


@check("hook_tetes", "Hook tete-a-tetes subduct to zero over W, N(y1), x1, xi_0..xi_{n-3}", q=3, m=2,
       heavy={"m": 3})
def _hook_tetes(q=3, m=2, heavy=False):
    gs = hook_basis(m, q)
    res = {}
    for lab, t in zip(tete_a_tete_labels("hook", m, q), tete_a_tetes("hook", m, q)):
        tr = subduct(t, gs.polys)
        if not tr.reduced:
            return Outcome(False, {"tete": lab, "residue_lead": lead_term(tr.residue), "exhausted": tr.exhausted})
        if tr.reconstruct() != t:
            return Outcome(False, {"tete": lab, "trace": "does not reconstruct"})
        res[lab] = len(tr.steps)
    return Outcome(True, steps=res)


# ---------------------------------------------------------------- Sylow group

def _sylow_D(m, D):
    return D if D is not None else (24 if m == 2 else 12)


@check("sylow_generation", "orbit products and xi_0..xi_{n-3} span every degree of S^P", q=3, m=2, D=18)
def _sylow_generation(q=3, m=2, D=18, heavy=False):
    n = 2 * m
    cat = inv.catalog(q, m)
    names = [f"y{i}" for i in range(1, m + 1)] + [f"x{i}" for i in range(m, 0, -1)]
    degs = [inv.deg_norm_y(i, m, q) for i in range(1, m + 1)] + [inv.deg_norm_x(i, q) for i in range(m, 0, -1)]
    gens = [cat.norm(nm) for nm, dg in zip(names, degs) if dg <= D] + \
           [inv.xi(i, m, q) for i in range(n - 2) if inv.deg_xi(i, q) <= D]
    P = generators("sylow", m, q)
    dims = []
    for d in range(D + 1):
        want = invariant_dimension(P, d, m=m, q=q)
        got = 1 if d == 0 else monomial_span_rank(gens, d)
        dims.append(want)
        if got != want:
            return Outcome(False, {"degree": d, "span": got, "invariants": want})
    return Outcome(True, dims=dims)


@check("psij_lt", "lex lead term of psi_j(xi_i) is y_{j+1}^(q^(i+j)) x_{j+1}^(q^j)", q=3, m=2, heavy={"m": 3})
def _psij_lt(q=3, m=2, heavy=False):
    n = 2 * m
    fr = s_frame(m)
    seen = 0
    for j in range(m):
        for i in range(0, n - 2 * j):
            if i + j >= n:
                continue
            f = psi_j(inv.xi(i, m, q), j)
            e, c = lead_term(f, LEX)
            want = [0] * fr.n
            want[fr.index(f"y{j + 1}")] = q ** (i + j)
            want[fr.index(f"x{j + 1}")] = q ** j
            if i == 0:
                want[fr.index(f"y{j + 1}")] = q ** j
            if list(e) != want:
                return Outcome(False, {"i": i, "j": j, "lt": e, "expected": want})
            seen += 1
    return Outcome(True, checked=seen)


@check("phi_psi_commute", "phi psi_j = psi_{j+1} sigma and phi(psi_j(xi_i)) = psi_{j+1}(xi_i)", q=3, m=2, D=6,
       heavy={"m": 3})
def _phi_psi(q=3, m=2, D=6, heavy=False):
    rng = _rng(q, m, 8)
    fr = s_frame(m - 1)
    for _ in range(D):
        f = random_poly(fr, q, rng, nterms=3, degree=2)
        for j in range(m - 1):
            if phi_iso(psi_j(f, j)) != psi_j(sigma(f), j + 1):
                return Outcome(False, {"f": render(f), "j": j})
    for j in range(m - 1):
        for i in range(0, 2 * (m - 1)):
            if phi_iso(psi_j(inv.xi(i, m - 1, q), j)) != psi_j(inv.xi(i, m, q), j + 1):
                return Outcome(False, {"i": i, "j": j, "on": "xi"})
    return Outcome(True, probes=D)


@check("sylow_khovanskii", "orbit products and psi_j(xi_i) form a lex Khovanskii basis of S^P (degrees <= D)",
       q=3, m=2, D=None, heavy={"m": 3})
def _sylow_kh(q=3, m=2, D=None, heavy=False):
    D = _sylow_D(m, D)
    gs = sylow_basis(m, q, max_degree=D)
    P = generators("sylow", m, q)
    tetes = tete_a_tetes("sylow", m, q, skip_degree=D)
    labels = tete_a_tete_labels("sylow", m, q)
    v = khovanskii_verify(gs.polys, P, D, tetes, labels=labels)
    soundness = all(tr.reconstruct() == tr.input for tr in v.subductions)
    details = dict(D=D, hilbert=v.invariant, subducted=[l for l in labels if l not in v.skipped],
                   above_D=v.skipped, generators=gs.names)
    if not v.passed or not soundness:
        return Outcome(False, {"failed_subductions": v.failed, "mismatch_degree": v.mismatch,
                               "monoid": v.monoid, "invariants": v.invariant, "sound": soundness}, **details)
    return Outcome(True, **details)


@check("sylow_lead_monomials", "lex lead monomials of H_0 and xi_0..xi_{n-3}", q=3, m=3)
def _sylow_lms(q=3, m=3, heavy=False):
    n = 2 * m
    fr = s_frame(m)
    cat = inv.catalog(q, m)
    want = {}
    for i in range(1, m + 1):
        e = [0] * n
        e[fr.index(f"y{i}")] = q ** (n - i - 1)
        want[f"N(y{i})"] = e
        e = [0] * n
        e[fr.index(f"x{i}")] = q ** (i - 1)
        want[f"N(x{i})"] = e
    for i in range(n - 2):
        e = [0] * n
        e[fr.index("y1")] = q ** i
        e[fr.index("x1")] = 1
        want[f"xi{i}"] = e
    for nm, e in want.items():
        if nm.startswith("N"):
            ex = np.zeros(n, np.int64)
            for ell in cat.orbit_forms(nm[2:-1]):
                ex += np.array(lead_term(ell, LEX)[0])
            got = [int(v) for v in ex]
        else:
            got = list(lead_term(inv.xi(int(nm[2:]), m, q), LEX)[0])
        if got != e:
            return Outcome(False, {"generator": nm, "lt": got, "expected": e})
    return Outcome(True, lead_monomials=want)


@check("sylow_block", "block basis Gamma_0 (and the psi_j block) over H_0: Hilbert series", q=3, m=2, D=24)
def _sylow_block(q=3, m=2, D=24, heavy=False):
    if m == 3 and D > 12 and not heavy:
        D = 12
    Hd = inv.hsop_degrees("H0", m, q)
    g0 = inv.block_basis("Gamma0", m, q)
    bhc = inv.block_basis("BHC", m, q)
    a = hilbert_block(Hd, g0.factor_degrees(), D)
    b = hilbert_block(Hd, bhc.factor_degrees(), D)
    P = generators("sylow", m, q)
    dims = [invariant_dimension(P, d, m=m, q=q) for d in range(D + 1)]
    if a != dims or b != dims:
        d = next(i for i in range(D + 1) if a[i] != dims[i] or b[i] != dims[i])
        return Outcome(False, {"degree": d, "Gamma0": a[d], "psi block": b[d], "invariants": dims[d]})
    return Outcome(True, hilbert=dims)


REGISTRY["sylow_hilbert"] = Check("sylow_hilbert", REGISTRY["sylow_block"].anchor, _sylow_block,
                                  {"q": 3, "m": 2, "D": 24}, {})


@check("sylow_rank", "free rank over H_0 equals q^(m(m-1)) = |P|", q=3, m=2, heavy={"m": 3})
def _sylow_rank(q=3, m=2, heavy=False):
    g0 = len(inv.block_basis("Gamma0", m, q))
    bhc = len(inv.block_basis("BHC", m, q))
    prod = 1
    for d in inv.hsop_degrees("H0", m, q):
        prod *= d
    order = len(closure(generators("sylow", m, q))) if (m <= 2 or heavy) else q ** (m * (m - 1))
    want = q ** (m * (m - 1))
    ok = g0 == bhc == want == order and prod % order == 0 and prod // order == want
    return Outcome(ok, None if ok else {"Gamma0": g0, "psi block": bhc, "|P|": order, "deg product": prod},
                   rank=want)


@check("sylow_minimal", "H_0 and xi_0..xi_{n-3} generate S^P minimally", q=3, m=2)
def _sylow_minimal(q=3, m=2, heavy=False):
    n = 2 * m
    cat = inv.catalog(q, m)
    names = [f"N(y{i})" for i in range(1, m + 1)] + [f"N(x{i})" for i in range(m, 0, -1)] + \
            [f"xi{i}" for i in range(n - 2)]
    gens = [cat.norm(nm[2:-1]) for nm in names[:n]] + [inv.xi(i, m, q) for i in range(n - 2)]
    out, w = _minimal(gens, names)
    return Outcome(out is not None, w, certificates=out)


# ---------------------------------------------------------------- Borel and Reynolds

@check("borel_ring", "Borel invariants: tilde H_0 with the psi_j(xi_i); complete-intersection Hilbert series",
       q=3, m=2, D=24)
def _borel(q=3, m=2, D=24, heavy=False):
    B = generators("borel", m, q)
    Ht = inv.hsop("Htilde0", m, q)
    for k, h in enumerate(Ht):
        for g in B:
            if act(h, g) != h:
                return Outcome(False, {"element": k, "generator": g.matrix.tolist()})
    Hd = inv.hsop_degrees("Htilde0", m, q)
    rel = [(q - 1) * (inv.deg_norm_y(i, m, q) + inv.deg_norm_x(i, q)) for i in range(1, m + 1)]
    bhc = inv.block_basis("BHC", m, q)
    series = hilbert_block(Hd, bhc.factor_degrees(), D, relation_degs=rel)
    dims = [invariant_dimension(B, d, m=m, q=q) for d in range(D + 1)]
    if series != dims:
        d = next(i for i in range(D + 1) if series[i] != dims[i])
        return Outcome(False, {"degree": d, "series": series[d], "invariants": dims[d]})
    gens = [h for h in Ht if h.hom_degree() <= D] + \
           [g for g in inv.bhc_generators(m, q) if g.hom_degree() <= D]
    tetes = tete_a_tetes("borel", m, q, skip_degree=D)
    v = khovanskii_verify(gens, B, D, tetes, labels=tete_a_tete_labels("borel", m, q))
    if not v.passed:
        return Outcome(False, {"khovanskii": v.failed, "mismatch_degree": v.mismatch})
    return Outcome(True, hilbert=dims, relation_degrees=rel)


def _reynolds_Ny(q, m):
    cat = inv.catalog(q, m)
    return reynolds(cat.N_y(1) ** (q - 1), m, q)


@check("reynolds_lt", "lex lead term of the Reynolds image of N(y1)^(q-1)", q=3, m=2)
def _reynolds_lt(q=3, m=2, heavy=False):
    n = 2 * m
    R = _reynolds_Ny(q, m)
    e, c = lead_term(R, LEX)
    want = [0] * n
    want[0] = (q - 1) * q ** (n - 2)
    if list(e) != want or c != 1:
        return Outcome(False, {"lt": (e, c), "expected": (want, 1)})
    return Outcome(True, lt=want)


@check("reynolds_d1", "Reynolds image of N(y1)^(q-1) differs from d_{1,m} by an element of R_{n-2}", q=3, m=2)
def _reynolds_d1(q=3, m=2, heavy=False):
    n = 2 * m
    R = _reynolds_Ny(q, m)
    diff = R - inv.d(1, m, q)
    ex = express_in_xi(diff, m, q, top=n - 2)
    if not ex.ok:
        return Outcome(False, {"difference": "not in R_{n-2}", "certificate_rows": len(ex.certificate or [])})
    return Outcome(True, difference=render(ex.rep))


# ---------------------------------------------------------------- the m = 2 base case

@check("u2_identity", "u_2 = xi_0^q (xi_2 + c22) - xi_1^(q+1) with the Catalan form of c22", q=3)
def _u2_identity(q=3, heavy=False):
    return _m2_c22(q=q, heavy=heavy)


@check("m2_c22", "u_2 identity, Catalan closed form of c22 and the Catalan congruence", q=3, heavy={"q": 5})
def _m2_c22(q=3, heavy=False):
    cat = inv.catalog(q, 2)
    u2 = cat.u()
    if phi_eval(inv.u2_T(q), 2) != u2:
        return Outcome(False, {"u2": "norm product differs from xi_0^q(xi_2 + c22) - xi_1^(q+1)"})
    # second route: c22 = -xi_0^q P^{q-2}(d_{1,1}) in S_1, written over xi_0, xi_1
    d11 = inv.catalog(q, 1).d(1)
    c_s1 = (inv.xi(0, 1, q) ** q * steenrod(d11, q - 2)).scale(-1)
    if phi_eval(inv.c22_T(q), 1) != c_s1:
        return Outcome(False, {"c22": "Catalan form differs from -xi_0^q P^(q-2)(d_11)"})
    # third route: the factorial closed form
    from math import factorial
    fr = t_frame(1, q)
    terms = {}
    for j in range(0, (q - 1) // 2 + 1):
        c = (-1) ** j * (q - 1) * factorial(q - 2 - j) // (factorial(j) * factorial(q - 1 - 2 * j))
        key = (q - 1 - 2 * j, 1 + j * (q + 1))
        terms[key] = (terms.get(key, 0) + c) % q
    fact = Polynomial.from_terms(fr, q, {k: v for k, v in terms.items() if v})
    if fact != inv.c22_T(q):
        return Outcome(False, {"c22": "factorial form differs", "factorial": render(fact)})
    bad = [(qq, j) for qq in (3, 5, 7, 11, 13) for j in range(0, (qq - 1) // 2 + 1)
           if not catalan_congruence(qq, j)[0]]
    if bad:
        return Outcome(False, {"catalan_congruence": bad[:5]})
    return Outcome(True, c22=render(inv.c22_T(q)))


@check("m2_c22_steenrod", "P^1 c22 = xi_1^q, P^i c22 = 0 for 1<i<q, and the two congruences mod xi_0^(q^2)",
       q=3, heavy={"q": 5})
def _m2_c22_st(q=3, heavy=False):
    c = inv.c22_T(q)
    fr = t_frame(2, q)
    T2 = lambda j, e=1: T(2, q, j, e)
    P = lambda i: _drop_top(r_steenrod(c, i), 2) if not r_steenrod(c, i).is_zero() else Polynomial.zero(fr, q)
    if P(1) != T2(1, q):
        return Outcome(False, {"P^1(c22)": P(1)})
    for i in range(2, q):
        if not P(i).is_zero():
            return Outcome(False, {"P^i(c22)": i})
    want_c = T2(1, q * q - q + 1) - T2(0, q) * T2(1, q * q - 2 * q) * T2(2)
    want_d = T2(0) * T2(2, q - 1) - T2(0, q) * T2(1, q * q - 2 * q + 1) + T2(0, 2 * q) * T2(1, q * q - 3 * q) * T2(2)
    bounds = {}
    for lab, i, w in (("c", q * q, want_c), ("d", q * q - q, want_d)):
        b = t0_adic_bound(P(i) - w)
        bounds[lab] = b
        if b < q * q:
            return Outcome(False, {"part": lab, "T0-adic order": b})
    # S-side cross-check of the R-side operations
    if q == 3 or heavy:
        cs = inv.c22(q)
        for i in (1, q * q - q, q * q):
            if steenrod(cs, i) != phi_eval(P(i), 2):
                return Outcome(False, {"S-side": i})
    return Outcome(True, t0_orders=bounds)


@check("m2_u2d", "u_2 d_{i,2} - (top term) in R_2 and the congruences mod xi_0^(q^2)", q=3, heavy={"q": 5})
def _m2_u2d(q=3, heavy=False):
    Ud1, Ud2 = _ud_R(q)
    T3 = lambda j, e=1: T(3, q, j, e)
    out = {}
    for lab, F, top, cong in (
            ("a", Ud1, T3(0, q) * T3(3), T3(0, q) * T3(3) - T3(1) * T3(2, q) + T3(0) * T3(1, q) * T3(2, q - 1)),
            ("b", Ud2, T3(1, q) * T3(3), T3(1, q) * T3(3) - T3(2, q + 1) - T3(0, q) * T3(1, q * q - q) * T3(2))):
        if _t3_degree(F - top, 3) != 0:
            return Outcome(False, {"part": lab, "not in R_2": lead_term(F - top)})
        b = t0_adic_bound(F - cong)
        out[lab] = b
        if b < q * q:
            return Outcome(False, {"part": lab, "T0-adic order": b})
    if q == 3 or heavy:
        cat = inv.catalog(q, 2)
        if phi_eval(Ud1, 2) != cat.u() * cat.d(1):
            return Outcome(False, {"S-side": "u2 d1"})
    return Outcome(True, t0_orders=out)


@check("m2_u2_st", "P^i(u_2) = 0 for 0<i<q and P^i(u_2)/u_2 in R_2 off {q^2, q^2+q, q^2+2q}", q=3,
       heavy={"q": 5})
def _m2_u2_st(q=3, heavy=False):
    u2 = inv.u2_T(q)
    deg = (q + 1) ** 2
    skip = {q * q, q * q + q, q * q + 2 * q}
    for i in range(1, deg + 1):
        P = r_steenrod(u2, i)
        if 0 < i < q:
            if not P.is_zero():
                return Outcome(False, {"i": i, "P^i(u2)": "nonzero"})
            continue
        if i in skip:
            continue
        try:
            exact_divide(_drop_top(P, 2), u2)
        except (ArithmeticError, ValueError) as e:
            return Outcome(False, {"i": i, "quotient": str(e)})
    if q == 3 or heavy:
        us = inv.catalog(q, 2).u()
        for i in (1, q, q * q - 1):
            if steenrod(us, i) != phi_eval(r_steenrod(u2, i), 2):
                return Outcome(False, {"S-side": i})
    return Outcome(True, degree=deg)


def _u2d_powers(q, which):
    """A_i = u_2^(l+1) P^i(d_which) in R_3 for i below q^3 and the degree, via the Cartan identity."""
    fr = t_frame(3, q)
    u2 = _u2_R(q)
    Ud = _ud_R(q)[which - 1]
    dd = inv.deg_d(which, 2, q)
    top = min(q ** 3 - 1, dd)
    Pu = {k: _drop_top(r_steenrod(inv.u2_T(q), k), 3) if k else u2 for k in range(0, top + 1)}
    Pu = {k: (v.embed(fr) if v.frame != fr else v) for k, v in Pu.items()}
    quo = {}
    for k in range(1, min(q * q, top + 1)):
        quo[k] = exact_divide(Pu[k], u2)
    pw = {0: Polynomial.const(fr, q, 1)}
    for e in range(1, 4 + q):
        pw[e] = pw[e - 1] * u2
    A = {0: Ud}
    for i in range(1, top + 1):
        ell = i // (q * q)
        acc = pw[ell] * _drop_top(r_steenrod(Ud, i), 3)
        for k in range(1, i + 1):
            if Pu[k].is_zero():
                continue
            ellp = (i - k) // (q * q)
            if ellp == ell:
                acc = acc - quo[k] * A[i - k]
            else:
                acc = acc - Pu[k] * pw[ell - ellp - 1] * A[i - k]
        A[i] = acc
    return A


@check("m2_u2d_st", "P^i(d_{j,2}) in R_2 for i<q; u_2^(l+1) P^i(d_{j,2}) in R_3 with xi_3-degree <= l+1",
       q=3, heavy={"q": 5})
def _m2_u2d_st(q=3, heavy=False):
    cat = inv.catalog(q, 2)
    degs = {}
    for j in (1, 2):
        A = _u2d_powers(q, j)
        for i, F in A.items():
            ell = i // (q * q)
            if _t3_degree(F, 3) > ell + 1:
                return Outcome(False, {"j": j, "i": i, "xi3-degree": _t3_degree(F, 3)})
            if 0 < i < q:
                try:
                    Q = exact_divide(F, _u2_R(q))
                except ArithmeticError:
                    return Outcome(False, {"j": j, "i": i, "P^i(d) not in R": True})
                if _t3_degree(Q, 3) != 0:
                    return Outcome(False, {"j": j, "i": i, "P^i(d) not in R_2": True})
        degs[j] = max(A)
        if q == 3 or heavy:
            # S-side cross-check at a few indices
            u2s = cat.u()
            for i in sorted({1, q, q * q - 1, min(q * q, max(A))}):
                ell = i // (q * q)
                if phi_eval(A[i], 2) != u2s ** (ell + 1) * steenrod(cat.d(j), i):
                    return Outcome(False, {"j": j, "i": i, "S-side": "mismatch"})
    return Outcome(True, top_index=degs)


@check("m2_c32", "c_{3,2} in R_2 and -c_{3,2} mod xi_0^(q+2)", q=3, heavy={"q": 5})
def _m2_c32(q=3, heavy=False):
    try:
        c32 = _c32_R(q)
    except (ArithmeticError, ValueError) as e:
        return Outcome(False, {"c32": str(e)})
    T2 = lambda j, e=1: T(2, q, j, e)
    want = T2(0, 2) * T2(1, q - 2) * T2(2, q - 1) + T2(0, q) * T2(1, q * q - 2 * q) * T2(2)
    b = t0_adic_bound(c32.scale(-1) - want)
    if b < q + 2:
        return Outcome(False, {"T0-adic order": b})
    return Outcome(True, t0_order=b)


@check("m2_part_e", "xi_0^(q+1) r_{2,1} = xi_2^q - xi_1^q d_1 + xi_0^q d_2 - xi_0 xi_1^(q-1) xi_2^(q-1) with r_{2,1} in R_2",
       q=3, heavy={"q": 5})
def _m2_part_e(q=3, heavy=False):
    fr = t_frame(3, q)
    u2 = _u2_R(q)
    Ud1, Ud2 = _ud_R(q)
    T3 = lambda j, e=1: T(3, q, j, e)
    tail = T3(0) * T3(1, q - 1) * T3(2, q - 1)
    num = u2 * T3(2, q) - T3(1, q) * Ud1 + T3(0, q) * Ud2 - u2 * tail
    try:
        rhs = exact_divide(num, u2)
    except ArithmeticError as e:
        return Outcome(False, {"division by u2": str(e)})
    if _t3_degree(rhs, 3) != 0:
        return Outcome(False, {"not in R_2": lead_term(rhs)})
    b = t0_adic_bound(rhs)
    if b < q + 1:
        return Outcome(False, {"T0-adic order": b})
    r21 = exact_divide(rhs, T3(0, q + 1))
    gamma = (T3(0, q + 1) * r21).scale(-1) - tail
    if not r_valuation(gamma) > q + 1:
        return Outcome(False, {"nu(gamma)": r_valuation(gamma)})
    if q == 3 or heavy:
        cat = inv.catalog(q, 2)
        X = lambda i: inv.xi(i, 2, q)
        s = X(2) ** q - X(1) ** q * cat.d(1) + X(0) ** q * cat.d(2) - X(0) * X(1) ** (q - 1) * X(2) ** (q - 1)
        if s != phi_eval(rhs, 2):
            return Outcome(False, {"S-side": "mismatch"})
    return Outcome(True, t0_order=b, nu_gamma=r_valuation(gamma))


# ---------------------------------------------------------------- Steenrod generation

@check("steenrod_generation", "closing {xi_0, d_1} under P^i and products reaches every d_i", q=3, m=2)
def _st_gen(q=3, m=2, heavy=False):
    cat = inv.catalog(q, m)
    top = inv.deg_d(m, m, q)
    pool = [inv.xi(0, m, q), cat.d(1)]
    seen = {p.keys.tobytes() + p.coeffs.tobytes() for p in pool}
    frontier = list(pool)
    while frontier:
        nxt = []
        for f in frontier:
            d = f.hom_degree()
            for i in range(1, (top - d) // (q - 1) + 1):
                g = steenrod(f, i)
                if g.is_zero():
                    continue
                k = g.keys.tobytes() + g.coeffs.tobytes()
                if k not in seen:
                    seen.add(k)
                    pool.append(g)
                    nxt.append(g)
        frontier = nxt
    found = {}
    for i in range(2, m + 1):
        target = cat.d(i)
        dg = target.hom_degree()
        gens = [g for g in pool if g.hom_degree() <= dg]
        ex = express(target, gens)
        if not ex.ok:
            return Outcome(False, {"d_i": i, "pool": len(gens)})
        # the closure is needed: d_i is not reachable from xi's and earlier d's alone
        base = [inv.xi(j, m, q) for j in range(2 * m) if inv.deg_xi(j, q) <= dg] + \
               [cat.d(j) for j in range(1, i)]
        found[i] = {"pool": len(gens), "without_closure": express(target, base).ok}
    return Outcome(True, closure_size=len(pool), reached=found)


# ---------------------------------------------------------------- property probes

@check("ring_axioms", "commutative ring axioms on random polynomials", q=3, m=2, D=60)
def _ring_axioms(q=3, m=2, D=60, heavy=False):
    rng = _rng(q, m, 9)
    fr = s_frame(m)
    for _ in range(D):
        a, b, c = (random_poly(fr, q, rng, nterms=3, degree=3, homogeneous=False) for _ in range(3))
        if a * b != b * a or (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or not (a - a).is_zero():
            return Outcome(False, {"a": render(a), "b": render(b), "c": render(c)})
    return Outcome(True, probes=D)


@check("express_soundness", "express returns representations that evaluate back to the target", q=3, m=2, D=20)
def _express_sound(q=3, m=2, D=20, heavy=False):
    rng = _rng(q, m, 10)
    gens = [inv.xi(0, m, q), inv.xi(1, m, q), inv.var(m, q, "x1")]
    fr = Polynomial.zero(s_frame(m), q)
    for _ in range(D):
        terms = {}
        for _k in range(3):
            a = tuple(int(v) for v in rng.integers(0, 3, size=3))
            terms[a] = int(rng.integers(1, q))
        # homogenise by picking one degree
        degs = [2, 4, 1]
        d = max(sum(x * y for x, y in zip(a, degs)) for a in terms)
        f = fr
        for a, c in terms.items():
            da = sum(x * y for x, y in zip(a, degs))
            mon = Polynomial.const(f.frame, q, c) * gens[2] ** (d - da)
            for g, e in zip(gens, a):
                mon = mon * g ** e
            f = f + mon
        if f.is_zero():
            continue
        ex = express(f, gens)
        if not ex.ok or ex.evaluate() != f:
            return Outcome(False, {"f": render(f)})
    return Outcome(True, probes=D)
