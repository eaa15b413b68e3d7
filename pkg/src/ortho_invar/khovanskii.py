"""Subduction, tete-a-tetes and Khovanskii-basis checks.

A tete-a-tete here is a pair of generator monomials with the same lead
term, stored as the difference of the two products.  Verification subducts
each listed difference and compares the Hilbert function of the lead-term
monoid with fixed-space dimensions.
"""
from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .invariants import bhc_generators, catalog, hook_QH_gens, hook_norm_y1, var, xi
from .ring import LEX, Polynomial, lead_term
from .solver import invariant_dimension, monoid_hilbert
from .steenrod import psi_j

log = logging.getLogger(__name__)


class SubductionTrace:
    """f = sum c * prod g_i^a_i (the steps) + residue."""

    def __init__(self, f, gens, order):
        self.input = f
        self.gens = gens
        self.order = order
        self.steps = []
        self.residue = f
        self.exhausted = False

    @property
    def reduced(self):
        return self.residue.is_zero()

    def reconstruct(self, cache=None):
        cache = cache or _ProductCache(self.gens)
        out = self.residue
        for a, c in self.steps:
            out = out + cache.get(a).scale(c)
        return out

    def __repr__(self):
        return f"SubductionTrace(steps={len(self.steps)}, residue={'0' if self.reduced else self.residue.nterms})"


class _ProductCache:
    def __init__(self, gens):
        self.gens = gens
        self.pw = [{1: g} for g in gens]
        self.prods = {}

    def power(self, i, e):
        c = self.pw[i]
        if e not in c:
            # square and multiply on top of what is cached
            h = e // 2
            sq = self.power(i, h)
            v = sq * sq
            if e % 2:
                v = v * self.gens[i]
            c[e] = v
        return c[e]

    def get(self, a):
        a = tuple(a)
        if a not in self.prods:
            out = None
            # multiply small factors first
            parts = sorted((self.power(i, e) for i, e in enumerate(a) if e), key=lambda p: p.nterms)
            for p in parts:
                out = p if out is None else out * p
            if out is None:
                g0 = self.gens[0]
                out = Polynomial.const(g0.frame, g0.p, 1)
            self.prods[a] = out
        return self.prods[a]


def factor_exponent(e, lts, limit=200000):
    """Nonnegative a with sum a_i lts[i] = e, tried generator by generator in the
    given order with the largest power first.  None when no factorisation exists."""
    e = np.asarray(e, np.int64)
    L = [np.asarray(v, np.int64) for v in lts]
    k = len(L)
    dead = set()
    count = [0]

    def rec(i, rem):
        if not rem.any():
            return [0] * (k - i)
        if i == k:
            return None
        key = (i, rem.tobytes())
        if key in dead:
            return None
        count[0] += 1
        if count[0] > limit:
            raise RuntimeError("factorisation search exceeded its limit")
        v = L[i]
        nz = v > 0
        top = int((rem[nz] // v[nz]).min()) if nz.any() else 0
        for a in range(top, -1, -1):
            sub = rec(i + 1, rem - a * v)
            if sub is not None:
                return [a] + sub
        dead.add(key)
        return None
    return rec(0, e)


def subduct(f, gens, order=LEX, max_steps=10 ** 6, cache=None):
    """Greedy subduction of f by products of generator lead terms."""
    if any(g.is_zero() for g in gens):
        raise ValueError("generators must be nonzero")
    tr = SubductionTrace(f, gens, order)
    lts = [lead_term(g, order) for g in gens]
    # prefer the generator with the larger lead term; stable on catalog index
    rank = sorted(range(len(gens)), key=lambda i: order.sort_key(lts[i][0]), reverse=True)
    rlts = [lts[i][0] for i in rank]
    cache = cache or _ProductCache(gens)
    p = f.p

    def step(e, c):
        a = factor_exponent(e, rlts)
        if a is None:
            return None
        full = [0] * len(gens)
        for pos, i in enumerate(rank):
            full[i] = a[pos]
        P = cache.get(full)
        _, cp = lead_term(P, order)
        coef = c * pow(cp, -1, p) % p
        tr.steps.append((tuple(full), coef))
        return P, coef

    if order.kind == "lex":
        tr.residue = _subduct_lex(f, step, max_steps, tr)
        return tr
    cur = f
    for _ in range(max_steps):
        if cur.is_zero():
            break
        e, c = lead_term(cur, order)
        r = step(e, c)
        if r is None:
            break
        cur = cur - r[0].scale(r[1])
    else:
        tr.exhausted = True
    tr.residue = cur
    return tr


def _subduct_lex(f, step, max_steps, tr):
    # remainder kept as {key: coeff} with a max-heap of keys; lex order is key order
    frame, p = f.frame, f.p
    terms = dict(zip(f.keys.tolist(), f.coeffs.tolist()))
    heap = [-k for k in terms]
    heapq.heapify(heap)
    for it in range(max_steps):
        if it and it % 5000 == 0:
            log.debug("subduction step %d, remainder %d terms", it, len(terms))
        while heap and -heap[0] not in terms:
            heapq.heappop(heap)
        if not heap:
            break
        k = -heap[0]
        e = tuple(int(v) for v in frame.unpack(np.array([k]))[0])
        r = step(e, terms[k])
        if r is None:
            break
        P, coef = r
        neg = (-coef) % p
        for kk, cc in zip(P.keys.tolist(), P.coeffs.tolist()):
            v = (terms.get(kk, 0) + neg * cc) % p
            if v:
                if kk not in terms:
                    heapq.heappush(heap, -kk)
                terms[kk] = v
            else:
                terms.pop(kk, None)
    else:
        tr.exhausted = True
    if not terms:
        return Polynomial.zero(frame, p)
    ks = np.array(sorted(terms), np.int64)
    return Polynomial(frame, p, ks, np.array([terms[k] for k in ks.tolist()], np.int64))


# ---------------------------------------------------------------- generating sets and tete-a-tetes

@dataclass
class GenSet:
    names: list
    polys: list

    def index(self, name):
        return self.names.index(name)


def hook_basis(m, q):
    """W, N(y1), x1 and xi_0..xi_{n-3}."""
    n = 2 * m
    names, polys = [], []
    for i in range(2, m + 1):
        from .invariants import X_, Y_
        names += [f"Y{i}", f"X{i}"]
        polys += [Y_(i, m, q), X_(i, m, q)]
    names += ["N(y1)", "x1"]
    polys += [hook_norm_y1(m, q), var(m, q, "x1")]
    for j in range(n - 2):
        names.append(f"xi{j}")
        polys.append(xi(j, m, q))
    return GenSet(names, polys)


def sylow_basis(m, q, max_degree=None):
    """H0 together with psi_j(xi_i), 0 <= i <= n-3-2j.  Generators above max_degree are left out."""
    from .invariants import deg_norm_x, deg_norm_y, deg_xi
    cat = catalog(q, m)
    n = 2 * m
    names, polys = [], []
    for i in range(1, m + 1):
        for nm, dg in ((f"y{i}", deg_norm_y(i, m, q)), (f"x{i}", deg_norm_x(i, q))):
            if max_degree is None or dg <= max_degree:
                names.append(f"N({nm})")
                polys.append(cat.norm(nm))
    for j in range(m):
        for i in range(0, n - 3 - 2 * j + 1):
            if max_degree is None or q ** j * deg_xi(i, q) <= max_degree:
                names.append(f"psi{j}(xi{i})")
                polys.append(psi_j(xi(i, m, q), j))
    return GenSet(names, polys)


def tete_a_tete_labels(kind, m, q):
    n = 2 * m
    out = []
    if kind == "hook":
        for j in range(n - 3):
            out.append(f"xi{j}^q - x1^(q-1) xi{j + 1}")
        out.append(f"xi{n - 3}^q - x1^q N(y1)")
        return out
    if kind in ("sylow", "borel"):
        for j in range(m):
            top = n - 3 - 2 * j
            for i in range(0, top + 1):
                if i < top:
                    out.append(f"psi{j}(xi{i})^q - psi{j}(xi{i + 1}) N(x{j + 1})^(q-1)")
                else:
                    out.append(f"psi{j}(xi{i})^q - N(y{j + 1}) N(x{j + 1})^q")
        if kind == "borel":
            for i in range(1, m + 1):
                out.append(f"(N(y{i})N(x{i}))^(q-1) - N(y{i})^(q-1) N(x{i})^(q-1)")
        return out
    raise ValueError(kind)


def tete_a_tetes(kind, m, q, skip_degree=None):
    """Differences of the listed generator-monomial pairs (optionally only those of degree <= skip_degree)."""
    n = 2 * m
    x1 = var(m, q, "x1")
    out = []
    if kind == "hook":
        for j in range(n - 3):
            if skip_degree is not None and q * (q ** j + 1 if j else 2) > skip_degree:
                out.append(None)
                continue
            out.append(xi(j, m, q) ** q - x1 ** (q - 1) * xi(j + 1, m, q))
        if skip_degree is not None and q * (q ** (n - 3) + 1) > skip_degree:
            out.append(None)
        else:
            out.append(xi(n - 3, m, q) ** q - x1 ** q * hook_norm_y1(m, q))
        return out
    if kind in ("sylow", "borel"):
        cat = catalog(q, m)
        for j in range(m):
            top = n - 3 - 2 * j
            for i in range(0, top + 1):
                deg = q * q ** j * (q ** i + 1 if i else 2)
                if skip_degree is not None and deg > skip_degree:
                    out.append(None)
                    continue
                a = psi_j(xi(i, m, q), j) ** q
                Nx = cat.N_x(j + 1)
                if i < top:
                    out.append(a - psi_j(xi(i + 1, m, q), j) * Nx ** (q - 1))
                else:
                    out.append(a - cat.N_y(j + 1) * Nx ** q)
        if kind == "borel":
            for i in range(1, m + 1):
                ny, nx = cat.N_y(i), cat.N_x(i)
                out.append((ny * nx) ** (q - 1) - ny ** (q - 1) * nx ** (q - 1))
        return out
    raise ValueError(kind)


# ---------------------------------------------------------------- verification

@dataclass
class KhovanskiiVerdict:
    passed: bool
    subductions: list = field(default_factory=list)
    monoid: list = field(default_factory=list)
    invariant: list = field(default_factory=list)
    mismatch: object = None
    seconds: float = 0.0
    skipped: list = field(default_factory=list)
    failed: list = field(default_factory=list)


def khovanskii_verify(gens, group_gens, D, tetes=(), order=LEX, torus="auto", labels=None,
                      max_steps=10 ** 6):
    """Truncated Khovanskii check up to degree D.

    (i) every listed tete-a-tete of degree <= D subducts to zero over gens
    (those above D, or passed as None, are reported in `skipped`);
    (ii) the lead-term monoid of gens has the same Hilbert function as the
    invariants in every degree <= D.
    """
    t0 = time.time()
    labels = list(labels) if labels is not None else [f"tete{i}" for i in range(len(tetes))]
    res, skipped, failed = [], [], []
    for lab, t in zip(labels, tetes):
        if t is None or (not t.is_zero() and t.hom_degree() > D):
            skipped.append(lab)
            continue
        tr = subduct(t, gens, order, max_steps=max_steps)
        res.append(tr)
        if not tr.reduced:
            failed.append(lab)
    degs = [g.hom_degree() for g in gens]
    lts = [lead_term(g, order)[0] for g, dg in zip(gens, degs) if dg <= D]
    ldeg = [dg for dg in degs if dg <= D]
    mon = monoid_hilbert(lts, ldeg, D) if lts else [1] + [0] * D
    inv = [invariant_dimension(group_gens, d, torus=torus) for d in range(D + 1)]
    mism = next((d for d in range(D + 1) if mon[d] != inv[d]), None)
    ok = not failed and mism is None
    return KhovanskiiVerdict(ok, res, mon, inv, mism, time.time() - t0, skipped, failed)
