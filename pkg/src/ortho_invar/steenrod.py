"""Steenrod operations on S_m and on the abstract rings R_k, plus the twisted maps.

P(t) is the algebra map v -> v + v^q t on linear forms, so a monomial
prod v^e goes to prod_v sum_k C(e, k) v^(e + (q-1)k) t^k.  P^i(f) is the
t^i coefficient.  It is extracted variable by variable while tracking the
t-degree used so far and discarding branches that can no longer land on i.
"""
from __future__ import annotations

import numpy as np

from .gf import binomial_mod_p, lucas_vec
from .ring import (Polynomial, _aggregate, _aggregate2, s_frame, substitute, t_frame)


# ---------------------------------------------------------------- S-side

def _expand(f, i=None, imax=None):
    """Per-variable expansion of P(t)(f).  Returns (keys, tdeg, coeffs).

    With i given only contributions to t^i survive; with imax, t-degree <= imax.
    """
    frame, p = f.frame, f.p
    q = p
    n = frame.n
    keys, coef = f.keys.copy(), f.coeffs.copy()
    s = np.zeros(len(keys), np.int64)
    if len(keys) == 0:
        return keys, s, coef
    if int(f.maxexp().max()) * q > frame.mask:
        raise OverflowError("exponent overflow in Steenrod operation")
    ex = frame.unpack(keys)
    tail = np.zeros((len(keys), n + 1), np.int64)
    tail[:, :n] = np.cumsum(ex[:, ::-1], axis=1)[:, ::-1]
    for j in range(n):
        e = frame.var_exp(keys, j)          # unprocessed exponent of v_j
        rem = (tail[:, j + 1] if i is not None else 0)
        if i is not None:
            lo = np.maximum(0, i - s - rem)
            hi = np.minimum(e, i - s)
        else:
            lo = np.zeros_like(e)
            hi = e if imax is None else np.minimum(e, imax - s)
        cnt = np.maximum(hi - lo + 1, 0)
        if not cnt.any():
            z = np.zeros(0, np.int64)
            return z, z, z
        idx = np.repeat(np.arange(len(e)), cnt)
        starts = np.cumsum(cnt) - cnt
        k = np.arange(int(cnt.sum()), dtype=np.int64) - np.repeat(starts, cnt) + lo[idx]
        b = lucas_vec(e[idx], k, p)
        keep = b != 0
        idx, k, b = idx[keep], k[keep], b[keep]
        keys = keys[idx] + (q - 1) * k * frame.units[j]
        coef = coef[idx] * b % p
        s = s[idx] + k
        tail = tail[idx]
        keys, s, coef, tail = _agg_with_tail(keys, s, coef, tail, p)
    return keys, s, coef


def _agg_with_tail(keys, s, coef, tail, p):
    # tail rows are determined by the untouched exponents, hence by the key;
    # aggregate on (key, s) and keep the first tail row of each group
    if len(keys) == 0:
        return keys, s, coef, tail
    order = np.lexsort((s, keys))
    a, b, c, t = keys[order], s[order], coef[order], tail[order]
    flag = np.empty(len(a), dtype=bool)
    flag[0] = True
    flag[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    idx = np.flatnonzero(flag)
    c = np.add.reduceat(c, idx) % p
    a, b, t = a[idx], b[idx], t[idx]
    nz = c != 0
    return a[nz], b[nz], c[nz], t[nz]


def steenrod(f, i):
    """P^i(f)."""
    if i < 0:
        return Polynomial.zero(f.frame, f.p)
    if i == 0 or f.is_zero():
        return f
    keys, s, coef = _expand(f, i=i)
    kk, cc = _aggregate(keys, coef, f.p)
    return Polynomial(f.frame, f.p, kk, cc)


class TSeries:
    """Coefficients of a power series in an auxiliary variable t, slot i = coefficient of t^i."""

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Polynomial.zero(self.coeffs[0].frame, self.coeffs[0].p)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        a, b = self.trimmed(), other.trimmed()
        return len(a) == len(b) and all(x == y for x, y in zip(a, b))

    def trimmed(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1].is_zero():
            c.pop()
        return c

    def degree(self):
        return len(self.trimmed()) - 1

    def evaluate(self, v):
        """Substitute a polynomial for t."""
        out = Polynomial.zero(self.coeffs[0].frame, self.coeffs[0].p)
        pw = Polynomial.const(out.frame, out.p, 1)
        for c in self.coeffs:
            if not c.is_zero():
                out = out + c * pw
            pw = pw * v
        return out


def steenrod_series(f, imax=None):
    """P(t)(f) as a TSeries; slots 0..deg f (or 0..imax)."""
    keys, s, coef = _expand(f, imax=imax)
    top = f.degree() if imax is None else imax
    top = max(top, 0)
    slots = []
    for i in range(top + 1):
        sel = s == i
        kk, cc = _aggregate(keys[sel], coef[sel], f.p)
        slots.append(Polynomial(f.frame, f.p, kk, cc))
    return TSeries(slots)


def with_t(frame, name="t"):
    return frame.extend([name])


def split_t(F, name="t"):
    """Split a polynomial of frame+[t] into a TSeries over frame."""
    base_names = [nm for nm in F.frame.names if nm != name]
    ti = F.frame.index(name)
    from .ring import Frame
    base = Frame(base_names, [w for nm, w in zip(F.frame.names, F.frame.weights) if nm != name])
    parts = F.collect(ti)
    top = max(parts) if parts else 0
    mapping = [base.index(nm) if nm != name else None for nm in F.frame.names]
    out = []
    for k in range(top + 1):
        if k in parts:
            out.append(parts[k].embed(base, mapping))
        else:
            out.append(Polynomial.zero(base, F.p))
    return TSeries(out)


def psi_series(f):
    """psi(f) in S[t]: the algebra map v -> v^q - v t^(q-1)."""
    q = f.p
    fr = f.frame
    ext = with_t(fr)
    ti = ext.index("t")
    images = []
    for i in range(fr.n):
        v = Polynomial.var(ext, q, i)
        images.append(v ** q - v * Polynomial.var(ext, q, ti, q - 1))
    return split_t(substitute(f, images, ext))


def psi_series_from_steenrod(f):
    """psi(f) = sum_l P^(d-l)(f) (-t^(q-1))^l for homogeneous f (cross-check route)."""
    q = f.p
    d = f.hom_degree()
    ser = steenrod_series(f)
    slots = [Polynomial.zero(f.frame, q)] * ((q - 1) * d + 1)
    for l in range(d + 1):
        slots[(q - 1) * l] = ser[d - l].scale((-1) ** l)
    return TSeries(slots)


def psi1_images(frame, q):
    x1 = Polynomial.var(frame, q, frame.index("x1"))
    out = []
    for i in range(frame.n):
        v = Polynomial.var(frame, q, i)
        out.append(v ** q - v * x1 ** (q - 1))
    return out


def psi1(f):
    """w -> w^q - w x1^(q-1) on linear forms, extended multiplicatively."""
    return substitute(f, psi1_images(f.frame, f.p))


def psi_j_poly(frame, q, j):
    """The images psi_j(v) = prod_{u in span(x1..xj)} (v - u) for each variable v."""
    xs = [Polynomial.var(frame, q, frame.index(f"x{k}")) for k in range(1, j + 1)]
    span = [Polynomial.zero(frame, q)]
    for x in xs:
        span = [u + x.scale(c) for u in span for c in range(q)]
    images = []
    for i in range(frame.n):
        v = Polynomial.var(frame, q, i)
        nm = frame.names[i]
        if nm.startswith("x") and int(nm[1:]) <= j:
            images.append(Polynomial.zero(frame, q))
            continue
        out = Polynomial.const(frame, q, 1)
        for u in span:
            out = out * (v - u)
        images.append(out)
    return images


def psi_j(f, j):
    m = f.frame.n // 2
    if not 0 <= j <= m:
        raise ValueError("j out of range")
    if j == 0:
        return f
    return substitute(f, psi_j_poly(f.frame, f.p, j))


def sigma(f):
    """Shift S_{m-1} -> S_m: y_j -> y_{j+1}, x_j -> x_{j+1}."""
    m1 = f.frame.n // 2
    tgt = s_frame(m1 + 1)
    mapping = []
    for nm in f.frame.names:
        mapping.append(tgt.index(f"{nm[0]}{int(nm[1:]) + 1}"))
    return f.embed(tgt, mapping)


def phi_iso(f):
    """psi_1 after the shift sigma: S_{m-1} -> S_m."""
    return psi1(sigma(f))


# ---------------------------------------------------------------- checks

def check_cartan(f, g, i):
    lhs = steenrod(f * g, i)
    rhs = Polynomial.zero(f.frame, f.p)
    for j in range(i + 1):
        a = steenrod(f, j)
        if a.is_zero():
            continue
        rhs = rhs + a * steenrod(g, i - j)
    return _verdict(lhs, rhs)


def adem_rhs(f, i, j):
    q = f.p
    out = Polynomial.zero(f.frame, q)
    for k in range(i // q + 1):
        c = binomial_mod_p((q - 1) * (j - k) - 1, i - q * k, q)
        if c == 0:
            continue
        term = steenrod(steenrod(f, k), i + j - k)
        out = out + term.scale(c * (-1) ** (i + k))
    return out


def check_adem(i, j, f):
    if not i < f.p * j:
        raise ValueError("Adem relation needs i < q j")
    lhs = steenrod(steenrod(f, j), i)
    return _verdict(lhs, adem_rhs(f, i, j))


def check_stability(f):
    d = f.hom_degree()
    a = _verdict(steenrod(f, 0), f)
    if not a[0]:
        return a
    b = _verdict(steenrod(f, d), f ** f.p)
    if not b[0]:
        return b
    return _verdict(steenrod(f, d + 1), Polynomial.zero(f.frame, f.p))


def _verdict(lhs, rhs):
    diff = lhs - rhs
    if diff.is_zero():
        return True, None
    from .ring import lead_term
    return False, lead_term(diff)


# ---------------------------------------------------------------- R-side

def r_images(k, q):
    """Images of T_0..T_k under P(t), in R_{k+1}[t]."""
    fr = t_frame(k + 1, q).extend(["t"])
    Tv = lambda j, e=1: Polynomial.var(fr, q, fr.index(f"T{j}"), e)
    tv = lambda e: Polynomial.var(fr, q, fr.index("t"), e)
    out = {}
    for j in range(k + 1):
        if j == 0:
            out[0] = Tv(0) + Tv(1) * tv(1) + Tv(0, q) * tv(2)
        elif j == 1:
            out[1] = Tv(1) + Tv(0, q).scale(2) * tv(1) + Tv(2) * tv(q) + Tv(1, q) * tv(q + 1)
        else:
            out[j] = Tv(j) + Tv(j - 1, q) * tv(1) + Tv(j + 1) * tv(q ** j) + Tv(j, q) * tv(q ** j + 1)
    return fr, out


def r_steenrod(F, i):
    """P^i on the abstract ring R_k; the result lives in R_{k+1}."""
    k = int(F.frame.names[0][1:])
    q = F.p
    fr, imgs = r_images(k, q)
    images = [imgs[int(nm[1:])] for nm in F.frame.names]
    G = substitute(F, images, fr, trunc=(fr.index("t"), i))
    ser = split_t(G)
    return ser[i]


def r_lift(F, k):
    """View F in R_k (k at least its own top index)."""
    q = F.p
    tgt = t_frame(k, q)
    return F.embed(tgt)
