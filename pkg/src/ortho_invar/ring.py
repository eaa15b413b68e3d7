"""Sparse polynomials over GF(p) on numpy arrays.

A polynomial is a sorted int64 array of packed monomial keys plus an int64
coefficient array (residues in 1..p-1).  Variable 0 sits in the highest bit
field, so lex order on exponent vectors is integer order on keys and the lex
lead term is simply the last key.  Exponent vectors are only materialised
when an order other than lex is needed or at the API boundary.

Frames fix the variable names (and optional weights).  The orthogonal
polynomial ring uses [y1..ym, xm..x1]; the abstract rings R_k use
[Tk..T0] with T_j weighted q^j + 1.
"""
from __future__ import annotations

import json
import re
from functools import lru_cache

import numpy as np

from .gf import FieldSpec, binomial_mod_p, lucas_vec

_CHUNK = 1 << 22  # pair products materialised per block in multiplication


# ---------------------------------------------------------------- frames

class Frame:
    __slots__ = ("names", "weights", "n", "bits", "shifts", "mask", "units", "_hash")

    def __init__(self, names, weights=None):
        names = tuple(names)
        n = len(names)
        if n == 0:
            names, n = (), 0
        self.names = names
        self.n = n
        self.weights = tuple(weights) if weights is not None else (1,) * n
        self.bits = 63 // max(n, 1)
        self.shifts = np.array([self.bits * (n - 1 - i) for i in range(n)], dtype=np.int64)
        self.mask = (1 << self.bits) - 1
        self.units = [1 << int(s) for s in self.shifts]
        self._hash = hash((self.names, self.weights))

    def __eq__(self, other):
        return isinstance(other, Frame) and self.names == other.names and self.weights == other.weights

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Frame({','.join(self.names)})"

    def index(self, name):
        return self.names.index(name)

    @property
    def maxexp(self):
        return self.mask

    def pack(self, exps):
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, self.n)
        if exps.size and (exps.min() < 0 or exps.max() > self.mask):
            raise OverflowError(f"exponent outside [0, {self.mask}] for {self}")
        return (exps << self.shifts).sum(axis=1) if self.n else np.zeros(len(exps), np.int64)

    def unpack(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        return (keys[:, None] >> self.shifts) & self.mask

    def var_exp(self, keys, i):
        return (keys >> self.shifts[i]) & self.mask

    def extend(self, extra, weights=None):
        w = self.weights + (tuple(weights) if weights is not None else (1,) * len(extra))
        return Frame(self.names + tuple(extra), w)


@lru_cache(maxsize=None)
def s_frame(m):
    """Frame of S_m with the order y1 > ... > ym > xm > ... > x1."""
    return Frame([f"y{i}" for i in range(1, m + 1)] + [f"x{i}" for i in range(m, 0, -1)])


@lru_cache(maxsize=None)
def t_frame(k, q):
    """Frame of R_k: variables T_k..T_0, T_j carrying S-weight q^j + 1."""
    return Frame([f"T{j}" for j in range(k, -1, -1)], [q ** j + 1 for j in range(k, -1, -1)])


def yi(frame, i):
    return frame.index(f"y{i}")


def xi_idx(frame, i):
    return frame.index(f"x{i}")


# ---------------------------------------------------------------- helpers

def _aggregate(keys, coeffs, p):
    if len(keys) == 0:
        return keys.astype(np.int64), coeffs.astype(np.int64)
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    c = coeffs[order]
    flag = np.empty(len(k), dtype=bool)
    flag[0] = True
    np.not_equal(k[1:], k[:-1], out=flag[1:])
    idx = np.flatnonzero(flag)
    s = np.add.reduceat(c, idx) % p
    k = k[idx]
    nz = s != 0
    return k[nz], s[nz]


def _aggregate2(k1, k2, coeffs, p):
    """Aggregate on the pair (k1, k2)."""
    if len(k1) == 0:
        return k1, k2, coeffs
    order = np.lexsort((k2, k1))
    a, b, c = k1[order], k2[order], coeffs[order]
    flag = np.empty(len(a), dtype=bool)
    flag[0] = True
    flag[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    idx = np.flatnonzero(flag)
    s = np.add.reduceat(c, idx) % p
    a, b = a[idx], b[idx]
    nz = s != 0
    return a[nz], b[nz], s[nz]


def _check_prime_field(field):
    if field.k != 1:
        raise ValueError("polynomial layer supports prime fields only")


class InexactDivision(ArithmeticError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


# ---------------------------------------------------------------- polynomial

class Polynomial:
    __slots__ = ("frame", "p", "keys", "coeffs", "_maxexp")

    def __init__(self, frame, p, keys, coeffs, _checked=True):
        self.frame = frame
        self.p = int(p)
        self.keys = keys
        self.coeffs = coeffs
        self._maxexp = None

    # constructors
    @classmethod
    def zero(cls, frame, p):
        return cls(frame, p, np.zeros(0, np.int64), np.zeros(0, np.int64))

    @classmethod
    def const(cls, frame, p, c=1):
        c = int(c) % p
        if c == 0:
            return cls.zero(frame, p)
        return cls(frame, p, np.zeros(1, np.int64), np.array([c], np.int64))

    @classmethod
    def var(cls, frame, p, i, e=1):
        if isinstance(i, str):
            i = frame.index(i)
        return cls(frame, p, np.array([e << int(frame.shifts[i])], np.int64), np.ones(1, np.int64))

    @classmethod
    def from_arrays(cls, frame, p, exps, coeffs):
        keys = frame.pack(exps)
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1) % p
        k, c = _aggregate(keys, c, p)
        return cls(frame, p, k, c)

    @classmethod
    def from_keys(cls, frame, p, keys, coeffs):
        k, c = _aggregate(np.asarray(keys, np.int64), np.asarray(coeffs, np.int64) % p, p)
        return cls(frame, p, k, c)

    @classmethod
    def from_terms(cls, frame, p, terms):
        if not terms:
            return cls.zero(frame, p)
        exps = list(terms.keys())
        return cls.from_arrays(frame, p, np.array(exps, dtype=np.int64), [int(terms[e]) for e in exps])

    @classmethod
    def monomial(cls, frame, p, exps, c=1):
        return cls.from_arrays(frame, p, np.array([exps], np.int64), [c])

    # basic queries
    @property
    def field(self):
        return FieldSpec(self.p)

    @property
    def nterms(self):
        return len(self.keys)

    def __len__(self):
        return len(self.keys)

    def is_zero(self):
        return len(self.keys) == 0

    def __bool__(self):
        return not self.is_zero()

    def exps(self):
        return self.frame.unpack(self.keys)

    def terms(self):
        e = self.exps()
        return {tuple(int(v) for v in row): int(c) for row, c in zip(e, self.coeffs)}

    def maxexp(self):
        """Per-variable exponent bound (exact unless inherited from a product)."""
        if self._maxexp is None:
            self._maxexp = self.exps().max(axis=0) if len(self.keys) else np.zeros(self.frame.n, np.int64)
        return self._maxexp

    def degrees(self):
        return self.exps().sum(axis=1)

    def weighted_degrees(self, weights=None):
        w = np.array(weights if weights is not None else self.frame.weights, dtype=np.int64)
        return self.exps() @ w

    def degree(self):
        if self.is_zero():
            return -1
        return int(self.degrees().max())

    def is_homogeneous(self, weights=None):
        if len(self.keys) <= 1:
            return True
        d = self.weighted_degrees(weights) if weights is not None else self.degrees()
        return bool((d == d[0]).all())

    def hom_degree(self, weights=None):
        """Degree of a homogeneous polynomial (raises otherwise)."""
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        if not self.is_homogeneous(weights):
            raise ValueError("polynomial is not homogeneous")
        d = self.weighted_degrees(weights) if weights is not None else self.degrees()
        return int(d[0])

    def coeff(self, exps):
        key = int(self.frame.pack(np.array([exps]))[0])
        i = np.searchsorted(self.keys, key)
        if i < len(self.keys) and self.keys[i] == key:
            return int(self.coeffs[i])
        return 0

    def constant_term(self):
        if len(self.keys) and self.keys[0] == 0:
            return int(self.coeffs[0])
        return 0

    def _same(self, other):
        if self.frame != other.frame or self.p != other.p:
            raise ValueError(f"frame/field mismatch: {self.frame}/{self.p} vs {other.frame}/{other.p}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._same(other)
            return other
        if isinstance(other, (int, np.integer)):
            return Polynomial.const(self.frame, self.p, int(other))
        return NotImplemented

    # arithmetic
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = Polynomial.const(self.frame, self.p, int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.frame == other.frame and self.p == other.p and len(self.keys) == len(other.keys)
                and bool(np.array_equal(self.keys, other.keys)) and bool(np.array_equal(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.frame, self.p, self.keys.tobytes(), self.coeffs.tobytes()))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        k, c = _aggregate(np.concatenate([self.keys, other.keys]), np.concatenate([self.coeffs, other.coeffs]), self.p)
        return Polynomial(self.frame, self.p, k, c)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.frame, self.p, self.keys, (self.p - self.coeffs) % self.p)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = int(c) % self.p
        if c == 0:
            return Polynomial.zero(self.frame, self.p)
        if c == 1:
            return self
        return Polynomial(self.frame, self.p, self.keys, self.coeffs * c % self.p)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.frame, self.p)
        a, b = (self, other) if len(self.keys) >= len(other.keys) else (other, self)
        me = a.maxexp() + b.maxexp()
        if me.max() > self.frame.mask:
            raise OverflowError("exponent overflow in product")
        p = self.p
        if len(b.keys) == 1:
            out = Polynomial(self.frame, p, a.keys + b.keys[0], a.coeffs * b.coeffs[0] % p)
            out._maxexp = me
            return out
        # blocks laid out b-major: each row is a sorted run, which the stable
        # (merge based) sort in _aggregate exploits
        step = max(1, _CHUNK // len(b.keys))
        parts_k, parts_c, pending = [], [], 0
        for s in range(0, len(a.keys), step):
            ak, ac = a.keys[s:s + step], a.coeffs[s:s + step]
            kk = (b.keys[:, None] + ak[None, :]).ravel()
            cc = (b.coeffs[:, None] * ac[None, :]).ravel()
            kk, cc = _aggregate(kk, cc % p, p)
            parts_k.append(kk)
            parts_c.append(cc)
            pending += len(kk)
            if pending > 4 * _CHUNK and len(parts_k) > 1:
                kk, cc = _aggregate(np.concatenate(parts_k), np.concatenate(parts_c), p)
                parts_k, parts_c, pending = [kk], [cc], len(kk)
        if len(parts_k) == 1:
            out = Polynomial(self.frame, p, parts_k[0], parts_c[0])
        else:
            k, c = _aggregate(np.concatenate(parts_k), np.concatenate(parts_c), p)
            out = Polynomial(self.frame, p, k, c)
        out._maxexp = me
        return out

    __rmul__ = __mul__

    def frobenius(self, i=1):
        """Raise every variable to the p^i power (coefficients in GF(p) are fixed)."""
        if i == 0 or self.is_zero():
            return self
        f = self.p ** i
        if int(self.maxexp().max()) * f > self.frame.mask:
            raise OverflowError("exponent overflow in Frobenius")
        out = Polynomial(self.frame, self.p, self.keys * f, self.coeffs)
        out._maxexp = self.maxexp() * f
        return out

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return Polynomial.const(self.frame, self.p, 1)
        if len(self.keys) == 1:
            if int(self.maxexp().max()) * n > self.frame.mask:
                raise OverflowError("exponent overflow in power")
            return Polynomial(self.frame, self.p, self.keys * n, np.array([pow(int(self.coeffs[0]), n, self.p)], np.int64))
        out = None
        base = self
        while n:
            d = n % self.p
            if d:
                piece = base
                for _ in range(d - 1):
                    piece = piece * base
                out = piece if out is None else out * piece
            n //= self.p
            if n:
                base = base.frobenius(1)
        return out

    # lead terms
    def lt(self, order=None):
        return lead_term(self, order or LEX)

    def lm_key(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no lead term")
        return int(self.keys[-1])

    # slicing by one variable
    def collect(self, i):
        """Split as sum_k c_k v_i^k; returns {k: c_k} with c_k free of v_i."""
        if isinstance(i, str):
            i = self.frame.index(i)
        e = self.frame.var_exp(self.keys, i)
        rest = self.keys - (e << self.frame.shifts[i])
        out = {}
        if len(e) == 0:
            return out
        order = np.argsort(e, kind="stable")
        es = e[order]
        bounds = np.flatnonzero(np.diff(es)) + 1
        for grp in np.split(order, bounds):
            k = int(e[grp[0]])
            # stable argsort keeps grp ascending, so keys stay sorted
            out[k] = Polynomial(self.frame, self.p, rest[grp], self.coeffs[grp])
        return out

    def shift_var(self, i, k):
        """Multiply by v_i^k."""
        if k == 0:
            return self
        return self * Polynomial.var(self.frame, self.p, i, k)

    def filter_keys(self, mask):
        return Polynomial(self.frame, self.p, self.keys[mask], self.coeffs[mask])

    def homogeneous_part(self, d, weights=None):
        if self.is_zero():
            return self
        deg = self.weighted_degrees(weights) if weights is not None else self.degrees()
        return self.filter_keys(deg == d)

    def embed(self, frame, mapping=None):
        """Move into `frame`; mapping[i] = target index of source variable i (default by name)."""
        if mapping is None:
            mapping = [frame.index(nm) for nm in self.frame.names]
        e = self.exps()
        out = np.zeros((len(e), frame.n), np.int64)
        for i, t in enumerate(mapping):
            if t is None:
                if len(e) and e[:, i].any():
                    raise ValueError(f"variable {self.frame.names[i]} has no target")
                continue
            out[:, t] += e[:, i]
        return Polynomial.from_arrays(frame, self.p, out, self.coeffs)

    # text
    def __repr__(self):
        return render(self) if len(self.keys) < 40 else f"<Polynomial {self.frame} {len(self.keys)} terms deg {self.degree()}>"

    def __str__(self):
        return render(self)


# ---------------------------------------------------------------- orders

class MonomialOrder:
    """lex, grevlex, or weighted_grevlex(weights)."""

    def __init__(self, kind, weights=None):
        if kind not in ("lex", "grevlex", "weighted_grevlex"):
            raise ValueError(kind)
        self.kind = kind
        self.weights = None if weights is None else tuple(int(w) for w in weights)

    def __repr__(self):
        return f"MonomialOrder({self.kind})"

    def sort_key(self, exps):
        """A tuple key so that larger monomials get larger keys."""
        exps = tuple(int(v) for v in exps)
        if self.kind == "lex":
            return exps
        if self.kind == "grevlex":
            return (sum(exps),) + tuple(-v for v in reversed(exps))
        w = self.weights
        return (sum(a * b for a, b in zip(w, exps)),) + tuple(-v for v in reversed(exps))

    def compare(self, a, b):
        ka, kb = self.sort_key(a), self.sort_key(b)
        return (ka > kb) - (ka < kb)

    def lead_index(self, f):
        if f.is_zero():
            raise ValueError("zero polynomial has no lead term")
        if self.kind == "lex":
            return len(f.keys) - 1
        e = f.exps()
        if self.kind == "grevlex":
            w = np.ones(f.frame.n, np.int64)
        else:
            w = np.array(self.weights if self.weights is not None else f.frame.weights, np.int64)
        d = e @ w
        cand = np.flatnonzero(d == d.max())
        for j in range(f.frame.n - 1, -1, -1):
            if len(cand) == 1:
                break
            col = e[cand, j]
            cand = cand[col == col.min()]
        return int(cand[0])


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def weighted_grevlex(frame_or_weights):
    w = frame_or_weights.weights if isinstance(frame_or_weights, Frame) else frame_or_weights
    return MonomialOrder("weighted_grevlex", w)


def lead_term(f, order=LEX):
    """(exponent tuple, coefficient) of the order-maximal term."""
    i = order.lead_index(f)
    e = f.frame.unpack(f.keys[i:i + 1])[0]
    return tuple(int(v) for v in e), int(f.coeffs[i])


def lead_poly(f, order=LEX):
    i = order.lead_index(f)
    return Polynomial(f.frame, f.p, f.keys[i:i + 1].copy(), f.coeffs[i:i + 1].copy())


# ---------------------------------------------------------------- division

def _monomial_divide(f, g):
    gk, gc = int(g.keys[0]), int(g.coeffs[0])
    ge = f.frame.unpack(g.keys)[0]
    fe = f.exps()
    ok = (fe >= ge).all(axis=1)
    if not ok.all():
        bad = np.flatnonzero(~ok)[-1]
        raise InexactDivision("monomial does not divide", witness=(tuple(int(v) for v in fe[bad]), int(f.coeffs[bad])))
    inv = pow(gc, -1, f.p)
    return Polynomial(f.frame, f.p, f.keys - gk, f.coeffs * inv % f.p)


def exact_divide(f, g):
    """h with g*h = f.  Eliminates lex-leading slices in the top variable of g.

    Raises InexactDivision carrying the lead term of the remainder at the
    point elimination got stuck.
    """
    f._same(g)
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return Polynomial.zero(f.frame, f.p)
    if len(g.keys) == 1:
        return _monomial_divide(f, g)
    frame, p = f.frame, f.p
    ge = frame.unpack(g.keys[-1:])[0]
    v = int(np.flatnonzero(ge)[0])   # lex-top variable occurring in g
    gs = g.collect(v)
    J = max(gs)
    gJ = gs[J]
    others = [(j, gj) for j, gj in gs.items() if j != J]
    rem = f.collect(v)
    h = {}
    while rem:
        K = max(rem)
        fK = rem.pop(K)
        if K < J:
            rem[K] = fK
            raise InexactDivision("remainder nonzero", witness=_remainder_witness(rem, v, frame, p))
        try:
            hk = exact_divide(fK, gJ)
        except InexactDivision:
            rem[K] = fK
            raise InexactDivision("remainder nonzero", witness=_remainder_witness(rem, v, frame, p))
        h[K - J] = hk
        for j, gj in others:
            t = K - J + j
            upd = rem.get(t, Polynomial.zero(frame, p)) - hk * gj
            if upd.is_zero():
                rem.pop(t, None)
            else:
                rem[t] = upd
    out_k, out_c = [], []
    for k, hk in h.items():
        out_k.append(hk.keys + (k << int(frame.shifts[v])))
        out_c.append(hk.coeffs)
    kk, cc = _aggregate(np.concatenate(out_k), np.concatenate(out_c), p)
    return Polynomial(frame, p, kk, cc)


def _remainder_witness(rem, v, frame, p):
    best = None
    for k, r in rem.items():
        key = int(r.keys[-1]) + (k << int(frame.shifts[v]))
        c = int(r.coeffs[-1])
        if best is None or key > best[0]:
            best = (key, c)
    e = frame.unpack(np.array([best[0]]))[0]
    return tuple(int(x) for x in e), best[1]


def divide_linear(f, ell):
    """f / ell for a linear form ell, by synthetic division in ell's top variable."""
    f._same(ell)
    frame, p = f.frame, f.p
    if ell.is_zero():
        raise ZeroDivisionError
    le = ell.exps()
    if (le.sum(axis=1) != 1).any():
        raise ValueError("divisor is not a linear form")
    v = int(np.flatnonzero(le[-1])[0])
    c = int(ell.coeffs[-1])
    cinv = pow(c, -1, p)
    r = Polynomial(frame, p, ell.keys[:-1], ell.coeffs[:-1])
    sl = f.collect(v)
    K = max(sl)
    if K == 0:
        raise InexactDivision("divisor variable absent", witness=lead_term(f))
    h = {}
    cur = sl.get(K)
    for k in range(K, 0, -1):
        hk = cur.scale(cinv)          # h_{k-1}
        if not hk.is_zero():
            h[k - 1] = hk
        nxt = sl.get(k - 1, Polynomial.zero(frame, p))
        cur = nxt - r * hk if not hk.is_zero() else nxt
    if not cur.is_zero():
        raise InexactDivision("remainder nonzero", witness=lead_term(cur))
    if not h:
        return Polynomial.zero(frame, p)
    sh = int(frame.shifts[v])
    kk, cc = _aggregate(np.concatenate([hk.keys + (k << sh) for k, hk in h.items()]),
                        np.concatenate([hk.coeffs for hk in h.values()]), p)
    return Polynomial(frame, p, kk, cc)


# ---------------------------------------------------------------- substitution

def transvect(f, i, j, c):
    """Substitute v_i -> v_i + c v_j (i != j)."""
    c = int(c) % f.p
    if c == 0 or f.is_zero():
        return f
    frame, p = f.frame, f.p
    e = frame.var_exp(f.keys, i)
    if int(e.max()) == 0:
        return f
    if int(e.max()) + int(f.maxexp()[j]) > frame.mask:
        raise OverflowError("exponent overflow in transvection")
    reps = e + 1
    idx = np.repeat(np.arange(len(e)), reps)
    starts = np.cumsum(reps) - reps
    k = np.arange(int(reps.sum()), dtype=np.int64) - np.repeat(starts, reps)
    ee = e[idx]
    b = lucas_vec(ee, k, p)
    keep = b != 0
    idx, k, b = idx[keep], k[keep], b[keep]
    cp = np.array([pow(c, t, p) for t in range(p - 1)], np.int64)
    coef = f.coeffs[idx] * b % p * cp[k % (p - 1)] % p
    keys = f.keys[idx] + k * (frame.units[j] - frame.units[i])
    kk, cc = _aggregate(keys, coef, p)
    return Polynomial(frame, p, kk, cc)


def permute_vars(f, perm):
    """Substitute v_i -> v_{perm[i]} (perm a permutation of indices)."""
    e = f.exps()
    out = np.zeros_like(e)
    for i, t in enumerate(perm):
        out[:, t] += e[:, i]
    return Polynomial.from_arrays(f.frame, f.p, out, f.coeffs)


def scale_var(f, i, c):
    """Substitute v_i -> c v_i."""
    c = int(c) % f.p
    if c == 0:
        raise ValueError("use substitute for singular maps")
    e = f.frame.var_exp(f.keys, i)
    cp = np.array([pow(c, t, f.p) for t in range(f.p - 1)], np.int64)
    return Polynomial(f.frame, f.p, f.keys, f.coeffs * cp[e % (f.p - 1)] % f.p)


def _power_cache(img, trunc):
    cache = {0: Polynomial.const(img.frame, img.p, 1), 1: _truncate(img, trunc)}

    def get(e):
        if e in cache:
            return cache[e]
        top = max(k for k in cache if k <= e)
        cur = cache[top]
        for k in range(top + 1, e + 1):
            cur = _truncate(cur * img, trunc)
            cache[k] = cur
        return cur
    return get


def _truncate(f, trunc):
    if trunc is None or f.is_zero():
        return f
    var, cap = trunc
    e = f.frame.var_exp(f.keys, var)
    if int(e.max()) <= cap:
        return f
    return f.filter_keys(e <= cap)


def substitute(f, images, target=None, trunc=None):
    """Algebra homomorphism v_i -> images[i].

    images are polynomials over the target frame (default f's frame).
    trunc=(target var index, cap) discards terms above that exponent as it goes.
    """
    src = f.frame
    if len(images) != src.n:
        raise ValueError(f"need {src.n} images, got {len(images)}")
    tgt = target or (images[0].frame if images else src)
    p = f.p
    for im in images:
        if im.frame != tgt or im.p != p:
            raise ValueError("image frame/field mismatch")
    if f.is_zero():
        return Polynomial.zero(tgt, p)
    # all-monomial fast path
    if all(len(im.keys) <= 1 for im in images):
        return _substitute_monomial(f, images, tgt, trunc)
    me = f.maxexp()
    bound = np.zeros(tgt.n, np.int64)
    for i, im in enumerate(images):
        if not im.is_zero():
            bound += int(me[i]) * im.maxexp()
    if trunc is not None:
        bound[trunc[0]] = min(bound[trunc[0]], trunc[1] + int(max(im.maxexp()[trunc[0]] for im in images if not im.is_zero())))
    if bound.max() > tgt.mask:
        raise OverflowError("exponent overflow in substitution")
    skeys = f.keys.copy()
    tkeys = np.zeros(len(skeys), np.int64)
    coef = f.coeffs.copy()
    order = sorted(range(src.n), key=lambda i: len(images[i].keys))
    for i in order:
        e = src.var_exp(skeys, i)
        if not e.any():
            continue
        skeys = skeys - (e << src.shifts[i])
        get = _power_cache(images[i], trunc)
        nk_s, nk_t, nc = [], [], []
        for val in np.unique(e):
            sel = np.flatnonzero(e == val)
            P = get(int(val))
            if P.is_zero():
                continue
            nk_s.append(np.repeat(skeys[sel], len(P.keys)))
            nk_t.append((tkeys[sel][:, None] + P.keys[None, :]).ravel())
            nc.append((coef[sel][:, None] * P.coeffs[None, :] % p).ravel())
        if not nk_s:
            return Polynomial.zero(tgt, p)
        skeys, tkeys, coef = np.concatenate(nk_s), np.concatenate(nk_t), np.concatenate(nc)
        if trunc is not None:
            keep = tgt.var_exp(tkeys, trunc[0]) <= trunc[1]
            skeys, tkeys, coef = skeys[keep], tkeys[keep], coef[keep]
        skeys, tkeys, coef = _aggregate2(skeys, tkeys, coef, p)
    kk, cc = _aggregate(tkeys, coef, p)
    return Polynomial(tgt, p, kk, cc)


def _substitute_monomial(f, images, tgt, trunc):
    p = f.p
    e = f.exps()
    alive = np.ones(len(e), bool)
    keys = np.zeros(len(e), np.int64)
    coef = f.coeffs.copy()
    bound = np.zeros(tgt.n, np.int64)
    for i, im in enumerate(images):
        col = e[:, i]
        if im.is_zero():
            alive &= col == 0
            continue
        ime = im.exps()[0]
        bound += int(col.max()) * ime
        keys = keys + col * int(im.keys[0])
        cp = np.array([pow(int(im.coeffs[0]), t, p) for t in range(p - 1)], np.int64)
        coef = coef * cp[col % (p - 1)] % p
    if bound.max() > tgt.mask:
        raise OverflowError("exponent overflow in substitution")
    keys, coef = keys[alive], coef[alive]
    if trunc is not None and len(keys):
        keep = tgt.var_exp(keys, trunc[0]) <= trunc[1]
        keys, coef = keys[keep], coef[keep]
    kk, cc = _aggregate(keys, coef, p)
    return Polynomial(tgt, p, kk, cc)


def substitute_linear(f, images, target=None):
    """Algebra homomorphism given by images of the degree-one generators."""
    return substitute(f, images, target)


# ---------------------------------------------------------------- R-side

def TPolynomial(k, q, terms=None):
    """Polynomial in T_k..T_0 (exponent tuples ordered T_k first)."""
    fr = t_frame(k, q)
    if terms is None:
        return Polynomial.zero(fr, q)
    return Polynomial.from_terms(fr, q, terms)


def T(k, q, j, e=1):
    """The generator T_j (as an element of R_k)."""
    fr = t_frame(k, q)
    return Polynomial.var(fr, q, fr.index(f"T{j}"), e)


def r_degrees(F):
    return F.degrees()


def s_degree(F):
    return F.hom_degree(F.frame.weights)


def phi_eval(F, m):
    """Image of F in S_m under T_j -> xi_j."""
    from .invariants import xi
    names = F.frame.names
    idx = [int(nm[1:]) for nm in names]
    if any(not nm.startswith("T") for nm in names):
        raise ValueError("phi_eval expects a T-frame")
    if max(idx) > 2 * m:
        raise ValueError(f"T index {max(idx)} exceeds 2m = {2 * m}")
    q = F.p
    images = [xi(j, m, q) for j in idx]
    return substitute(F, images, s_frame(m))


# ---------------------------------------------------------------- text / json

_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def render(f):
    if f.is_zero():
        return "0"
    e = f.exps()
    parts = []
    for row, c in zip(e[::-1], f.coeffs[::-1]):
        facs = []
        for nm, v in zip(f.frame.names, row):
            if v == 1:
                facs.append(nm)
            elif v > 1:
                facs.append(f"{nm}^{int(v)}")
        c = int(c)
        if not facs:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(facs))
        else:
            parts.append(f"{c}*" + "*".join(facs))
    return " + ".join(parts)


def parse(text, frame, p):
    text = text.strip()
    if text == "" :
        raise ValueError("empty polynomial text")
    if text == "0":
        return Polynomial.zero(frame, p)
    pos = 0
    terms = {}
    s = text.replace(" ", "")
    tokens = re.findall(r"[+-]?[^+-]+", s)
    if "".join(tokens) != s:
        raise ValueError(f"malformed polynomial text: {text!r}")
    for tok in tokens:
        sign = -1 if tok.startswith("-") else 1
        body = tok.lstrip("+-")
        if not body:
            raise ValueError(f"malformed term in {text!r}")
        c = 1
        ex = [0] * frame.n
        for fac in body.split("*"):
            if not fac:
                raise ValueError(f"malformed factor in {tok!r}")
            if fac.isdigit():
                c *= int(fac)
                continue
            if "^" in fac:
                nm, _, pw = fac.partition("^")
                if not pw.isdigit():
                    raise ValueError(f"bad exponent in {fac!r}")
                pw = int(pw)
            else:
                nm, pw = fac, 1
            if nm not in frame.names:
                raise ValueError(f"unknown variable {nm!r}")
            ex[frame.index(nm)] += pw
        if max(ex, default=0) > frame.mask:
            raise OverflowError("exponent overflow")
        key = tuple(ex)
        terms[key] = (terms.get(key, 0) + sign * c) % p
        pos += 1
    return Polynomial.from_terms(frame, p, terms)


def to_json(f, q=None, m=None):
    e = f.exps()
    d = {"q": f.p}
    if all(nm[0] in "xy" for nm in f.frame.names):
        d["m"] = f.frame.n // 2
    else:
        d["vars"] = list(f.frame.names)
        if f.frame.names and f.frame.names[0].startswith("T"):
            d["k"] = int(f.frame.names[0][1:])
    d["terms"] = [{"c": int(c), "e": [int(v) for v in row]} for row, c in zip(e[::-1], f.coeffs[::-1])]
    return d


def from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    q = int(obj["q"])
    fs = FieldSpec(q)
    _check_prime_field(fs)
    if "m" in obj:
        frame = s_frame(int(obj["m"]))
    elif "k" in obj:
        frame = t_frame(int(obj["k"]), q)
    else:
        frame = Frame(obj["vars"])
    terms = {}
    for t in obj["terms"]:
        c = int(t["c"])
        if not 0 <= c < q:
            raise ValueError(f"coefficient {c} outside [0,{q})")
        e = tuple(int(v) for v in t["e"])
        if len(e) != frame.n:
            raise ValueError("exponent vector length mismatch")
        if any(v < 0 for v in e):
            raise ValueError("negative exponent")
        if max(e, default=0) > frame.mask:
            raise OverflowError("exponent overflow")
        terms[e] = (terms.get(e, 0) + c) % q
    return Polynomial.from_terms(frame, q, terms)


# convenience

def variables(frame, p):
    return [Polynomial.var(frame, p, i) for i in range(frame.n)]


def S(m, q):
    """Variables of S_m as a dict name -> Polynomial."""
    fr = s_frame(m)
    return {nm: Polynomial.var(fr, q, i) for i, nm in enumerate(fr.names)}
