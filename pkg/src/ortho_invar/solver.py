"""Linear algebra over GF(p) for invariant theory bookkeeping.

Fixed-space dimensions per degree, expressing a polynomial in given
generators, the R-side valuation, Hilbert series of free block
decompositions, zero-set scans and algebraic-independence ranks.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np
from numba import njit
from scipy import sparse

from .gf import FieldSpec
from .ring import Frame, Polynomial, _aggregate, permute_vars, s_frame, scale_var, t_frame, transvect


# ---------------------------------------------------------------- dense GF(p) elimination

@njit(cache=True)
def _eliminate(A, p, reduced):
    rows, cols = A.shape
    inv = np.zeros(p, np.int64)
    for a in range(1, p):
        for b in range(1, p):
            if a * b % p == 1:
                inv[a] = b
    piv = np.full(min(rows, cols), -1, np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, cols):
                t = A[r, j]
                A[r, j] = A[k, j]
                A[k, j] = t
        a = inv[A[r, c]]
        if a != 1:
            for j in range(c, cols):
                A[r, j] = A[r, j] * a % p
        lo = 0 if reduced else r + 1
        for i in range(lo, rows):
            if i == r:
                continue
            f = A[i, c]
            if f != 0:
                for j in range(c, cols):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        piv[r] = c
        r += 1
    return piv[:r]


def rref_mod_p(A, p, reduced=True):
    """Row echelon form mod p (reduced by default).  Returns (R, pivot columns)."""
    A = np.ascontiguousarray(np.array(A, dtype=np.int64) % p)
    if A.size == 0:
        return A, []
    piv = _eliminate(A, p, reduced)
    return A, [int(c) for c in piv]


@njit(cache=True)
def _panel_pivots(P, p):
    # echelon of a narrow panel with row swaps tracked; returns (perm, pivot cols)
    rows, cols = P.shape
    perm = np.arange(rows)
    inv = np.zeros(p, np.int64)
    for a in range(1, p):
        for b in range(1, p):
            if a * b % p == 1:
                inv[a] = b
    pc = np.full(min(rows, cols), -1, np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if P[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = P[r, j]
                P[r, j] = P[k, j]
                P[k, j] = t
            t = perm[r]
            perm[r] = perm[k]
            perm[k] = t
        a = inv[P[r, c]]
        for j in range(c, cols):
            P[r, j] = P[r, j] * a % p
        for i in range(r + 1, rows):
            f = P[i, c]
            if f != 0:
                for j in range(c, cols):
                    P[i, j] = (P[i, j] - f * P[r, j]) % p
        pc[r] = c
        r += 1
    return perm, pc[:r]


def echelon_mod_p(A, p, block=64):
    """Row echelon form mod p, blocked: narrow panels are eliminated directly and the
    trailing columns updated by one float64 product per panel (exact, entries < p).

    Returns (E, piv): E has one row per pivot, leading 1 in column piv[r].
    """
    A = np.ascontiguousarray(np.array(A, dtype=np.int64) % p)
    rows, cols = A.shape
    if block * p * p >= 2 ** 52:
        raise ValueError("block too large for exact float products")
    out, piv = [], []
    M, c0 = A, 0
    while M.shape[0] and c0 < cols:
        w = min(block, cols - c0)
        perm, pc = _panel_pivots(np.array(M[:, :w], dtype=np.int64, order="C"), p)
        k = len(pc)
        if k == 0:
            M, c0 = M[:, w:], c0 + w
            continue
        top, tp = rref_mod_p(M[perm[:k]], p)
        rest = M[perm[k:]]
        if rest.shape[0] and cols - c0 > w:
            coef = rest[:, [tp[i] for i in range(k)]].astype(np.float64)
            upd = coef @ top[:, w:].astype(np.float64)
            M = np.mod(rest[:, w:] - upd.astype(np.int64), p)
        else:
            M = rest[:, w:]
        for i in range(k):
            row = np.zeros(cols, np.int64)
            row[c0:] = top[i]
            out.append(row)
            piv.append(c0 + tp[i])
        c0 += w
    E = np.array(out, np.int64).reshape(-1, cols)
    return E, piv


def rank_mod_p(A, p):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(echelon_mod_p(A, p)[1])


def _back_substitute(E, piv, X, p, rhs=None):
    for r in range(len(piv) - 1, -1, -1):
        c = piv[r]
        acc = E[r] @ X % p
        X[c] = (-acc if rhs is None else rhs[r] - acc) % p
    return X


def nullspace_mod_p(A, p):
    """Columns spanning {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    E, piv = echelon_mod_p(A, p)
    ps = set(piv)
    free = [c for c in range(cols) if c not in ps]
    X = np.zeros((cols, len(free)), np.int64)
    for t, f in enumerate(free):
        X[f, t] = 1
    return _back_substitute(E, piv, X, p)


def solve_mod_p(A, b, p):
    """One solution of A x = b, or None when inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    aug = np.concatenate([A, np.asarray(b, np.int64).reshape(-1, 1)], axis=1)
    E, piv = echelon_mod_p(aug, p)
    if n in piv:
        return None
    X = np.zeros((n, 1), np.int64)
    _back_substitute(E[:, :n], piv, X, p, rhs=E[:, n].reshape(-1, 1))
    return X[:, 0]


# ---------------------------------------------------------------- degree slices

class DegreeSlice:
    """Monomial basis of the degree-d part of a polynomial ring (keys ascending)."""

    def __init__(self, frame, d):
        self.frame, self.d = frame, d
        n = frame.n
        ex = []
        for c in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in c:
                e[i] += 1
            ex.append(e)
        ex = np.array(ex, np.int64).reshape(-1, n)
        self.keys = np.sort(frame.pack(ex)) if len(ex) else np.zeros(0, np.int64)
        self.index = {int(k): i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def exps(self):
        return self.frame.unpack(self.keys)

    @staticmethod
    def dimension(n, d):
        return comb(d + n - 1, n - 1)


def weight_classes(keys, frame, q):
    """Torus weight of each monomial: ((e_yi - e_xi) mod (q-1))_i, packed to one integer."""
    m = frame.n // 2
    out = np.zeros(len(keys), np.int64)
    for i in range(1, m + 1):
        ey = frame.var_exp(keys, frame.index(f"y{i}"))
        ex = frame.var_exp(keys, frame.index(f"x{i}"))
        out = out * (q - 1) + (ey - ex) % (q - 1)
    return out


def _apply_ops(f, g):
    # the elementary factors of g only touch the first 2m variables, so they
    # act on frames carrying extra bookkeeping variables as well
    for op in g.elementary_factors():
        if op[0] == "swap":
            perm = list(range(f.frame.n))
            perm[op[1]], perm[op[2]] = op[2], op[1]
            f = permute_vars(f, perm)
        elif op[0] == "scale":
            f = scale_var(f, op[1], op[2])
        else:
            f = transvect(f, op[1], op[2], op[3])
    return f


def _torus_mode(gens, m, q):
    from .matgroup import closure, generators
    tor = generators("torus", m, q)
    keys = {g._key for g in gens}
    if all(t._key in keys for t in tor):
        return "contains"
    if any(not g.is_upper_triangular() for g in gens):
        return "none"
    try:
        G = closure(gens, cap=20000)
    except RuntimeError:
        return "none"
    gk = {g._key for g in G}
    for t in tor:
        ti = t.inverse()
        for g in gens:
            c = (t.matrix @ g.matrix @ ti.matrix) % q
            if c.tobytes() not in gk:
                return "none"
    return "normalized"


def fixed_space_matrix(gens, cols, frame, p):
    """Sparse stack of (g - 1) restricted to the monomials `cols` (keys)."""
    ext = frame.extend(["_tag"])
    cap = ext.mask
    blocks = []
    row_keys = []
    for start in range(0, len(cols), cap + 1):
        chunk = cols[start:start + cap + 1]
        ex = frame.unpack(chunk)
        tag = np.arange(len(chunk), dtype=np.int64).reshape(-1, 1)
        F = Polynomial.from_arrays(ext, p, np.concatenate([ex, tag], axis=1), np.ones(len(chunk), np.int64))
        for gi, g in enumerate(gens):
            D = _apply_ops(F, g) - F
            if D.is_zero():
                continue
            e = D.exps()
            c = e[:, -1] + start
            rk = frame.pack(e[:, :-1])
            blocks.append((gi, rk, c, D.coeffs))
    if not blocks:
        return sparse.csr_matrix((0, len(cols)), dtype=np.int64)
    # rows indexed by (generator, monomial)
    allr = np.concatenate([b[1] for b in blocks])
    allg = np.concatenate([np.full(len(b[1]), b[0]) for b in blocks])
    rid = np.unique(np.stack([allg, allr], axis=1), axis=0, return_inverse=True)[1].ravel()
    cc = np.concatenate([b[2] for b in blocks])
    vv = np.concatenate([b[3] for b in blocks])
    return sparse.csr_matrix((vv, (rid, cc)), shape=(int(rid.max()) + 1, len(cols)), dtype=np.int64)


def certified_kernel(A, p, rng=None, extra=12, tries=4):
    """Kernel of a sparse matrix mod p via random row compression, certified by A K = 0."""
    rng = np.random.default_rng(rng)
    ncols = A.shape[1]
    if A.shape[0] == 0 or A.nnz == 0:
        return np.eye(ncols, dtype=np.int64)
    for _ in range(tries):
        if A.shape[0] <= ncols + extra:
            dense = A.toarray() % p
        else:
            Rt = rng.integers(0, p, size=(A.shape[0], ncols + extra))
            dense = np.asarray(A.T @ Rt).T % p
        K = nullspace_mod_p(dense, p)
        if K.shape[1] == 0:
            return K
        chk = (A @ K) % p
        if not np.any(chk):
            return K
    raise RuntimeError("kernel certification failed repeatedly")


def invariant_dimension(gens, d, m=None, q=None, torus="auto", seed=0, guard=2 * 10 ** 5, basis=False):
    """dim of the degree-d fixed space of the group generated by `gens` on S_m."""
    if not gens:
        raise ValueError("need at least one generator")
    m = m or gens[0].m
    q = q or gens[0].p
    frame = s_frame(m)
    if d < 0:
        return 0
    if DegreeSlice.dimension(frame.n, d) > guard:
        raise MemoryError(f"degree {d} slice exceeds the guard {guard}")
    if d == 0:
        return (1, [Polynomial.const(frame, q, 1)]) if basis else 1
    sl = DegreeSlice(frame, d)
    mode = _torus_mode(gens, m, q) if torus == "auto" else torus
    if mode == "none":
        groups = [sl.keys]
    else:
        w = weight_classes(sl.keys, frame, q)
        if mode == "contains":
            groups = [sl.keys[w == 0]]
        else:
            groups = [sl.keys[w == c] for c in np.unique(w)]
    total = 0
    vecs = []
    for cols in groups:
        if len(cols) == 0:
            continue
        A = fixed_space_matrix(gens, cols, frame, q)
        K = certified_kernel(A, q, rng=seed)
        total += K.shape[1]
        if basis:
            for t in range(K.shape[1]):
                nz = K[:, t] != 0
                vecs.append(Polynomial(frame, q, cols[nz], K[nz, t] % q))
    return (total, vecs) if basis else total


# ---------------------------------------------------------------- express

class Expression:
    """f = sum c_a g^a over generator monomials; `rep` lives in a frame named by the generators."""

    def __init__(self, target, names, degrees, rep, residual, certificate=None, gens=None):
        self.target = target
        self.names = list(names)
        self.degrees = list(degrees)
        self.rep = rep
        self.residual = residual
        self.certificate = certificate
        self.gens = gens

    @property
    def ok(self):
        return not self.residual

    def evaluate(self, gens=None):
        gens = gens or self.gens
        from .ring import substitute
        return substitute(self.rep, list(gens), self.target.frame)

    def __repr__(self):
        return f"Expression(ok={self.ok}, rep={self.rep!r})"


def generator_monomials(degrees, d, caps):
    """Exponent vectors a with sum a_i deg_i = d and a_i <= caps[i]."""
    k = len(degrees)
    out = []

    def rec(i, rem, cur):
        if i == k:
            if rem == 0:
                out.append(tuple(cur))
            return
        g = degrees[i]
        top = min(caps[i], rem // g) if g > 0 else 0
        for a in range(top + 1):
            cur.append(a)
            rec(i + 1, rem - a * g, cur)
            cur.pop()
    rec(0, d, [])
    return out


class _PowerCache:
    def __init__(self, gens):
        self.gens = gens
        self.cache = [{0: Polynomial.const(g.frame, g.p, 1), 1: g} for g in gens]

    def power(self, i, a):
        c = self.cache[i]
        if a not in c:
            top = max(k for k in c if k <= a)
            cur = c[top]
            for k in range(top + 1, a + 1):
                cur = cur * self.gens[i]
                c[k] = cur
        return c[a]

    def monomial(self, a):
        g0 = self.gens[0]
        out = Polynomial.const(g0.frame, g0.p, 1)
        for i, e in enumerate(a):
            if e:
                out = out * self.power(i, e)
        return out


def _columns_matrix(cols, f):
    """Sparse matrix of coefficient vectors (rows = union of monomials)."""
    allk = np.concatenate([c.keys for c in cols] + [f.keys])
    rows = np.unique(allk)
    ri, ci, vv = [], [], []
    for j, c in enumerate(cols):
        ri.append(np.searchsorted(rows, c.keys))
        ci.append(np.full(len(c.keys), j))
        vv.append(c.coeffs)
    if cols:
        A = sparse.csr_matrix((np.concatenate(vv), (np.concatenate(ri), np.concatenate(ci))),
                              shape=(len(rows), len(cols)), dtype=np.int64)
    else:
        A = sparse.csr_matrix((len(rows), 0), dtype=np.int64)
    b = np.zeros(len(rows), np.int64)
    b[np.searchsorted(rows, f.keys)] = f.coeffs
    return A, b, rows


def express(f, gens, caps=None, names=None, budget=4 * 10 ** 7, seed=0, weights=None):
    """Write homogeneous f as a polynomial in homogeneous gens.

    Returns an Expression; when no representation exists within the caps
    the residual flag is set and `certificate` holds row keys on which the
    restricted system is already inconsistent.
    """
    q = f.p
    names = names or [f"g{i}" for i in range(len(gens))]
    if weights is None:
        degs = [g.hom_degree() for g in gens]
        D = f.hom_degree() if not f.is_zero() else 0
    else:
        degs = [g.hom_degree(weights) for g in gens]
        D = f.hom_degree(weights) if not f.is_zero() else 0
    if any(g is None for g in degs) or (D is None):
        raise ValueError("express needs homogeneous input")
    if caps is None:
        caps = [-(-D // g) if g else 0 for g in degs]
    rframe = Frame(names, degs)
    mons = generator_monomials(degs, D, caps)
    if f.is_zero():
        return Expression(f, names, degs, Polynomial.zero(rframe, q), False, gens=gens)
    if not mons:
        return Expression(f, names, degs, Polynomial.zero(rframe, q), True, certificate=[], gens=gens)
    pc = _PowerCache(gens)
    cols = [pc.monomial(a) for a in mons]
    A, b, rows = _columns_matrix(cols, f)
    ncols = len(mons)
    if ncols * ncols > budget:
        raise MemoryError("express system exceeds budget")
    rng = np.random.default_rng(seed)
    M = len(rows)
    pick = set(np.flatnonzero(b).tolist())
    take = min(M, 2 * ncols + 10)
    pick.update(rng.choice(M, size=take, replace=False).tolist())
    Acsc = A.tocsr()
    while True:
        sel = np.array(sorted(pick))
        sub = Acsc[sel].toarray() % q
        x = solve_mod_p(sub, b[sel], q)
        if x is None:
            return Expression(f, names, degs, Polynomial.zero(rframe, q), True,
                              certificate=[int(k) for k in rows[sel]], gens=gens)
        r = (Acsc @ x - b) % q
        bad = np.flatnonzero(r)
        if len(bad) == 0:
            break
        pick.update(bad[: max(ncols, 32)].tolist())
    nz = np.flatnonzero(x)
    terms = {mons[i]: int(x[i]) for i in nz}
    rep = Polynomial.from_terms(rframe, q, terms)
    return Expression(f, names, degs, rep, False, gens=gens)


def xi_names(m):
    return [f"T{j}" for j in range(2 * m - 1, -1, -1)]


def express_in_xi(f, m, q, top=None, caps=None):
    """Representation of f in R_k (k = top, default 2m-1) under T_j -> xi_j."""
    from .invariants import xi
    k = 2 * m - 1 if top is None else top
    gens = [xi(j, m, q) for j in range(k, -1, -1)]
    ex = express(f, gens, caps=caps, names=[f"T{j}" for j in range(k, -1, -1)])
    if ex.ok:
        ex.rep = ex.rep.embed(t_frame(k, q))
    return ex


def t0_adic_bound(F):
    """min T0-exponent over the terms of F (infinity for 0)."""
    if F.is_zero():
        return float("inf")
    return int(F.frame.var_exp(F.keys, F.frame.index("T0")).min())


def congruent_mod_xi0(diff, k, m, q, top=None):
    """diff = 0 mod xi_0^k inside F_q[xi_0..]: (holds, representation)."""
    ex = express_in_xi(diff, m, q, top=top)
    if not ex.ok:
        return False, ex
    return t0_adic_bound(ex.rep) >= k, ex


# ---------------------------------------------------------------- valuation

def r_valuation(F):
    """min R-degree over the terms of F; infinity for 0."""
    if F.is_zero():
        return float("inf")
    return int(F.degrees().min())


# ---------------------------------------------------------------- Hilbert series

def hilbert_block(hsop_degs, basis_degs, D, relation_degs=()):
    """Coefficients 0..D of (sum_b t^b) prod_r (1 - t^r) / prod_h (1 - t^h).

    With relation degrees this is the series of a complete intersection
    (numerator factors) tensored with a free block.
    """
    if D < 0:
        return []
    out = np.zeros(D + 1, dtype=object)
    for b in basis_degs:
        if b <= D:
            out[b] += 1
    for r in relation_degs:
        if r <= 0:
            raise ValueError("relation degrees must be positive")
        for i in range(D, r - 1, -1):
            out[i] -= out[i - r]
    for h in hsop_degs:
        if h <= 0:
            raise ValueError("hsop degrees must be positive")
        for i in range(h, D + 1):
            out[i] += out[i - h]
    return [int(v) for v in out]


def monoid_hilbert(exps, degrees, D):
    """Number of distinct monomials of each degree <= D in the monoid generated by `exps`."""
    exps = [tuple(int(v) for v in e) for e in exps]
    pairs = sorted(zip(degrees, exps))
    levels = [set() for _ in range(D + 1)]
    levels[0].add(tuple(0 for _ in exps[0]) if exps else ())
    for d in range(1, D + 1):
        cur = levels[d]
        for g, e in pairs:
            if g > d or g <= 0:
                continue
            for a in levels[d - g]:
                cur.add(tuple(x + y for x, y in zip(a, e)))
    return [len(s) for s in levels]


# ---------------------------------------------------------------- point scans

def variety_scan(polys, ext=1, cap=10 ** 7):
    """All common zeros over GF(q^ext), as tuples of field-element indices."""
    if not polys:
        raise ValueError("need at least one polynomial")
    f0 = polys[0]
    q, n = f0.p, f0.frame.n
    Q = q ** ext
    if Q ** n > cap:
        raise MemoryError(f"{Q}^{n} points exceed the scan cap")
    fs = FieldSpec(Q)
    add, mul, _, _ = fs.tables()
    g = fs.primitive_root()
    exp_t = np.zeros(Q - 1, np.int64)
    log_t = np.zeros(Q, np.int64)
    a = fs.one()
    for i in range(Q - 1):
        exp_t[i] = a.index
        log_t[a.index] = i
        a = a * g
    pts = np.indices((Q,) * n).reshape(n, -1).T.astype(np.int64)
    for f in polys:
        if f.frame.n != n or f.p != q:
            raise ValueError("polynomials must share one ring")
        if f.is_zero() or len(pts) == 0:
            continue
        e = f.exps()
        val = np.zeros(len(pts), np.int64)
        for row, c in zip(e, f.coeffs):
            t = np.full(len(pts), int(c), np.int64)
            for j in np.flatnonzero(row):
                x = pts[:, j]
                pw = np.where(x == 0, 0, exp_t[(log_t[x] * int(row[j])) % (Q - 1)])
                t = mul[t, pw]
            val = add[val, t]
        pts = pts[val == 0]
    return [tuple(int(v) for v in r) for r in pts]


def points_as_elements(points, q, ext=1):
    fs = FieldSpec(q ** ext)
    return [tuple(fs.from_index(i) for i in pt) for pt in points]


# ---------------------------------------------------------------- independence

def independence_check(gens, D):
    """(independent, witness degree): generator monomials of each degree <= D are linearly independent."""
    degs = [g.hom_degree() for g in gens]
    if any(x is None for x in degs):
        raise ValueError("independence_check needs homogeneous generators")
    if any(x == 0 for x in degs):
        return False, 0
    pc = _PowerCache(gens)
    q = gens[0].p
    for d in range(1, D + 1):
        mons = generator_monomials(degs, d, [d // g for g in degs])
        if len(mons) <= 1:
            continue
        cols = [pc.monomial(a) for a in mons]
        z = Polynomial.zero(gens[0].frame, q)
        A, _, _ = _columns_matrix(cols, z)
        if A.shape[0] < len(mons):
            return False, d
        R = sparse.csr_matrix(np.random.default_rng(d).integers(0, q, size=(len(mons) + 8, A.shape[0])))
        dense = (R @ A).toarray() % q if A.shape[0] > len(mons) + 8 else A.toarray() % q
        if rank_mod_p(dense, q) < len(mons):
            # compression can only lose rank; confirm on the full matrix
            if rank_mod_p(A.toarray() % q, q) < len(mons):
                return False, d
    return True, None


def monomial_span_rank(gens, d, caps=None, seed=0):
    """Dimension of the degree-d span of the products of homogeneous gens."""
    degs = [g.hom_degree() for g in gens]
    if any(x is None or x <= 0 for x in degs):
        raise ValueError("need homogeneous generators of positive degree")
    caps = caps or [d // g for g in degs]
    mons = generator_monomials(degs, d, caps)
    if not mons:
        return 0
    pc = _PowerCache(gens)
    q = gens[0].p
    cols = [pc.monomial(a) for a in mons]
    A, _, _ = _columns_matrix(cols, Polynomial.zero(gens[0].frame, q))
    k = len(mons)
    if A.shape[0] > 2 * k + 16:
        # rank of a random row compression never exceeds the true rank;
        # equality with the column count certifies full rank
        R = np.random.default_rng(seed).integers(0, q, size=(A.shape[0], k + 8))
        dense = (A.T @ R).T % q
        r = rank_mod_p(dense, q)
        if r == k:
            return k
    return rank_mod_p(A.toarray() % q, q)
