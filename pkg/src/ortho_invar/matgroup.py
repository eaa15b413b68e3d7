"""Matrices over GF(p) for O+(2m, q) and its Sylow, Hook, Borel, torus and Weyl subgroups.

Convention: the variables of S_m are coefficient rows in the order
[y1..ym, xm..x1].  A matrix g acts on polynomials by substituting
var_i -> sum_j g[i, j] var_j, which is a right action:
act(act(f, g), h) = act(f, g @ h).  Linear forms are rows r and r.g = r @ g.

The form y1 x1 + ... + ym xm pairs index i with n-1-i, so its Gram matrix is
the antidiagonal J and g is orthogonal iff g^T J g = J (mod p).
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .gf import FieldSpec
from .ring import Polynomial, permute_vars, s_frame, scale_var, transvect

KINDS = ("oplus", "sylow", "hook", "borel", "torus", "weyl", "stabilizer_x1")


def _antidiag(n):
    return np.fliplr(np.eye(n, dtype=np.int64))


def y_index(m, i):
    return i - 1


def x_index(m, i):
    return 2 * m - i


class GroupElem:
    __slots__ = ("m", "p", "matrix", "kind", "_key", "_factors")

    def __init__(self, matrix, p, kind=None, check=True):
        mat = np.asarray(matrix, dtype=np.int64) % p
        n = mat.shape[0]
        if mat.shape != (n, n) or n % 2:
            raise ValueError("need an even square matrix")
        self.m = n // 2
        self.p = p
        self.matrix = mat
        self.matrix.setflags(write=False)
        self.kind = kind
        self._key = mat.tobytes()
        self._factors = None
        if check:
            if not self.is_orthogonal():
                raise ValueError("matrix does not preserve the quadratic form")

    @classmethod
    def identity(cls, m, p):
        return cls(np.eye(2 * m, dtype=np.int64), p, kind="identity")

    def is_orthogonal(self):
        g = self.matrix
        J = _antidiag(g.shape[0])
        return bool(np.array_equal((g.T @ J @ g) % self.p, J)) and self.det() != 0

    def det(self):
        return _det_mod_p(self.matrix, self.p)

    def __mul__(self, other):
        return GroupElem(self.matrix @ other.matrix % self.p, self.p, check=False)

    def __eq__(self, other):
        return isinstance(other, GroupElem) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"GroupElem({self.matrix.tolist()})"

    def to_json(self):
        return self.matrix.tolist()

    def inverse(self):
        return GroupElem(_inv_mod_p(self.matrix, self.p), self.p, check=False)

    def elementary_factors(self):
        """g = E_1 ... E_s with each E elementary; returned as ops in application order."""
        if self._factors is None:
            self._factors = _elementary(self.matrix, self.p)
        return self._factors

    def is_upper_triangular(self):
        return not np.tril(self.matrix, -1).any()

    def is_unitriangular(self):
        return self.is_upper_triangular() and bool((np.diag(self.matrix) == 1).all())


def _det_mod_p(a, p):
    a = np.array(a, dtype=np.int64) % p
    n = a.shape[0]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r, c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det
        det = det * int(a[c, c]) % p
        inv = pow(int(a[c, c]), -1, p)
        for r in range(c + 1, n):
            if a[r, c]:
                a[r] = (a[r] - a[r, c] * inv * a[c]) % p
    return det % p


def _inv_mod_p(a, p):
    n = a.shape[0]
    aug = np.concatenate([np.array(a, np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[[c, piv]] = aug[[piv, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), -1, p) % p
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % p
    return aug[:, n:]


def _elementary(g, p):
    """Row-reduce g to I; ops are recorded as substitutions whose composite is g.

    Each reducing row op R has an inverse elementary E and g = E_1 E_2 ... E_s.
    Substitution ops:  ('swap', i, j), ('scale', i, c), ('tv', i, j, c)
    meaning v_i <-> v_j, v_i -> c v_i, v_i -> v_i + c v_j.
    """
    a = np.array(g, dtype=np.int64) % p
    n = a.shape[0]
    ops = []
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r, c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            ops.append(("swap", c, piv))
        s = int(a[c, c])
        if s != 1:
            a[c] = a[c] * pow(s, -1, p) % p
            ops.append(("scale", c, s))          # inverse of scaling row by 1/s
        for r in range(n):
            if r != c and a[r, c]:
                f = int(a[r, c])
                a[r] = (a[r] - f * a[c]) % p
                ops.append(("tv", r, c, f))       # inverse of row_r -= f row_c
    return ops


def act(f, g):
    """Right action f.g: substitute var_i -> sum_j g[i, j] var_j."""
    if f.frame.n != g.matrix.shape[0]:
        raise ValueError("dimension mismatch")
    if f.p != g.p:
        raise ValueError("field mismatch")
    for op in g.elementary_factors():
        if f.is_zero():
            return f
        if op[0] == "swap":
            perm = list(range(f.frame.n))
            perm[op[1]], perm[op[2]] = op[2], op[1]
            f = permute_vars(f, perm)
        elif op[0] == "scale":
            f = scale_var(f, op[1], op[2])
        else:
            f = transvect(f, op[1], op[2], op[3])
    return f


def act_matrix(f, g):
    """Reference implementation of act through general substitution (slow, for tests)."""
    from .ring import substitute
    fr = f.frame
    images = []
    for i in range(fr.n):
        row = g.matrix[i]
        terms = {tuple(1 if k == j else 0 for k in range(fr.n)): int(row[j]) for j in range(fr.n) if row[j]}
        images.append(Polynomial.from_terms(fr, f.p, terms))
    return substitute(f, images)


# ---------------------------------------------------------------- generators

def _elem_from_map(m, p, rows, kind):
    n = 2 * m
    g = np.eye(n, dtype=np.int64)
    for i, row in rows.items():
        g[i] = np.asarray(row, dtype=np.int64)
    return GroupElem(g, p, kind=kind)


def hook_element(m, p, a, b, level=1, kind="hook"):
    """Hook element at nesting level k: y_k -> y_k + sum_{i>k} (b_i y_i + a_i x_i - a_i b_i x_k),
    y_i -> y_i - a_i x_k, x_i -> x_i - b_i x_k.  a, b are dicts i -> scalar."""
    n = 2 * m
    k = level
    g = np.eye(n, dtype=np.int64)
    yk, xk = y_index(m, k), x_index(m, k)
    for i in range(k + 1, m + 1):
        ai, bi = a.get(i, 0) % p, b.get(i, 0) % p
        g[yk, y_index(m, i)] += bi
        g[yk, x_index(m, i)] += ai
        g[yk, xk] -= ai * bi
        g[y_index(m, i), xk] -= ai
        g[x_index(m, i), xk] -= bi
    return GroupElem(g % p, p, kind=kind)


def generators(kind, m, q):
    fs = FieldSpec(q)
    if fs.k != 1:
        raise ValueError("matrix groups are built over prime fields only")
    p = q
    if kind == "hook":
        out = []
        for i in range(2, m + 1):
            out.append(hook_element(m, p, {i: 1}, {}, 1))
            out.append(hook_element(m, p, {}, {i: 1}, 1))
        return out
    if kind == "sylow":
        out = []
        for k in range(1, m):
            for i in range(k + 1, m + 1):
                out.append(hook_element(m, p, {i: 1}, {}, k, kind="sylow"))
                out.append(hook_element(m, p, {}, {i: 1}, k, kind="sylow"))
        return out
    if kind == "torus":
        t = int(fs.primitive_root())
        tinv = pow(t, -1, p)
        out = []
        for i in range(1, m + 1):
            g = np.eye(2 * m, dtype=np.int64)
            g[y_index(m, i), y_index(m, i)] = t
            g[x_index(m, i), x_index(m, i)] = tinv
            out.append(GroupElem(g, p, kind="torus"))
        return out
    if kind == "weyl":
        out = []
        n = 2 * m
        for i in range(1, m):
            perm = list(range(n))
            a, b = y_index(m, i), y_index(m, i + 1)
            c, d = x_index(m, i), x_index(m, i + 1)
            perm[a], perm[b], perm[c], perm[d] = b, a, d, c
            out.append(GroupElem(np.eye(n, dtype=np.int64)[perm], p, kind="weyl"))
        perm = list(range(n))
        a, b = y_index(m, m), x_index(m, m)
        perm[a], perm[b] = b, a
        out.append(GroupElem(np.eye(n, dtype=np.int64)[perm], p, kind="weyl"))
        return out
    if kind == "borel":
        return generators("sylow", m, q) + generators("torus", m, q)
    if kind == "oplus":
        return generators("borel", m, q) + generators("weyl", m, q)
    if kind == "stabilizer_x1":
        return stabilizer_x1(m, q)
    raise ValueError(f"unknown group kind {kind}")


def order_formula(m, q):
    out = 2 * q ** (m * (m - 1)) * (q ** m - 1)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


def closure(gens, cap=10 ** 7):
    if not gens:
        raise ValueError("empty generator list")
    p, m = gens[0].p, gens[0].m
    e = GroupElem.identity(m, p)
    seen = {e._key: e}
    queue = deque([e])
    mats = [g.matrix for g in gens]
    while queue:
        a = queue.popleft()
        for g in mats:
            c = a.matrix @ g % p
            key = c.tobytes()
            if key not in seen:
                el = GroupElem(c, p, check=False)
                seen[key] = el
                queue.append(el)
                if len(seen) > cap:
                    raise RuntimeError(f"closure exceeded cap {cap}")
    return set(seen.values())


def stabilizer_x1(m, q):
    """Elements of the full group fixing x1 (enumerated; small cases only)."""
    G = closure(generators("oplus", m, q))
    xi = np.zeros(2 * m, np.int64)
    xi[x_index(m, 1)] = 1
    return [g for g in G if np.array_equal(xi @ g.matrix % q, xi)]


# ---------------------------------------------------------------- linear forms

def linear_row(v):
    e = v.exps()
    if len(e) == 0 or (e.sum(axis=1) != 1).any():
        raise ValueError("not a nonzero linear form")
    row = np.zeros(v.frame.n, np.int64)
    for r, c in zip(e, v.coeffs):
        row[int(np.flatnonzero(r)[0])] = c
    return row


def row_to_poly(row, frame, p):
    row = np.asarray(row, np.int64) % p
    keys = np.array([frame.units[j] for j in range(frame.n) if row[j]], np.int64)
    coeffs = np.array([row[j] for j in range(frame.n) if row[j]], np.int64)
    return Polynomial.from_keys(frame, p, keys, coeffs)


def orbit_rows(row, gens):
    p = gens[0].p
    start = np.asarray(row, np.int64) % p
    seen = {start.tobytes(): start}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for g in gens:
            s = r @ g.matrix % p
            k = s.tobytes()
            if k not in seen:
                seen[k] = s
                queue.append(s)
    return list(seen.values())


def orbit_linear(v, gens):
    rows = orbit_rows(linear_row(v), gens)
    return [row_to_poly(r, v.frame, v.p) for r in rows]


def product_tree(forms, q):
    """Product of linear forms, q at a time over the lex-sorted list.

    Sorting groups forms that differ only in trailing coordinates, so each
    block product is a small structured polynomial and the intermediate
    results stay sparse.
    """
    if not forms:
        raise ValueError("empty product")
    level = sorted(forms, key=lambda f: tuple(linear_row(f)) if f.degree() == 1 else (f.lm_key(),))
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level), q):
            out = level[i]
            for b in level[i + 1:i + q]:
                out = out * b
            nxt.append(out)
        level = nxt
    return level[0]


def norm(v, gens):
    """Orbit product of the linear form v."""
    return product_tree(orbit_linear(v, gens), v.p)


# ---------------------------------------------------------------- cosets, Reynolds

def group_elements(m, q, kind="oplus"):
    return closure(generators(kind, m, q))


def right_coset_reps(G, B):
    """One representative per right coset B g."""
    Bm = [b.matrix for b in B]
    seen = set()
    reps = []
    for g in sorted(G, key=lambda e: e._key):
        if g._key in seen:
            continue
        reps.append(g)
        for b in Bm:
            seen.add((b @ g.matrix % g.p).tobytes())
    return reps


def reynolds(f, m, q, group_cap=10 ** 5):
    """(1/2) sum over right cosets B g of f.g, for B-invariant f."""
    p = q
    for b in generators("borel", m, q):
        if act(f, b) != f:
            raise ValueError("input is not Borel-invariant")
    if order_formula(m, q) > group_cap:
        raise RuntimeError("group too large to enumerate; use the heavy tier")
    G = group_elements(m, q)
    B = [g for g in G if g.is_upper_triangular()]
    reps = right_coset_reps(G, B)
    out = Polynomial.zero(f.frame, p)
    for g in reps:
        out = out + act(f, g)
    out = out.scale(pow(2, -1, p))
    for g in generators("oplus", m, q):
        if act(out, g) != out:
            raise AssertionError("Reynolds image is not invariant")
    return out
