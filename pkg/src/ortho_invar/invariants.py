"""Named invariants of O+(2m, q): xi_i, orbit products, u_m, d_{i,m}, c22, minors,
Dickson invariants, hsops, block bases and the x1-compliance machinery."""
from __future__ import annotations

import itertools
import threading
from functools import lru_cache

import numpy as np

from .gf import FieldSpec, catalan, digit_sum
from .matgroup import generators, linear_row, orbit_linear, product_tree, row_to_poly
from .ring import (LEX, Frame, Polynomial, T, divide_linear, exact_divide, lead_term,
                   phi_eval, s_frame, substitute, t_frame)
from .steenrod import steenrod

_lock = threading.RLock()


# ---------------------------------------------------------------- xi

@lru_cache(maxsize=None)
def xi(i, m, q):
    """xi_0 = sum y_j x_j and xi_i = sum_j (y_j^(q^i) x_j + y_j x_j^(q^i))."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if q != FieldSpec(q).p:
        raise ValueError("xi is built over prime fields")
    fr = s_frame(m)
    n = 2 * m
    rows, coef = [], []
    Q = q ** i
    for j in range(1, m + 1):
        a, b = j - 1, n - j
        if i == 0:
            r = [0] * n
            r[a], r[b] = 1, 1
            rows.append(r)
            coef.append(1)
        else:
            r = [0] * n
            r[a], r[b] = Q, 1
            rows.append(r)
            coef.append(1)
            r = [0] * n
            r[a], r[b] = 1, Q
            rows.append(r)
            coef.append(1)
    return Polynomial.from_arrays(fr, q, np.array(rows), coef)


def var(m, q, name):
    fr = s_frame(m)
    return Polynomial.var(fr, q, fr.index(name))


# ---------------------------------------------------------------- degrees

def e_index(i, m, q):
    n = 2 * m
    return sum(q ** (n - 1 - j) for j in range(1, i + 1))


def deg_xi(i, q):
    return 2 if i == 0 else q ** i + 1


def deg_norm_x(i, q):
    return q ** (i - 1)


def deg_norm_y(i, m, q):
    return q ** (2 * m - i - 1)


def deg_u(m, q):
    return (q ** (m - 1) + 1) * sum(q ** j for j in range(m))


def deg_d(i, m, q):
    return (q - 1) * e_index(i, m, q)


# ---------------------------------------------------------------- catalog

class InvariantCatalog:
    """Lazily built invariants for one (q, m).  Values are immutable polynomials."""

    def __init__(self, q, m):
        if q % 2 == 0:
            raise ValueError("q must be odd")
        self.q, self.m, self.n = q, m, 2 * m
        self.frame = s_frame(m)
        self._cache = {}
        self._lock = threading.RLock()

    def _get(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def xi(self, i):
        return xi(i, self.m, self.q)

    def sylow_gens(self):
        return self._get("sylow", lambda: generators("sylow", self.m, self.q))

    def orbit_forms(self, name):
        def build():
            v = var(self.m, self.q, name)
            gens = self.sylow_gens()
            return orbit_linear(v, gens) if gens else [v]
        return self._get(("orbit", name), build)

    def norm(self, name):
        return self._get(("N", name), lambda: product_tree(self.orbit_forms(name), self.q))

    def N_y(self, i):
        return self.norm(f"y{i}")

    def N_x(self, i):
        return self.norm(f"x{i}")

    def u_factors(self):
        """The linear forms whose product is u_m (all Sylow orbits of the variables)."""
        def build():
            out = []
            for nm in self.frame.names:
                out.extend(self.orbit_forms(nm))
            return out
        return self._get("ufac", build)

    def u_norm_factors(self):
        return [self.norm(nm) for nm in self.frame.names]

    def u(self):
        def build():
            fs = self.u_norm_factors()
            fs = sorted(fs, key=lambda f: f.nterms)
            out = fs[0]
            for f in fs[1:]:
                out = out * f
            return out
        return self._get("u", build)

    def d(self, i, by_factors=False):
        """d_{i,m} = P^{e(i,m)}(u_m) / u_m."""
        if i == 0:
            return Polynomial.const(self.frame, self.q, 1)
        if not 1 <= i <= self.m:
            raise ValueError("need 1 <= i <= m")

        def build():
            u = self.u()
            top = steenrod(u, e_index(i, self.m, self.q))
            if by_factors:
                out = top
                for ell in self.u_factors():
                    out = divide_linear(out, ell)
                return out
            return exact_divide(top, u)
        return self._get(("d", i, by_factors), build)

    def lt_u(self):
        """Lex lead term of u_m from the lead terms of its linear factors."""
        ex = np.zeros(self.n, np.int64)
        c = 1
        for ell in self.u_factors():
            e, a = lead_term(ell, LEX)
            ex += np.array(e)
            c = c * a % self.q
        return tuple(int(v) for v in ex), c


_catalogs = {}


def catalog(q, m):
    with _lock:
        if (q, m) not in _catalogs:
            _catalogs[(q, m)] = InvariantCatalog(q, m)
        return _catalogs[(q, m)]


def u(m, q):
    return catalog(q, m).u()


def d(i, m, q):
    return catalog(q, m).d(i)


def norm_of(name, m, q):
    return catalog(q, m).norm(name)


# ---------------------------------------------------------------- R-side objects

def c22_T(q):
    """sum_{j<=(q-1)/2} Cat(j) T0^(j(q+1)+1) T1^(q-1-2j) in R_1."""
    terms = {}
    for j in range((q - 1) // 2 + 1):
        c = catalan(j) % q
        if c:
            terms[(q - 1 - 2 * j, j * (q + 1) + 1)] = c
    return Polynomial.from_terms(t_frame(1, q), q, terms)


def c22(q, m=2):
    return phi_eval(c22_T(q), m)


def u2_T(q):
    """T0^q (T2 + c22) - T1^(q+1) in R_2."""
    fr = t_frame(2, q)
    c = c22_T(q).embed(fr)
    return T(2, q, 0, q) * (T(2, q, 2) + c) - T(2, q, 1, q + 1)


def _det(mat):
    k = len(mat)
    if k == 1:
        return mat[0][0]
    out = None
    for c in range(k):
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        term = mat[0][c] * _det(minor)
        if c % 2:
            term = -term
        out = term if out is None else out + term
    return out


def matrix_M(m, q):
    """Entries m_{j,k} = T_{n-j-k+1}^(q^(j-1)), j = 1..m, k = 1..m+1, over R_{n-1}."""
    n = 2 * m
    k_top = n - 1
    return [[T(k_top, q, n - j - k + 1, q ** (j - 1)) for k in range(1, m + 2)] for j in range(1, m + 1)]


def minor_M(i, m, q):
    """Determinant of M_m with column i+1 removed."""
    if not 0 <= i <= m:
        raise ValueError("need 0 <= i <= m")
    M = matrix_M(m, q)
    sub = [row[:i] + row[i + 1:] for row in M]
    return _det(sub)


# ---------------------------------------------------------------- Dickson

def dickson(i, vars_):
    """d_i with prod_{w in span(vars)} (X - w) = sum_i (-1)^i d_i X^(q^(r-i)), d_0 = 1."""
    r = len(vars_)
    if r == 0:
        raise ValueError("need at least one form")
    v0 = vars_[0]
    q = v0.p
    rows = np.array([linear_row(v) for v in vars_])
    from .solver import rank_mod_p
    if rank_mod_p(rows, q) < r:
        raise ValueError("forms are linearly dependent")
    if not 0 <= i <= r:
        raise ValueError("need 0 <= i <= r")
    if i == 0:
        return Polynomial.const(v0.frame, q, 1)
    ext = v0.frame.extend(["X"])
    Xv = Polynomial.var(ext, q, ext.index("X"))
    lifted = [v.embed(ext, list(range(v0.frame.n))) for v in vars_]
    span = [Polynomial.zero(ext, q)]
    for v in lifted:
        span = [w + v.scale(c) for w in span for c in range(q)]
    out = Polynomial.const(ext, q, 1)
    for w in span:
        out = out * (Xv - w)
    parts = out.collect(ext.index("X"))
    c = parts.get(q ** (r - i), Polynomial.zero(ext, q))
    back = c.embed(v0.frame, list(range(v0.frame.n)) + [None])
    return back.scale((-1) ** i)


# ---------------------------------------------------------------- hsops and block bases

def hsop(kind, m, q):
    cat = catalog(q, m)
    if kind == "H":
        return [cat.xi(i) for i in range(m)] + [cat.d(i) for i in range(1, m + 1)]
    if kind == "H0":
        return [cat.norm(nm) for nm in cat.frame.names]
    if kind == "Htilde0":
        out = []
        for i in range(1, m + 1):
            ny, nx = cat.N_y(i), cat.N_x(i)
            out += [ny ** (q - 1), nx ** (q - 1), ny * nx]
        return out
    if kind == "QH":
        return hook_QH_gens(m, q)
    raise ValueError(kind)


def hsop_degrees(kind, m, q):
    n = 2 * m
    if kind == "H":
        return [deg_xi(i, q) for i in range(m)] + [deg_d(i, m, q) for i in range(1, m + 1)]
    if kind == "H0":
        return [deg_norm_y(i, m, q) for i in range(1, m + 1)] + [deg_norm_x(i, q) for i in range(m, 0, -1)]
    if kind == "Htilde0":
        out = []
        for i in range(1, m + 1):
            a, b = deg_norm_y(i, m, q), deg_norm_x(i, q)
            out += [(q - 1) * a, (q - 1) * b, a + b]
        return out
    raise ValueError(kind)


class BlockBasis:
    """All monomial factors of a top monomial in named generators."""

    def __init__(self, kind, names, degrees, top):
        self.kind = kind
        self.names = list(names)
        self.degrees = list(degrees)
        self.top = list(top)

    def factors(self):
        return list(itertools.product(*[range(e + 1) for e in self.top]))

    def __len__(self):
        out = 1
        for e in self.top:
            out *= e + 1
        return out

    def factor_degrees(self):
        return [sum(a * d for a, d in zip(f, self.degrees)) for f in self.factors()]

    def polys(self, gens):
        out = []
        for f in self.factors():
            g = Polynomial.const(gens[0].frame, gens[0].p, 1)
            for a, h in zip(f, gens):
                if a:
                    g = g * h ** a
            out.append(g)
        return out


def block_basis(kind, m, q):
    n = 2 * m
    if kind == "Gamma":
        idx = list(range(m, n - 1))
        return BlockBasis(kind, [f"xi{i}" for i in idx], [deg_xi(i, q) for i in idx],
                          [q ** (n - i - 1) - 1 for i in idx])
    if kind == "Gamma0":
        idx = list(range(0, n - 2))
        return BlockBasis(kind, [f"xi{i}" for i in idx], [deg_xi(i, q) for i in idx],
                          [q ** (m - 1 - i // 2) - 1 for i in idx])
    if kind == "BH":
        idx = list(range(0, n - 2))
        return BlockBasis(kind, [f"xi{i}" for i in idx], [deg_xi(i, q) for i in idx], [q - 1] * len(idx))
    if kind in ("BHC", "Htilde0"):
        names, degs = [], []
        for j in range(m):
            for i in range(0, n - 3 - 2 * j + 1):
                names.append(f"psi{j}(xi{i})")
                degs.append(q ** j * deg_xi(i, q))
        return BlockBasis("BHC", names, degs, [q - 1] * len(names))
    raise ValueError(kind)


def bhc_generators(m, q):
    """psi_j(xi_i) for 0 <= i <= n-3-2j (the generators behind the BHC block)."""
    from .steenrod import psi_j
    n = 2 * m
    out = []
    for j in range(m):
        for i in range(0, n - 3 - 2 * j + 1):
            out.append(psi_j(xi(i, m, q), j))
    return out


# ---------------------------------------------------------------- hook pieces

def Y_(i, m, q):
    y, x1 = var(m, q, f"y{i}"), var(m, q, "x1")
    return y ** q - y * x1 ** (q - 1)


def X_(i, m, q):
    x, x1 = var(m, q, f"x{i}"), var(m, q, "x1")
    return x ** q - x * x1 ** (q - 1)


def hook_QH_gens(m, q):
    """x1 and Y_i, X_i for i = 2..m."""
    out = [var(m, q, "x1")]
    for i in range(2, m + 1):
        out += [Y_(i, m, q), X_(i, m, q)]
    return out


def hook_norm_y1(m, q):
    v = var(m, q, "y1")
    gens = generators("hook", m, q)
    return product_tree(orbit_linear(v, gens), q) if gens else v


# ---------------------------------------------------------------- compliance

def nu1(f):
    """Largest k with x1^k dividing f (infinity for 0)."""
    if f.is_zero():
        return float("inf")
    i = f.frame.index("x1")
    return int(f.frame.var_exp(f.keys, i).min())


def y1_coefficients(f, var_name="y1"):
    return f.collect(f.frame.index(var_name))


def is_compliant(f, strong=False):
    q = f.p
    for k, c in y1_coefficients(f).items():
        if k == 0:
            continue
        need = digit_sum(k, q) - (0 if strong else 1)
        if nu1(c) < need:
            return False
    return True


def is_strongly_compliant(f):
    return is_compliant(f, strong=True)


def compliance(f):
    return {"nu1": nu1(f), "is_compliant": is_compliant(f), "is_strongly_compliant": is_strongly_compliant(f)}


def t_operator(f, u, t, y1="y1", x1="x1"):
    """prod_{a in F_q} f(y1 + a u, t - a x1), variables given by name."""
    fr, q = f.frame, f.p
    iy, it = fr.index(y1), fr.index(t)
    U, X1 = Polynomial.var(fr, q, fr.index(u)), Polynomial.var(fr, q, fr.index(x1))
    out = Polynomial.const(fr, q, 1)
    base = [Polynomial.var(fr, q, i) for i in range(fr.n)]
    for a in range(q):
        imgs = list(base)
        imgs[iy] = base[iy] + U.scale(a)
        imgs[it] = base[it] - X1.scale(a)
        out = out * substitute(f, imgs)
    return out


def lemma_digit_check(kmax=10 ** 4, qs=(3, 5, 7, 9, 11, 13)):
    """(q-1) | k implies (q-1) | ||k||_q; returns the first counterexample or None."""
    for q in qs:
        for k in range(0, kmax + 1, q - 1):
            if digit_sum(k, q) % (q - 1):
                return q, k
    return None


class PeelResult:
    """f = sum coeff * beta(digits) + remainder, all coeffs and the remainder free of y1."""

    def __init__(self, f):
        self.input = f
        self.pieces = []          # (digits, coefficient) with beta = prod xi_j^digits[j]
        self.remainder = f
        self.failure = None

    @property
    def ok(self):
        return self.failure is None

    def rebuild(self, m, q):
        out = self.remainder
        for digits, c in self.pieces:
            out = out + c * _beta(digits, m, q)
        return out


def _beta(digits, m, q):
    out = Polynomial.const(s_frame(m), q, 1)
    for j, a in enumerate(digits):
        if a:
            out = out * xi(j, m, q) ** a
    return out


def peel_strongly_compliant(f, m, q, max_steps=10 ** 5):
    """Remove the top y1-coefficient c_l with c_l x1^(-||l||) prod xi_j^(l_j), l_j the base-q digits of l.

    Works downward in y1-degree until the remainder is y1-free.  Stops with
    `failure` set if a coefficient is not divisible by the needed x1 power or
    the y1-degree reaches q^(n-2).
    """
    from .ring import _monomial_divide, InexactDivision
    n = 2 * m
    res = PeelResult(f)
    iy = f.frame.index("y1")
    x1 = var(m, q, "x1")
    cur = f
    for _ in range(max_steps):
        parts = cur.collect(iy)
        top = max(parts) if parts else 0
        if top == 0:
            break
        if top >= q ** (n - 2):
            res.failure = ("y1-degree too large", top)
            break
        digits = []
        k = top
        for _j in range(n - 2):
            digits.append(k % q)
            k //= q
        c = parts[top]
        s = sum(digits)
        try:
            coef = _monomial_divide(c, x1 ** s) if s else c
        except InexactDivision as e:
            res.failure = ("coefficient not divisible by x1^%d" % s, e.witness)
            break
        res.pieces.append((tuple(digits), coef))
        cur = cur - coef * _beta(digits, m, q)
    res.remainder = cur
    return res
