"""Orthogonal groups SO_n(q) (n odd), the parabolic P_n and its subgroup lattice.

Coordinates of F_q^n are ordered ``[v_m, ..., v_1, v_0, v_1', ..., v_m']``
so that ``e_m`` is index 0, ``e_0`` is index m and ``e_m'`` is index n-1.
For an element g of P_n the Levi data are ``a = g[0,0]`` and
``x = mid(g) = g[1:n-1, 1:n-1]``; the unipotent part is ``u_n(v)`` with
``v = g[1:n-1, n-1] * a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np

from .exact import Cyclotomic
from .ff import FieldSpec, field_make, find_nu, is_prime
from .matgrp import (
    Arith,
    FiniteMatrixGroup,
    MatrixOverFq,
    QuadraticForm,
    closure,
    closure_cached,
    group_from_keys,
    group_order_formula,
    is_isometry,
    isometry_mask,
    mat_det,
    mat_inv,
    quad_eval,
)

__all__ = [
    "OrthoContext",
    "symplectic_isomorphism",
    "ParabolicData",
    "LinearCharU",
    "build_context",
    "parabolic",
    "field_for_q",
    "u_elem",
    "u_batch",
    "s_elem",
    "weyl_elements",
    "weyl_s",
    "so_generators",
    "go_group",
    "so_group",
    "lambda_chars",
    "orbit_structure",
    "z_reps",
    "lemma4_subgroups",
    "parabolic_order",
    "inertia_orders",
    "centralizer_order_formula",
    "OrbitStructure",
    "ZData",
    "ContextError",
]


class ContextError(RuntimeError):
    """A construction that the theory guarantees could not be carried out."""


def field_for_q(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return field_make(p, k)
    raise ValueError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# small vectorised field helpers


def _fdot(F: FieldSpec, V: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise dot products sum_i V[:, i] * w[i]."""
    out = np.zeros(V.shape[0], dtype=np.int64)
    for i in range(V.shape[1]):
        if w[i]:
            out = F.add[out, F.mul[V[:, i].astype(np.int64), int(w[i])]]
    return out


def _fmatvec(F: FieldSpec, X: np.ndarray, w: np.ndarray, transpose: bool = False) -> np.ndarray:
    """X[k] @ w (or X[k]^T @ w) for a batch X of square matrices."""
    n = X.shape[1]
    out = np.zeros((X.shape[0], n), dtype=np.int64)
    for j in range(n):
        if not w[j]:
            continue
        col = X[:, j, :] if transpose else X[:, :, j]
        out = F.add[out, F.mul[col.astype(np.int64), int(w[j])]]
    return out


def _fscale(F: FieldSpec, V: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Multiply row k of V by the scalar a[k]."""
    return F.mul[V.astype(np.int64), a.astype(np.int64)[:, None]]


# ---------------------------------------------------------------------------
# context


@dataclass(frozen=True, eq=False)
class OrthoContext:
    """Field data and the fixed choices nu, nu', nu'', b_n for SO_n(q)."""

    n: int
    q: int
    F: FieldSpec
    nu: int
    nu_prime: int
    nu2: int
    b3: np.ndarray
    b: np.ndarray

    @property
    def m(self) -> int:
        return (self.n - 1) // 2

    @cached_property
    def Q(self) -> QuadraticForm:
        return QuadraticForm(self.F, "odd", self.n)

    @cached_property
    def Qtw(self) -> QuadraticForm:
        """The form Q_n' used to define the transporter b_n."""
        return QuadraticForm(self.F, "odd", self.n, nu=self.nu, twisted=True)

    @cached_property
    def Qsmall(self) -> QuadraticForm:
        """Q_{n-2} on the unipotent radical's parameter space."""
        return QuadraticForm(self.F, "odd", self.n - 2)

    @cached_property
    def ar(self) -> Arith:
        return Arith.get(self.F, self.n)

    @cached_property
    def sub(self) -> OrthoContext | None:
        return build_context(self.n - 2, self.q) if self.n >= 5 else None

    def describe(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "nu": self.nu,
            "nu_prime": self.nu_prime,
            "nu_double_prime": self.nu2,
            "b3_prime": self.b3.tolist(),
            "b_n": self.b.tolist(),
        }


def _search_b3(F: FieldSpec, nu: int, nu_prime: int) -> np.ndarray | None:
    """All b in GL_3(q) with Q'_3(b v) = nu' Q_3(v); return the smallest key."""
    Q3 = QuadraticForm(F, "odd", 3)
    Q3t = QuadraticForm(F, "odd", 3, nu=nu, twisted=True)
    q = F.q
    vecs = np.array([[(c // q**2) % q, (c // q) % q, c % q] for c in range(q**3)], dtype=np.int64)
    qt = Q3t.eval_batch(vecs)
    want_q = [int(F.mul[nu_prime, quad_eval(Q3, e)]) for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    # polar values B(e_i, e_j), i < j
    want_b = {
        (i, j): int(F.mul[nu_prime, Q3.gram[i, j]]) for i in range(3) for j in range(i + 1, 3)
    }
    cand = [np.nonzero(qt == want_q[j])[0] for j in range(3)]
    G = Q3t.gram.astype(np.int64)
    solutions = []

    def polar(a: int, b: int) -> int:
        return Q3t.polar(vecs[a].tolist(), vecs[b].tolist())

    for c0 in cand[0]:
        for c1 in cand[1]:
            if polar(c0, c1) != want_b[(0, 1)]:
                continue
            for c2 in cand[2]:
                if polar(c0, c2) != want_b[(0, 2)] or polar(c1, c2) != want_b[(1, 2)]:
                    continue
                b = np.stack([vecs[c0], vecs[c1], vecs[c2]], axis=1)
                if mat_det(F, b.astype(np.uint8)) != 0:
                    solutions.append(b)
    del G
    if not solutions:
        return None
    keys = [tuple(s.reshape(-1).tolist()) for s in solutions]
    return solutions[int(min(range(len(keys)), key=lambda i: keys[i]))].astype(np.uint8)


@lru_cache(maxsize=None)
def build_context(n: int, q: int) -> OrthoContext:
    """Fix nu, nu', nu'' and the transporter b_n for SO_n(q)."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    F = field_for_q(q)
    nu = find_nu(F).code
    nu2 = 1 if F.p == 2 else F.smallest_nonsquare()
    assert nu2 is not None
    choices = [1] if F.p == 2 else [1, F.smallest_nonsquare()]
    b3 = None
    nu_prime = 0
    for cand in choices:
        assert cand is not None
        b3 = _search_b3(F, nu, cand)
        if b3 is not None:
            nu_prime = cand
            break
    if b3 is None:
        raise ContextError(f"no transporter b'_3 over GF({q})")
    m = (n - 1) // 2
    b = np.zeros((n, n), dtype=np.uint8)
    for i in range(m - 1):
        b[i, i] = nu_prime
        b[n - 1 - i, n - 1 - i] = 1
    b[m - 1 : m + 2, m - 1 : m + 2] = b3
    ctx = OrthoContext(n, q, F, nu, nu_prime, nu2, b3, b)
    _check_transporter(ctx)
    return ctx


def _check_transporter(ctx: OrthoContext) -> None:
    F, n = ctx.F, ctx.n
    if F.q**n <= 10**6:
        vecs = np.array(np.unravel_index(np.arange(F.q**n), (F.q,) * n)).T.astype(np.int64)
    else:
        rng = np.random.default_rng(1)
        vecs = np.vstack([np.eye(n, dtype=np.int64), rng.integers(0, F.q, size=(4000, n))])
    # b v for every v: columns combine with coefficients v
    bv = np.zeros_like(vecs)
    for j in range(n):
        bv = F.add[bv, F.mul[vecs[:, j : j + 1], ctx.b[:, j].astype(np.int64)[None, :]]]
    lhs = ctx.Qtw.eval_batch(bv)
    rhs = F.mul[ctx.nu_prime, ctx.Q.eval_batch(vecs)]
    if not np.array_equal(lhs, rhs):
        raise ContextError("transporter check Q'(b v) = nu' Q(v) failed")


# ---------------------------------------------------------------------------
# explicit matrices


def u_batch(ctx: OrthoContext, V: np.ndarray) -> np.ndarray:
    """u_n(v) for every row v of V (shape (N, n-2))."""
    F, n = ctx.F, ctx.n
    V = np.asarray(V, dtype=np.int64)
    N = V.shape[0]
    Jp = ctx.Qsmall.gram.astype(np.int64)
    out = np.zeros((N, n, n), dtype=np.int64)
    out[:, np.arange(n), np.arange(n)] = 1
    for j in range(n - 2):
        out[:, 0, 1 + j] = F.neg[_fdot(F, V, Jp[:, j])]
    out[:, 0, n - 1] = F.neg[ctx.Qsmall.eval_batch(V)]
    out[:, 1 : n - 1, n - 1] = V
    return out.astype(np.uint8)


def u_elem(ctx: OrthoContext, v) -> MatrixOverFq:
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    if v.shape[1] != ctx.n - 2:
        raise ValueError("vector of the wrong length")
    return MatrixOverFq(ctx.F, u_batch(ctx, v)[0])


def s_batch(ctx: OrthoContext, X: np.ndarray, a: np.ndarray) -> np.ndarray:
    n = ctx.n
    X = np.asarray(X, dtype=np.uint8)
    out = np.zeros((X.shape[0], n, n), dtype=np.uint8)
    out[:, 1 : n - 1, 1 : n - 1] = X
    a = np.asarray(a, dtype=np.int64)
    out[:, 0, 0] = a
    out[:, n - 1, n - 1] = ctx.F.inv[a]
    return out


def s_elem(ctx: OrthoContext, x, a: int) -> MatrixOverFq:
    """s_n(x, a) = diag(a, x, a^-1) for x in SO_{n-2}(q)."""
    x = np.asarray(x.a if isinstance(x, MatrixOverFq) else x, dtype=np.uint8)
    if x.shape != (ctx.n - 2, ctx.n - 2):
        raise ValueError("x has the wrong size")
    if int(a) % ctx.q == 0 and a == 0:
        raise ValueError("a must be non-zero")
    if ctx.n > 3 and (not is_isometry(ctx.Qsmall, x) or mat_det(ctx.F, x) != 1):
        raise ValueError("x is not in SO_{n-2}(q)")
    if ctx.n == 3 and int(x[0, 0]) != 1:
        raise ValueError("x is not in SO_1(q)")
    return MatrixOverFq(ctx.F, s_batch(ctx, x[None], np.array([a]))[0])


def weyl_s(ctx: OrthoContext, j: int) -> np.ndarray:
    """The lift s_j of the j-th simple reflection."""
    n, m, F = ctx.n, ctx.m, ctx.F
    if not 1 <= j <= m:
        raise ValueError("j out of range")
    g = np.eye(n, dtype=np.uint8)
    if j == 1:
        i0, i1 = m - 1, m + 1
        g[i0, i0] = g[i1, i1] = 0
        g[i0, i1] = g[i1, i0] = 1
        g[m, m] = F.neg[1]
        return g
    a, b = m - j, m - j + 1
    c, d = n - 1 - b, n - 1 - a
    for x, y in ((a, b), (c, d)):
        g[x, x] = g[y, y] = 0
        g[x, y] = g[y, x] = 1
    return g


def weyl_elements(ctx: OrthoContext) -> dict[str, np.ndarray]:
    """The elements s, t and (for m >= 3) r = s_{m-1} of N_G(T)."""
    n, m, F = ctx.n, ctx.m, ctx.F
    out: dict[str, np.ndarray] = {}
    if m >= 2:
        out["s"] = weyl_s(ctx, m)
    t = np.eye(n, dtype=np.uint8)
    t[0, 0] = t[n - 1, n - 1] = 0
    t[0, n - 1] = t[n - 1, 0] = 1
    t[m, m] = F.neg[1]
    out["t"] = t
    if m >= 3:
        out["r"] = weyl_s(ctx, m - 1)
    return out


def torus_generators(ctx: OrthoContext) -> list[np.ndarray]:
    n, m, F = ctx.n, ctx.m, ctx.F
    if F.q == 2:
        return []
    g0 = F.primitive_element()
    gens = []
    for i in range(m):
        d = np.eye(n, dtype=np.uint8)
        d[i, i] = g0
        d[n - 1 - i, n - 1 - i] = F.inv[g0]
        gens.append(d)
    return gens


def so_generators(ctx: OrthoContext) -> list[np.ndarray]:
    """Root elements of U and of the opposite radical, torus and Weyl lifts."""
    n, F = ctx.n, ctx.F
    ar = ctx.ar
    gens: list[np.ndarray] = []
    basis = F.prime_basis()
    roots = []
    for i in range(n - 2):
        for c in basis:
            v = np.zeros((1, n - 2), dtype=np.int64)
            v[0, i] = c
            roots.append(u_batch(ctx, v)[0])
    t = weyl_elements(ctx)["t"]
    tinv = mat_inv(F, t)
    opposite = [ar.mul(ar.mul(t, g), tinv) for g in roots]
    gens = roots + opposite + torus_generators(ctx)
    gens += [weyl_s(ctx, j) for j in range(1, ctx.m + 1)]
    for g in gens:
        if not is_isometry(ctx.Q, g) or mat_det(F, g) != 1:  # pragma: no cover
            raise ContextError("generator is not in SO_n(q)")
    return gens


def so_group(ctx: OrthoContext, bound: int = 2_000_000) -> FiniteMatrixGroup:
    G = closure_cached(ctx.F, ctx.n, so_generators(ctx), recipe=f"SO{ctx.n}", bound=bound, name=f"SO{ctx.n}({ctx.q})")
    expected = group_order_formula("SO", ctx.m, ctx.q)
    if G.order != expected:
        raise ContextError(f"|SO_{ctx.n}({ctx.q})| = {G.order}, expected {expected}")
    return G


@lru_cache(maxsize=None)
def go_group(q: int, kind: str, dim: int) -> FiniteMatrixGroup:
    """GO^+-_{dim}(q) for the forms Q^+-_{dim}, generated by reflections."""
    F = field_for_q(q)
    if dim == 0:
        raise ValueError("GO_0 has no matrices; handle the trivial case by the caller")
    nu = find_nu(F).code
    Q = QuadraticForm(F, kind, dim, nu=nu)
    total = q**dim
    vecs = np.array(np.unravel_index(np.arange(total), (q,) * dim)).T.astype(np.int64)
    qv = Q.eval_batch(vecs)
    G = Q.gram.astype(np.int64)
    gens = []
    seen = set()
    for v, val in zip(vecs, qv):
        if val == 0:
            continue
        # normalise the line: first non-zero coordinate 1
        lead = int(v[np.nonzero(v)[0][0]])
        vn = F.mul[v, int(F.inv[lead])]
        key = tuple(vn.tolist())
        if key in seen:
            continue
        seen.add(key)
        qn = quad_eval(Q, vn.tolist())
        # w -> w - B(w, v) Q(v)^-1 v ; column j is the image of f_j
        Bv = np.zeros(dim, dtype=np.int64)
        for j in range(dim):
            acc = 0
            for i in range(dim):
                acc = int(F.add[acc, F.mul[G[j, i], vn[i]]])
            Bv[j] = acc
        coef = F.mul[Bv, int(F.inv[qn])]
        r = np.eye(dim, dtype=np.int64)
        for j in range(dim):
            for i in range(dim):
                r[i, j] = F.add[r[i, j], F.neg[F.mul[coef[j], vn[i]]]]
        gens.append(r.astype(np.uint8))
    expected = group_order_formula("GO+" if kind == "plus" else "GO-", dim // 2, q)
    grp = closure(F, dim, gens, name=f"GO{'+' if kind == 'plus' else '-'}{dim}({q})")
    if grp.order != expected:
        # reflections miss part of GO^+_4(2); add the coordinate swaps that preserve Q
        extra = []
        m = dim // 2
        for i in range(m):
            for j in range(i + 1, m):
                p = np.eye(dim, dtype=np.uint8)
                for a, b in ((i, j), (dim - 1 - i, dim - 1 - j)):
                    p[a, a] = p[b, b] = 0
                    p[a, b] = p[b, a] = 1
                extra.append(p)
            p = np.eye(dim, dtype=np.uint8)
            a, b = i, dim - 1 - i
            p[a, a] = p[b, b] = 0
            p[a, b] = p[b, a] = 1
            extra.append(p)
        for e in extra:
            if not is_isometry(Q, e):
                continue
            gens.append(e)
            grp = closure(F, dim, gens, name=grp.name)
            if grp.order == expected:
                break
    if grp.order != expected:
        raise ContextError(f"|{grp.name}| = {grp.order}, expected {expected}")
    if not isometry_mask(Q, grp.elems).all():  # pragma: no cover
        raise ContextError("GO element does not preserve the form")
    grp.form = Q  # type: ignore[attr-defined]
    return grp


# ---------------------------------------------------------------------------
# formulas


def _prod_even(q: int, top: int) -> int:
    """(q^2-1)(q^4-1)...(q^{2 top}-1)."""
    out = 1
    for i in range(1, top + 1):
        out *= q ** (2 * i) - 1
    return out


def parabolic_order(m: int, q: int) -> int:
    return q ** (m * m) * (q - 1) * _prod_even(q, m - 1)


def inertia_orders(m: int, q: int) -> dict[str, int]:
    """|I^0|, |I^+|, |I^-|, |P~_{n-2}| and |L^+-| from their order formulas."""
    U = q ** (2 * m - 1)
    pt = q ** ((m - 1) ** 2) * (q - 1) * _prod_even(q, m - 2)
    lp = 2 * q ** ((m - 1) * (m - 2)) * (q ** (m - 1) - 1) * _prod_even(q, m - 2)
    lm = 2 * q ** ((m - 1) * (m - 2)) * (q ** (m - 1) + 1) * _prod_even(q, m - 2)
    return {"Ptilde": pt, "L+": lp, "L-": lm, "I0": U * pt, "I+": U * lp, "I-": U * lm}


def centralizer_order_formula(m: int, q: int) -> tuple[int, int, int]:
    c0 = q ** (m * m) * (q - 1) * _prod_even(q, m - 2)
    if q % 2:
        c1 = 2 * q ** (m * m - m + 1) * (q ** (m - 1) - 1) * _prod_even(q, m - 2)
        c2 = 2 * q ** (m * m - m + 1) * (q ** (m - 1) + 1) * _prod_even(q, m - 2)
    else:
        c1 = q ** (m * m) * _prod_even(q, m - 1)
        c2 = q ** (m * m) * _prod_even(q, m - 2)
    return c0, c1, c2


# ---------------------------------------------------------------------------
# characters of U


@dataclass(frozen=True)
class LinearCharU:
    """lambda_w(u_n(v)) = xi(w . v)."""

    ctx: OrthoContext
    w: tuple[int, ...]
    name: str

    def exponents(self, X: np.ndarray) -> np.ndarray:
        """Exponents of zeta_p at the U-components of a batch of P-elements."""
        V = u_component(self.ctx, X)
        return self.ctx.F.trace[_fdot(self.ctx.F, V, np.array(self.w))]

    def __call__(self, x) -> Cyclotomic:
        a = np.asarray(x.a if isinstance(x, MatrixOverFq) else x, dtype=np.uint8)
        e = int(self.exponents(a[None])[0])
        return Cyclotomic.root_of_unity(self.ctx.F.p, e)


def u_component(ctx: OrthoContext, X: np.ndarray) -> np.ndarray:
    """v with g = u_n(v) s_n(x, a) for a batch of P-elements g."""
    F, n = ctx.F, ctx.n
    a = X[:, 0, 0].astype(np.int64)
    return _fscale(F, X[:, 1 : n - 1, n - 1], a)


def mid(X: np.ndarray) -> np.ndarray:
    n = X.shape[-1]
    return np.ascontiguousarray(X[..., 1 : n - 1, 1 : n - 1])


def levi(X: np.ndarray) -> np.ndarray:
    """The Levi component s_n(mid(g), g[0,0]) of P-elements."""
    n = X.shape[-1]
    Y = X.copy()
    Y[..., 0, 1:] = 0
    Y[..., : n - 1, n - 1] = 0
    return Y


def lambda_chars(ctx: OrthoContext) -> dict[str, LinearCharU]:
    """The orbit representatives lambda^0, lambda^+, lambda^- of Irr(U)."""
    n, m = ctx.n, ctx.m
    d = n - 2
    wplus = [0] * d
    wplus[m - 1] = 1
    out = {"+": LinearCharU(ctx, tuple(wplus), "lambda+")}
    if n >= 5:
        w0 = [0] * d
        w0[d - 1] = 1
        out["0"] = LinearCharU(ctx, tuple(w0), "lambda0")
        bsub = ctx.sub.b  # type: ignore[union-attr]
        out["-"] = LinearCharU(ctx, tuple(int(x) for x in bsub[m - 1]), "lambda-")
    return out


def stabilizer_mask(ctx: OrthoContext, X: np.ndarray, w) -> np.ndarray:
    """g in P fixes lambda_w iff x^T w = a^-1 w, with x = mid(g), a = g[0,0]."""
    F = ctx.F
    w = np.asarray(w, dtype=np.int64)
    xtw = _fmatvec(F, mid(X), w, transpose=True)
    ainv = F.inv[X[:, 0, 0].astype(np.int64)]
    rhs = F.mul[ainv[:, None], w[None, :]]
    return (xtw == rhs).all(axis=1)


@dataclass
class OrbitStructure:
    orbit_sizes: dict[str, int]
    num_orbits: int
    inertia_orders: dict[str, int]
    expected_inertia: dict[str, int]
    parabolic_order: int


def orbit_structure(ctx: OrthoContext) -> OrbitStructure:
    """L-orbits on Irr(U) = F_q^{n-2}, from the generators' action alone.

    s_n(x, a) sends lambda_w to lambda_{a^-1 x^-T w}.
    """
    if ctx.n < 5:
        raise ValueError("orbit structure needs n >= 5")
    F, n, q = ctx.F, ctx.n, ctx.q
    d = n - 2
    sub = ctx.sub
    assert sub is not None
    maps = []
    for x in so_generators(sub) if d > 1 else []:
        xinvT = mat_inv(F, x).T.copy()
        maps.append((xinvT.astype(np.int64), 1))
    maps.append((np.eye(d, dtype=np.int64), F.primitive_element() if q > 2 else 1))
    total = q**d
    weights = np.array([q ** (d - 1 - i) for i in range(d)], dtype=np.int64)
    vecs = np.array(np.unravel_index(np.arange(total), (q,) * d)).T.astype(np.int64)
    images = []
    for M, a in maps:
        img = np.zeros_like(vecs)
        for j in range(d):
            img = F.add[img, F.mul[vecs[:, j : j + 1], M[:, j][None, :]]]
        img = F.mul[img, int(F.inv[a])]
        images.append(img @ weights)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    rows = np.concatenate([np.arange(total)] * len(images))
    cols = np.concatenate(images)
    graph = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)), shape=(total, total))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    sizes = np.bincount(labels)
    lam = lambda_chars(ctx)
    reps = {"1": 0}
    for k in ("0", "+", "-"):
        reps[k] = int(np.array(lam[k].w, dtype=np.int64) @ weights)
    orbit_sizes = {k: int(sizes[labels[v]]) for k, v in reps.items()}
    if len({labels[v] for v in reps.values()}) != 4:
        raise ContextError("orbit representatives are not in distinct orbits")
    m = ctx.m
    Pord = parabolic_order(m, q)
    inertia = {k: Pord // orbit_sizes[k] for k in ("0", "+", "-")}
    formulas = inertia_orders(m, q)
    expected = {"0": formulas["I0"], "+": formulas["I+"], "-": formulas["I-"]}
    return OrbitStructure(orbit_sizes, int(ncomp), inertia, expected, Pord)


# ---------------------------------------------------------------------------
# parabolic data


@dataclass
class ZData:
    z: list[np.ndarray]
    classes: list[int]
    centralizer_orders: list[int]
    expected_centralizers: tuple[int, int, int]
    class_sizes: list[int]


class ParabolicData:
    """All groups of the parabolic lattice for one (n, q), built lazily."""

    def __init__(self, ctx: OrthoContext):
        self.ctx = ctx
        self.F = ctx.F
        self.n = ctx.n
        self.m = ctx.m
        self.q = ctx.q
        self.ar = ctx.ar

    def __repr__(self) -> str:
        return f"ParabolicData(n={self.n}, q={self.q})"

    # recursion --------------------------------------------------------
    @cached_property
    def sub(self) -> ParabolicData | None:
        return parabolic(self.n - 2, self.q) if self.n >= 5 else None

    # distinguished elements --------------------------------------------
    @cached_property
    def weyl(self) -> dict[str, np.ndarray]:
        return weyl_elements(self.ctx)

    @property
    def s(self) -> np.ndarray:
        return self.weyl["s"]

    @property
    def t(self) -> np.ndarray:
        return self.weyl["t"]

    @property
    def r(self) -> np.ndarray:
        return self.weyl["r"]

    # embeddings -------------------------------------------------------
    def embed(self, Y: np.ndarray, a: np.ndarray | int = 1) -> np.ndarray:
        """s_n(y, a) for a batch of (n-2)-matrices y."""
        Y = np.asarray(Y, dtype=np.uint8)
        if np.isscalar(a):
            a = np.full(Y.shape[0], a, dtype=np.int64)
        return s_batch(self.ctx, Y, np.asarray(a))

    def embed_group(self, H: FiniteMatrixGroup, name: str) -> FiniteMatrixGroup:
        """The image of an (n-2)-dimensional group under y -> s_n(y, 1)."""
        E = self.embed(H.elems)
        gens = list(self.embed(np.array(H.generators, dtype=np.uint8).reshape(-1, self.n - 2, self.n - 2)))
        keys = np.sort(self.ar.keys(E))
        return FiniteMatrixGroup(self.F, self.n, keys, gens, name=name)

    # main groups ------------------------------------------------------
    @cached_property
    def G(self) -> FiniteMatrixGroup:
        return so_group(self.ctx)

    @cached_property
    def P(self) -> FiniteMatrixGroup:
        ctx = self.ctx
        F = self.F
        gens = []
        for i in range(self.n - 2):
            for c in F.prime_basis():
                v = np.zeros((1, self.n - 2), dtype=np.int64)
                v[0, i] = c
                gens.append(u_batch(ctx, v)[0])
        if self.n >= 5:
            for x in so_generators(ctx.sub):  # type: ignore[arg-type]
                gens.append(self.embed(x[None])[0])
        if self.q > 2:
            gens.append(self.embed(np.eye(self.n - 2, dtype=np.uint8)[None], F.primitive_element())[0])
        P = closure_cached(F, self.n, gens, recipe=f"P{self.n}", name=f"P{self.n}({self.q})")
        if P.order != parabolic_order(self.m, self.q):
            raise ContextError(f"|P| = {P.order}, expected {parabolic_order(self.m, self.q)}")
        return P

    def _sub_of_P(self, mask_fn: Callable[[np.ndarray], np.ndarray], name: str) -> FiniteMatrixGroup:
        mask = mask_fn(self.P.elems)
        return group_from_keys(self.F, self.n, self.P.keys[mask], name=f"{name}({self.n},{self.q})")

    def _from_elems(self, E: np.ndarray, name: str, check: bool = True) -> FiniteMatrixGroup:
        return group_from_keys(self.F, self.n, self.ar.keys(E), name=f"{name}({self.n},{self.q})", check=check)

    def _is_levi(self, X: np.ndarray) -> np.ndarray:
        n = self.n
        return (X[:, 0, 1:] == 0).all(axis=1) & (X[:, 1 : n - 1, n - 1] == 0).all(axis=1)

    def _mid_identity(self, X: np.ndarray) -> np.ndarray:
        k = self.n - 2
        return (mid(X).reshape(X.shape[0], -1) == np.eye(k, dtype=np.uint8).reshape(-1)).all(axis=1)

    @cached_property
    def U(self) -> FiniteMatrixGroup:
        return self._sub_of_P(lambda X: self._mid_identity(X) & (X[:, 0, 0] == 1), "U")

    @cached_property
    def L(self) -> FiniteMatrixGroup:
        return self._sub_of_P(self._is_levi, "L")

    @cached_property
    def Lp(self) -> FiniteMatrixGroup:
        """L' = {s_n(x, 1)}."""
        return self._sub_of_P(lambda X: self._is_levi(X) & (X[:, 0, 0] == 1), "L'")

    @cached_property
    def A(self) -> FiniteMatrixGroup:
        return self._sub_of_P(lambda X: self._is_levi(X) & self._mid_identity(X), "A")

    @cached_property
    def lambdas(self) -> dict[str, LinearCharU]:
        return lambda_chars(self.ctx)

    # inertia ------------------------------------------------------------
    def stabilizer(self, eps: str) -> FiniteMatrixGroup:
        w = self.lambdas[eps].w
        return self._sub_of_P(lambda X: stabilizer_mask(self.ctx, X, w), f"Stab(lambda{eps})")

    @cached_property
    def Ptilde(self) -> FiniteMatrixGroup:
        """P~_{n-2} = U~_{n-2} L~_{n-2}."""
        n = self.n

        def shape(X: np.ndarray) -> np.ndarray:
            return (
                self._is_levi(X)
                & (X[:, 1, 1] == X[:, 0, 0])
                & (X[:, 2 : n - 1, 1] == 0).all(axis=1)
            )

        return self._sub_of_P(shape, "P~")

    @cached_property
    def Lplus(self) -> FiniteMatrixGroup:
        """L^+ ~ GO^+_{n-3}(q) embedded with a = det at positions 0, m, n-1."""
        n, m, F = self.n, self.m, self.F
        if n == 3:
            return self._from_elems(np.eye(3, dtype=np.uint8)[None], "L+")
        H = go_group(self.q, "plus", n - 3)
        idx = list(range(1, m)) + list(range(m + 1, n - 1))
        E = np.zeros((H.order, n, n), dtype=np.uint8)
        dets = np.array([mat_det(F, h) for h in H.elems], dtype=np.int64)
        E[:, 0, 0] = dets
        E[:, m, m] = dets
        E[:, n - 1, n - 1] = dets
        E[:, np.ix_(idx, idx)[0], np.ix_(idx, idx)[1]] = H.elems
        return self._from_elems(E, "L+")

    @cached_property
    def Lminus(self) -> FiniteMatrixGroup:
        """L^- = {s_n(b_{n-2}^-1 M b_{n-2}, a)} with M built from GO^-_{n-3}(q)."""
        n, m, F = self.n, self.m, self.F
        if n < 5:
            raise ValueError("L^- needs n >= 5")
        H = go_group(self.q, "minus", n - 3)
        d = n - 2
        idx = [i for i in range(d) if i != m - 1]
        M = np.zeros((H.order, d, d), dtype=np.uint8)
        dets = np.array([mat_det(F, h) for h in H.elems], dtype=np.int64)
        M[:, m - 1, m - 1] = dets
        M[:, np.ix_(idx, idx)[0], np.ix_(idx, idx)[1]] = H.elems
        bsub = self.ctx.sub.b  # type: ignore[union-attr]
        ar2 = Arith.get(F, d)
        Y = ar2.right(ar2.left(mat_inv(F, bsub), M), bsub)
        E = s_batch(self.ctx, Y, dets)
        return self._from_elems(E, "L-")

    def L_eps(self, eps: str) -> FiniteMatrixGroup:
        return getattr(self, {"+": "Lplus", "-": "Lminus"}[eps])

    @cached_property
    def I0(self) -> FiniteMatrixGroup:
        return self._product_group(self.U, self.Ptilde, "I0")

    @cached_property
    def Iplus(self) -> FiniteMatrixGroup:
        return self._product_group(self.U, self.Lplus, "I+")

    @cached_property
    def Iminus(self) -> FiniteMatrixGroup:
        return self._product_group(self.U, self.Lminus, "I-")

    def inertia(self, eps: str) -> FiniteMatrixGroup:
        return getattr(self, {"0": "I0", "+": "Iplus", "-": "Iminus"}[eps])

    def _product_group(self, X: FiniteMatrixGroup, Y: FiniteMatrixGroup, name: str, check: bool = True) -> FiniteMatrixGroup:
        keys = product_keys_groups(self.ar, X.elems, Y.elems)
        return group_from_keys(self.F, self.n, keys, name=f"{name}({self.n},{self.q})", check=check)

    # subgroup lattice of the Mackey formula ----------------------------------
    def conj_keys(self, x: np.ndarray, H: FiniteMatrixGroup | np.ndarray) -> np.ndarray:
        E = H.elems if isinstance(H, FiniteMatrixGroup) else H
        return np.unique(self.ar.keys(self.ar.conj(x, E)))

    @cached_property
    def sPcapP(self) -> FiniteMatrixGroup:
        keys = np.intersect1d(self.conj_keys(self.s, self.P), self.P.keys)
        return group_from_keys(self.F, self.n, keys, name=f"sP^P({self.n},{self.q})")

    @cached_property
    def R(self) -> FiniteMatrixGroup:
        """R = {u_n(v) : v'_{m-1} = 0}."""
        n = self.n
        return self._sub_of_P(
            lambda X: self._mid_identity(X) & (X[:, 0, 0] == 1) & (X[:, n - 2, n - 1] == 0), "R"
        )

    @cached_property
    def QK(self) -> FiniteMatrixGroup:
        """Q_K = A x P_{n-2}: Levi elements whose middle block stabilises <e_{m-1}>."""
        n = self.n
        return self._sub_of_P(lambda X: self._is_levi(X) & (X[:, 2 : n - 1, 1] == 0).all(axis=1), "Q_K")

    @cached_property
    def LK(self) -> FiniteMatrixGroup:
        """L_K: block diagonal (a, b, x, b^-1, a^-1)."""
        n = self.n

        def shape(X: np.ndarray) -> np.ndarray:
            off = X.copy()
            for i in (0, 1, n - 2, n - 1):
                off[:, i, i] = 0
            off[:, 2 : n - 2, 2 : n - 2] = 0
            return self._is_levi(X) & (off.reshape(X.shape[0], -1) == 0).all(axis=1)

        return self._sub_of_P(shape, "L_K")

    @cached_property
    def RQK(self) -> FiniteMatrixGroup:
        return self._product_group(self.R, self.QK, "RQ_K")

    @cached_property
    def P_sub_embedded(self) -> FiniteMatrixGroup:
        return self.embed_group(self.sub.P, f"P{self.n - 2}<L'")  # type: ignore[union-attr]

    def qk_levi_projection(self, X: np.ndarray) -> np.ndarray:
        """Q_K -> L_K: keep the diagonal blocks of sizes (1, 1, n-4, 1, 1)."""
        n = self.n
        Y = np.zeros_like(X)
        for i in (0, 1, n - 2, n - 1):
            Y[:, i, i] = X[:, i, i]
        Y[:, 2 : n - 2, 2 : n - 2] = X[:, 2 : n - 2, 2 : n - 2]
        return Y

    # P^+-_{n-3} ---------------------------------------------------------
    @cached_property
    def Pplus_n3(self) -> FiniteMatrixGroup:
        """Stabiliser of <e_{m-1}> in L^+."""
        L = self.Lplus
        mask = (L.elems[:, 2:, 1] == 0).all(axis=1)
        return group_from_keys(self.F, self.n, L.keys[mask], name=f"P+_(n-3)({self.n},{self.q})")

    def minus_inner(self, X: np.ndarray) -> np.ndarray:
        """M = b_{n-2} y b_{n-2}^-1 for elements s_n(y, a) of L^-."""
        F, d = self.F, self.n - 2
        bsub = self.ctx.sub.b  # type: ignore[union-attr]
        ar2 = Arith.get(F, d)
        return ar2.right(ar2.left(bsub, mid(X)), mat_inv(F, bsub))

    @cached_property
    def Pminus_n3(self) -> FiniteMatrixGroup:
        L = self.Lminus
        M = self.minus_inner(L.elems)
        mask = (M[:, 1:, 0] == 0).all(axis=1)
        return group_from_keys(self.F, self.n, L.keys[mask], name=f"P-_(n-3)({self.n},{self.q})")

    def P_eps_n3(self, eps: str) -> FiniteMatrixGroup:
        return getattr(self, {"+": "Pplus_n3", "-": "Pminus_n3"}[eps])

    # distinguished unipotent elements ------------------------------------
    @cached_property
    def zdata(self) -> ZData:
        return z_reps(self)

    def describe(self, include_groups: bool = True) -> dict:
        out: dict = {"context": self.ctx.describe()}
        out["elements"] = {k: v.tolist() for k, v in self.weyl.items()}
        if self.n >= 5:
            out["elements"].update({f"z{j}": z.tolist() for j, z in enumerate(self.zdata.z)})
            out["lambda"] = {k: list(v.w) for k, v in self.lambdas.items()}
        if include_groups:
            names = ["P", "U", "L", "Lp", "A", "Lplus"]
            if self.n >= 5:
                names += ["Ptilde", "Lminus", "I0", "Iplus", "Iminus", "R", "QK", "LK", "RQK"]
            out["groups"] = {
                k: {"order": getattr(self, k).order, "generators": [g.tolist() for g in getattr(self, k).generators]}
                for k in names
            }
        return out


def product_keys_groups(ar: Arith, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[0] > Y.shape[0]:
        parts = [ar.keys(ar.right(X, y)) for y in Y]
    else:
        parts = [ar.keys(ar.left(x, Y)) for x in X]
    return np.unique(np.concatenate(parts))


@lru_cache(maxsize=None)
def parabolic(n: int, q: int) -> ParabolicData:
    return ParabolicData(build_context(n, q))


def z_reps(pd: ParabolicData) -> ZData:
    """z_j = u_n(v_j) with v_0 = e_{m-1}, v_1 = e_0, v_2 = e_{m-1} + nu'' e'_{m-1}."""
    ctx = pd.ctx
    if ctx.n < 5:
        raise ValueError("z_j need n >= 5")
    d, m = ctx.n - 2, ctx.m
    V = np.zeros((3, d), dtype=np.int64)
    V[0, 0] = 1
    V[1, m - 1] = 1
    V[2, 0] = 1
    V[2, d - 1] = ctx.nu2
    Z = u_batch(ctx, V)
    P = pd.P
    cls = [int(c) for c in P.class_index(Z)]
    cent = [P.classes[c].centralizer_order for c in cls]
    sizes = [P.classes[c].size for c in cls]
    return ZData(list(Z), cls, cent, centralizer_order_formula(m, ctx.q), sizes)


# ---------------------------------------------------------------------------
# subgroup identities of the double coset analysis


def _set(keys: np.ndarray) -> np.ndarray:
    return np.unique(keys)


def _eq(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.array_equal(a, b))


def lemma4_subgroups(pd: ParabolicData) -> dict[str, object]:
    """Build the subgroups of the Mackey analysis and check their identities.

    Returns a dict with the groups (as FiniteMatrixGroup or key arrays) and
    a list ``checks`` of (claim, holds) pairs; nothing is assumed.
    """
    if pd.n < 5:
        raise ValueError("needs m >= 2")
    ar, n, m, F, q = pd.ar, pd.n, pd.m, pd.F, pd.q
    s, t = pd.s, pd.t
    P, U, L = pd.P, pd.U, pd.L
    checks: list[tuple[str, bool]] = []
    out: dict[str, object] = {"checks": checks}

    sP = pd.conj_keys(s, P)
    sU = pd.conj_keys(s, U)
    sL = pd.conj_keys(s, L)
    tP = pd.conj_keys(t, P)

    # (a) P-orbits on isotropic lines <-> double cosets
    out["double_cosets"] = double_coset_sizes(pd)
    dc = out["double_cosets"]
    checks.append(("{1,s,t} meets every P-P double coset once", dc["partition_ok"]))

    # (b)
    checks.append(("tP cap P = L", _eq(np.intersect1d(tP, P.keys), L.keys)))

    # (c) K
    J = [weyl_s(pd.ctx, j) for j in range(1, m)]
    sinv = mat_inv(F, s)
    K = []
    for j, sj in enumerate(J, start=1):
        img = ar.mul(ar.mul(s, sj), sinv)
        for i, si in enumerate(J, start=1):
            quot = ar.mul(img, mat_inv(F, si))
            if np.count_nonzero(quot - np.diag(np.diag(quot))) == 0:
                K.append(i)
    out["K"] = sorted(set(K))
    checks.append(("K = {s_1..s_{m-2}}", out["K"] == list(range(1, m - 1))))

    sUcapU = np.intersect1d(sU, U.keys)
    sLcapU = np.intersect1d(sL, U.keys)
    sUcapL = np.intersect1d(sU, L.keys)
    sLcapL = np.intersect1d(sL, L.keys)
    LK, QK = pd.LK, pd.QK
    dec = ar.decode
    prod_c = product_keys_groups(ar, dec(sUcapU), dec(sLcapU))
    prod_c = product_keys_groups(ar, dec(prod_c), dec(sUcapL))
    prod_c = product_keys_groups(ar, dec(prod_c), LK.elems)
    sPcapP = np.intersect1d(sP, P.keys)
    checks.append(("sP cap P = (sU^U)(sL^U)(sU^L)L_K", _eq(prod_c, sPcapP)))
    Usub = pd.embed(u_batch(pd.ctx.sub, _all_vectors(F, n - 4)) if n - 4 > 0 else np.eye(n - 2, dtype=np.uint8)[None])
    Usub_keys = _set(ar.keys(Usub))
    checks.append(("sU cap L = U_{n-2}", _eq(sUcapL, Usub_keys)))
    checks.append(("Q_K = (sU cap L) L_K", _eq(product_keys_groups(ar, dec(sUcapL), LK.elems), QK.keys)))
    PsubA = product_keys_groups(ar, pd.A.elems, pd.P_sub_embedded.elems)
    checks.append(("Q_K = A x P_{n-2}", _eq(PsubA, QK.keys)))
    # A_{n-2} = sA and L~'_{n-2}
    A_n2 = _diag_family(pd, lambda b: [(1, b), (n - 2, F.inv[b])])
    checks.append(("A_{n-2} = sA", _eq(pd.conj_keys(s, pd.A), _set(ar.keys(A_n2)))))
    if n - 4 >= 1:
        SOn4 = so_group(build_context(n - 4, q)).elems if n - 4 >= 3 else np.ones((1, 1, 1), dtype=np.uint8)
        Lt = np.tile(np.eye(n, dtype=np.uint8), (SOn4.shape[0], 1, 1))
        Lt[:, 2 : n - 2, 2 : n - 2] = SOn4
        Ltp_keys = _set(ar.keys(Lt))
    else:  # pragma: no cover
        Ltp_keys = _set(ar.keys(np.eye(n, dtype=np.uint8)[None]))
    lk_prod = product_keys_groups(ar, pd.A.elems, A_n2)
    lk_prod = product_keys_groups(ar, dec(lk_prod), dec(Ltp_keys))
    checks.append(("L_K = A x A_{n-2} x L~'_{n-2}", _eq(lk_prod, LK.keys)))

    # (d)
    V = _all_vectors(F, n - 2)
    Ue = u_batch(pd.ctx, V)
    mask_i = (V[:, 0] == 0) & (V[:, n - 3] == 0)
    checks.append(("sL cap U = {u(v): v_{m-1} = v'_{m-1} = 0}", _eq(sLcapU, _set(ar.keys(Ue[mask_i])))))
    checks.append(("sL cap L = L_K", _eq(sLcapL, LK.keys)))
    mask_iii = (V[:, 1:] == 0).all(axis=1)
    checks.append(("sU cap U = {u(v_{m-1} e_{m-1})}", _eq(sUcapU, _set(ar.keys(Ue[mask_iii])))))
    checks.append(("|sU cap U| = q", sUcapU.shape[0] == q))
    R = pd.R
    Rprod = product_keys_groups(ar, dec(sUcapU), dec(sLcapU))
    checks.append(("R = (sU cap U)(sL cap U)", _eq(Rprod, R.keys)))
    checks.append(("[U:R] = q", U.order == q * R.order))
    checks.append(("sP cap P = R Q_K", _eq(sPcapP, pd.RQK.keys)))
    PK = product_keys_groups(ar, U.elems, QK.elems)
    checks.append(("[P_K : R Q_K] = q", PK.shape[0] == q * pd.RQK.order))
    out.update(
        {
            "sU_cap_U": sUcapU,
            "sL_cap_U": sLcapU,
            "sU_cap_L": sUcapL,
            "R": R,
            "QK": QK,
            "LK": LK,
            "A_n-2": _set(ar.keys(A_n2)),
            "RQK": pd.RQK,
        }
    )

    if m >= 3:
        _rs_intersection_checks(pd, out, checks)
    return out


def _all_vectors(F: FieldSpec, d: int) -> np.ndarray:
    q = F.q
    return np.array(np.unravel_index(np.arange(q**d), (q,) * d)).T.astype(np.int64)


def _diag_family(pd: ParabolicData, entries: Callable[[int], list[tuple[int, int]]]) -> np.ndarray:
    out = []
    for a in range(1, pd.q):
        g = np.eye(pd.n, dtype=np.uint8)
        for i, v in entries(a):
            g[i, i] = v
        out.append(g)
    return np.array(out, dtype=np.uint8)


def _rs_intersection_checks(pd: ParabolicData, out: dict, checks: list[tuple[str, bool]]) -> None:
    """^{rs}(R Q'_K) cap U P~_{n-2} = (^r R) Y and A x Y = A x (^r P_{n-2} cap P_{n-2})."""
    ar, n, F = pd.ar, pd.n, pd.F
    r, s = pd.r, pd.s
    sub = pd.sub
    assert sub is not None
    dec = ar.decode
    # Q'_K = A x U_{n-2} P~_{n-4}; U_{n-2} P~_{n-4} is I^0 of the (n-2)-context
    sub_I0 = pd.embed(sub.I0.elems)
    QpK = product_keys_groups(ar, pd.A.elems, sub_I0)
    RQpK = product_keys_groups(ar, pd.R.elems, dec(QpK))
    rs = ar.mul(r, s)
    lhs = np.intersect1d(pd.conj_keys(rs, dec(RQpK)), pd.I0.keys)
    # Y from the intersection pieces of the (n-2)-context, conjugated into G_n
    sr = sub.s  # s of the (n-2)-context corresponds to r
    Usub, Lsub = sub.U, sub.L
    r_U = np.intersect1d(sub.conj_keys(sr, Usub), Usub.keys)
    r_L_U = np.intersect1d(sub.conj_keys(sr, Lsub), Usub.keys)
    r_U_L = np.intersect1d(sub.conj_keys(sr, Usub), Lsub.keys)
    a_nn2 = _diag_family(pd, lambda a: [(0, a), (1, a), (n - 2, F.inv[a]), (n - 1, F.inv[a])])
    a_n4 = _diag_family(pd, lambda a: [(2, a), (n - 3, F.inv[a])])
    if n - 6 >= 3:
        SOn6 = so_group(build_context(n - 6, pd.q)).elems
    else:
        SOn6 = np.ones((1, 1, 1), dtype=np.uint8)
    Lp_n4 = np.tile(np.eye(n, dtype=np.uint8), (SOn6.shape[0], 1, 1))
    Lp_n4[:, 3 : n - 3, 3 : n - 3] = SOn6
    sar = sub.ar
    pieces = [pd.embed(sar.decode(r_U)), pd.embed(sar.decode(r_L_U)), pd.embed(sar.decode(r_U_L))]
    Y = product_keys_groups(ar, pieces[0], pieces[1])
    Y = product_keys_groups(ar, dec(Y), pieces[2])
    Y = product_keys_groups(ar, dec(Y), a_nn2)
    Y = product_keys_groups(ar, dec(Y), a_n4)
    Y = product_keys_groups(ar, dec(Y), Lp_n4)
    rR = pd.conj_keys(r, pd.R)
    rhs = product_keys_groups(ar, dec(rR), dec(Y))
    checks.append(("rs(R Q'_K) cap U P~_{n-2} = (rR) Y", _eq(lhs, rhs)))
    Psub = pd.P_sub_embedded
    rPcapP = np.intersect1d(pd.conj_keys(r, Psub), Psub.keys)
    AY = product_keys_groups(ar, pd.A.elems, dec(Y))
    ArP = product_keys_groups(ar, pd.A.elems, dec(rPcapP))
    checks.append(("A x Y = A x (rP_{n-2} cap P_{n-2})", _eq(AY, ArP)))
    out["Y"] = Y
    out["QpK"] = QpK
    out["rP_cap_P"] = rPcapP


def double_coset_sizes(pd: ParabolicData) -> dict:
    """P-orbits on isotropic lines: sizes of P, PsP, PtP and the partition check."""
    F, n = pd.F, pd.n
    q = pd.q
    V = _all_vectors(F, n)
    iso = (pd.ctx.Q.eval_batch(V) == 0) & (V != 0).any(axis=1)
    V = V[iso]
    # normalise lines: first non-zero coordinate 1
    lead_idx = (V != 0).argmax(axis=1)
    lead = V[np.arange(V.shape[0]), lead_idx]
    Vn = F.mul[V, F.inv[lead][:, None]]
    weights = np.array([q ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    line_codes = np.unique(Vn @ weights)
    num_lines = line_codes.shape[0]
    # orbits of P via its generators acting on lines
    gens = pd.P.generators
    codes_vec = np.array(np.unravel_index(line_codes, (q,) * n)).T.astype(np.int64)
    images = []
    for g in gens:
        img = np.zeros_like(codes_vec)
        for j in range(n):
            img = F.add[img, F.mul[codes_vec[:, j : j + 1], g[:, j].astype(np.int64)[None, :]]]
        li = (img != 0).argmax(axis=1)
        ld = img[np.arange(img.shape[0]), li]
        img = F.mul[img, F.inv[ld][:, None]]
        images.append(np.searchsorted(line_codes, img @ weights))
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    rows = np.concatenate([np.arange(num_lines)] * len(images))
    cols = np.concatenate(images)
    graph = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)), shape=(num_lines, num_lines))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    sizes = np.bincount(labels)

    def line_of(x: np.ndarray) -> int:
        v = x[:, 0].astype(np.int64)  # x e_m
        i = int(np.nonzero(v)[0][0])
        v = F.mul[v, int(F.inv[v[i]])]
        return int(np.searchsorted(line_codes, int(v @ weights)))

    reps = {"1": np.eye(n, dtype=np.uint8), "s": pd.s, "t": pd.t}
    orbit_of = {k: int(labels[line_of(x)]) for k, x in reps.items()}
    Pord = pd.P.order
    dc_sizes = {k: Pord * int(sizes[orbit_of[k]]) for k in reps}
    Gord = group_order_formula("SO", pd.m, q)
    ok = (
        ncomp == 3
        and len(set(orbit_of.values())) == 3
        and sum(dc_sizes.values()) == Gord
        and num_lines * Pord == Gord
    )
    return {"num_orbits": int(ncomp), "sizes": dc_sizes, "group_order": Gord, "partition_ok": bool(ok)}


def symplectic_order(m: int, q: int) -> int:
    out = q ** (m * m)
    for i in range(1, m + 1):
        out *= q ** (2 * i) - 1
    return out


def symplectic_isomorphism(n: int, q: int) -> dict[str, bool]:
    """For even q, deleting the middle row and column maps SO_n(q) onto Sp_{n-1}(q).

    Checked on the enumerated group: the image preserves the polar form
    (alternating, with the middle coordinate as radical), the map is
    injective, the image has the order of Sp_{n-1}(q), and
    delta(gh) = delta(g) delta(h) for all g in G and all generators h.
    """
    if q % 2:
        raise ValueError("the deletion map is an isomorphism only for even q")
    ctx = build_context(n, q)
    G = so_group(ctx)
    F, m = ctx.F, ctx.m
    keep = [i for i in range(n) if i != m]
    B = ctx.Q.gram[np.ix_(keep, keep)]
    ar2 = Arith.get(F, n - 1)

    def delta(X: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(X[:, keep][:, :, keep])

    Y = delta(G.elems)
    BY = ar2.left(B, Y)
    form = ar2.pairwise(np.ascontiguousarray(Y.transpose(0, 2, 1)), BY)
    preserves = bool((form == B[None]).all())
    keys = ar2.keys(Y)
    injective = np.unique(keys).shape[0] == G.order
    homomorphism = True
    for h in G.generators:
        lhs = ar2.keys(delta(G.ar.right(G.elems, h)))
        rhs = ar2.keys(ar2.right(Y, delta(h[None])[0]))
        homomorphism &= bool(np.array_equal(lhs, rhs))
    return {
        "radical_is_middle": bool((ctx.Q.gram[m] == 0).all()),
        "preserves_form": preserves,
        "injective": bool(injective),
        "onto": bool(injective and G.order == symplectic_order(m, q)),
        "homomorphism": homomorphism,
    }
