"""Matrices over GF(q), quadratic forms and fully enumerated matrix groups.

Group elements are stored as ``uint8`` arrays of field codes.  Products of
a fixed matrix with a large batch are done as one dense GEMM over the prime
field: every entry of GF(p^k) is expanded into its k x k multiplication
matrix over GF(p), so extension fields use the same fast path as prime
fields.

Every element has a canonical key: its n*n base-q digits read row-major
with the first entry most significant.  Keys are ``int64`` when
``q**(n*n)`` fits, otherwise fixed-width byte strings; in both cases the
sort order is the lexicographic order of the digit strings.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cache import load_arrays, recipe_key, save_arrays
from .ff import FieldSpec

__all__ = [
    "MatrixOverFq",
    "QuadraticForm",
    "FiniteMatrixGroup",
    "ConjClass",
    "BoundExceeded",
    "NotClosedError",
    "Arith",
    "quad_eval",
    "is_isometry",
    "group_order_formula",
    "closure",
    "conjugacy_classes",
    "class_fusion",
    "subgroup",
    "group_from_keys",
    "DEFAULT_BOUND",
]

DEFAULT_BOUND = 2_000_000
_CHUNK = 1 << 17
_CACHE_MIN_ORDER = 50_000


class BoundExceeded(RuntimeError):
    """The group is larger than the enumeration bound."""


class NotClosedError(ValueError):
    """A set that was supposed to be a subgroup is not closed."""


# ---------------------------------------------------------------------------
# bulk arithmetic


class Arith:
    """Batch matrix arithmetic for n x n matrices over one field."""

    _cache: dict[tuple[FieldSpec, int], "Arith"] = {}

    def __init__(self, F: FieldSpec, n: int):
        self.F = F
        self.n = n
        self.q = F.q
        self.p = F.p
        self.k = F.k
        self.use_int_keys = n * n * math.log2(F.q) < 62.5
        if self.use_int_keys:
            w = [1] * (n * n)
            for i in range(n * n - 2, -1, -1):
                w[i] = w[i + 1] * F.q
            self.weights = np.array(w, dtype=np.int64)
        self.key_dtype = np.int64 if self.use_int_keys else np.dtype(f"V{n * n}")
        # digit weights of a code inside its k x k block (first column)
        self._code_w = np.array([F.p**i for i in range(F.k)], dtype=np.int64)

    @classmethod
    def get(cls, F: FieldSpec, n: int) -> Arith:
        key = (F, n)
        if key not in cls._cache:
            cls._cache[key] = cls(F, n)
        return cls._cache[key]

    # expansion to the prime field -----------------------------------
    def expand(self, X: np.ndarray) -> np.ndarray:
        """(..., n, n) codes -> (..., nk, nk) matrices over GF(p)."""
        if self.k == 1:
            return X.astype(np.float64)
        n, k = self.n, self.k
        E = self.F.mult_mats[X]  # (..., n, n, k, k)
        lead = E.shape[:-4]
        E = np.moveaxis(E, -3, -2)  # (..., n, k, n, k)
        return E.reshape(lead + (n * k, n * k)).astype(np.float64)

    def compress(self, Y: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`expand` (after reduction mod p)."""
        Yi = np.rint(Y).astype(np.int64) % self.p
        if self.k == 1:
            return Yi.astype(np.uint8)
        n, k = self.n, self.k
        lead = Yi.shape[:-2]
        Yi = Yi.reshape(lead + (n, k, n, k))[..., :, :, :, 0]  # (..., n, k, n)
        Yi = np.moveaxis(Yi, -2, -1)  # (..., n, n, k)
        return (Yi @ self._code_w).astype(np.uint8)

    def left(self, g: np.ndarray, X: np.ndarray) -> np.ndarray:
        """g @ X[i] for every i, X of shape (N, n, n)."""
        N = X.shape[0]
        if N == 0:
            return X.copy()
        ge = self.expand(np.asarray(g))
        d = ge.shape[0]
        out = np.empty_like(X, dtype=np.uint8)
        for s in range(0, N, _CHUNK):
            Xe = self.expand(X[s : s + _CHUNK])
            c = Xe.shape[0]
            T = Xe.transpose(1, 0, 2).reshape(d, c * d)
            R = (ge @ T).reshape(d, c, d).transpose(1, 0, 2) % self.p
            out[s : s + c] = self.compress(R)
        return out

    def right(self, X: np.ndarray, g: np.ndarray) -> np.ndarray:
        """X[i] @ g for every i."""
        N = X.shape[0]
        if N == 0:
            return X.copy()
        ge = self.expand(np.asarray(g))
        d = ge.shape[0]
        out = np.empty_like(X, dtype=np.uint8)
        for s in range(0, N, _CHUNK):
            Xe = self.expand(X[s : s + _CHUNK])
            c = Xe.shape[0]
            R = (Xe.reshape(c * d, d) @ ge).reshape(c, d, d) % self.p
            out[s : s + c] = self.compress(R)
        return out

    def conj(self, g: np.ndarray, X: np.ndarray, ginv: np.ndarray | None = None) -> np.ndarray:
        """g X[i] g^-1."""
        if ginv is None:
            ginv = self.inv(g)
        return self.right(self.left(g, X), ginv)

    def pairwise(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """X[i] @ Y[i] for equally long batches."""
        Xe, Ye = self.expand(X), self.expand(Y)
        return self.compress(np.matmul(Xe, Ye) % self.p)

    # single matrices --------------------------------------------------
    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.compress((self.expand(np.asarray(a)) @ self.expand(np.asarray(b))) % self.p)

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.uint8)

    def power(self, a: np.ndarray, e: int) -> np.ndarray:
        r, b = self.identity(), np.asarray(a, dtype=np.uint8)
        if e < 0:
            b, e = self.inv(b), -e
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def inv(self, a: np.ndarray) -> np.ndarray:
        return mat_inv(self.F, np.asarray(a))

    def order(self, a: np.ndarray, limit: int = 10_000) -> int:
        ident = self.identity()
        x, o = np.asarray(a, dtype=np.uint8), 1
        while not np.array_equal(x, ident):
            x = self.mul(x, a)
            o += 1
            if o > limit:
                raise ValueError("element order above limit")
        return o

    # keys --------------------------------------------------------------
    def keys(self, X: np.ndarray) -> np.ndarray:
        N = X.shape[0]
        flat = X.reshape(N, self.n * self.n)
        if self.use_int_keys:
            return flat.astype(np.int64) @ self.weights
        return np.ascontiguousarray(flat.astype(np.uint8)).view(self.key_dtype).reshape(N)

    def key(self, x: np.ndarray) -> object:
        return self.keys(np.asarray(x, dtype=np.uint8)[None])[0]

    def decode(self, keys: np.ndarray) -> np.ndarray:
        N = keys.shape[0]
        n = self.n
        if self.use_int_keys:
            out = np.empty((N, n * n), dtype=np.uint8)
            k = keys.astype(np.int64).copy()
            for j in range(n * n - 1, -1, -1):
                out[:, j] = k % self.q
                k //= self.q
            return out.reshape(N, n, n)
        return np.frombuffer(np.ascontiguousarray(keys).tobytes(), dtype=np.uint8).reshape(N, n, n).copy()

    def key_bytes(self, x: np.ndarray) -> bytes:
        return bytes(np.asarray(x, dtype=np.uint8).reshape(-1).tolist())


def _lookup(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Positions of ``keys`` in ``sorted_keys`` (-1 where absent)."""
    if sorted_keys.shape[0] == 0:
        return np.full(keys.shape[0], -1, dtype=np.int64)
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.minimum(pos, sorted_keys.shape[0] - 1)
    found = sorted_keys[pos] == keys
    return np.where(found, pos, -1).astype(np.int64)


# ---------------------------------------------------------------------------
# single-matrix helpers


def mat_inv(F: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination over the field tables."""
    n = a.shape[0]
    M = [[int(a[i, j]) for j in range(n)] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c]), None)
        if r is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[r] = M[r], M[c]
        f = int(inv[M[c][c]])
        M[c] = [int(mul[f, x]) for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = int(neg[M[r][c]])
                M[r] = [int(add[x, mul[f, y]]) for x, y in zip(M[r], M[c])]
    return np.array([row[n:] for row in M], dtype=np.uint8)


def mat_det(F: FieldSpec, a: np.ndarray) -> int:
    n = a.shape[0]
    M = [[int(a[i, j]) for j in range(n)] for i in range(n)]
    det = 1
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c]), None)
        if r is None:
            return 0
        if r != c:
            M[c], M[r] = M[r], M[c]
            det = int(F.neg[det])
        det = int(F.mul[det, M[c][c]])
        f = int(F.inv[M[c][c]])
        for r in range(c + 1, n):
            if M[r][c]:
                g = int(F.neg[F.mul[M[r][c], f]])
                M[r] = [int(F.add[x, F.mul[g, y]]) for x, y in zip(M[r], M[c])]
    return det


def mat_vec(F: FieldSpec, a: np.ndarray, v: Sequence[int]) -> list[int]:
    n = a.shape[0]
    out = []
    for i in range(n):
        acc = 0
        for j in range(len(v)):
            acc = int(F.add[acc, F.mul[int(a[i, j]), int(v[j])]])
        out.append(acc)
    return out


class MatrixOverFq:
    """An invertible-or-not n x n matrix over a finite field, hashable by key."""

    __slots__ = ("F", "a", "_key")

    def __init__(self, F: FieldSpec, entries: np.ndarray | Sequence[Sequence[int]]):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("square matrix expected")
        if (a < 0).any() or (a >= F.q).any():
            raise ValueError("entries must be field codes")
        self.F = F
        self.a = a.astype(np.uint8)
        self._key: bytes | None = None

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = bytes(self.a.reshape(-1).tolist())
        return self._key

    @classmethod
    def identity(cls, F: FieldSpec, n: int) -> MatrixOverFq:
        return cls(F, np.eye(n, dtype=np.int64))

    def __matmul__(self, other: MatrixOverFq) -> MatrixOverFq:
        return MatrixOverFq(self.F, Arith.get(self.F, self.n).mul(self.a, other.a))

    __mul__ = __matmul__

    def inverse(self) -> MatrixOverFq:
        return MatrixOverFq(self.F, mat_inv(self.F, self.a))

    def det(self) -> int:
        return mat_det(self.F, self.a)

    def transpose(self) -> MatrixOverFq:
        return MatrixOverFq(self.F, self.a.T)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatrixOverFq) and self.F == other.F and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        rows = [" ".join(str(int(x)) for x in row) for row in self.a]
        return "MatrixOverFq[" + " | ".join(rows) + "]"


# ---------------------------------------------------------------------------
# quadratic forms


def anti_identity(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """One of the forms Q_{2m+1}, Q+_{2m}, Q-_{2m} in hyperbolic coordinates.

    Coordinates are ordered ``[v_m, ..., v_1, (v_0), v_1', ..., v_m']``.
    ``kind`` is ``"odd"``, ``"plus"`` or ``"minus"``; ``twisted`` selects
    the variant ``v_0^2 + (v_1^2 + v_1 v_1' + nu v_1'^2) + ...`` on odd
    dimension used to build the minus-type transporter.
    """

    F: FieldSpec
    kind: str
    dim: int
    nu: int = 0
    twisted: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("odd", "plus", "minus"):
            raise ValueError(f"unknown form kind {self.kind}")
        if (self.kind == "odd") != (self.dim % 2 == 1):
            raise ValueError("dimension parity does not match the kind")
        if self.kind == "minus" and self.dim < 2:
            raise ValueError("minus-type form needs dimension >= 2")
        if self.twisted and (self.kind != "odd" or self.dim < 3):
            raise ValueError("twisted form needs odd dimension >= 3")

    @property
    def m(self) -> int:
        return self.dim // 2

    def _terms(self) -> tuple[list[tuple[int, int, int]], list[int]]:
        """Monomials (i, j, coeff) with i <= j."""
        m, d = self.m, self.dim
        terms: list[tuple[int, int, int]] = []
        odd = self.kind == "odd"
        for j in range(1, m + 1):
            i = m - j  # position of v_j
            ip = d - 1 - i  # position of v_j'
            terms.append((i, ip, 1))
        if odd:
            terms.append((m, m, 1))
        if self.kind == "minus" or self.twisted:
            i, ip = m - 1, d - m
            terms.append((i, i, 1))
            terms.append((ip, ip, self.nu))
        return terms, []

    def __call__(self, v: Sequence[int]) -> int:
        return quad_eval(self, v)

    @cached_property
    def gram(self) -> np.ndarray:
        F = self.F
        G = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, j, c in self._terms()[0]:
            if i == j:
                G[i, i] = F.add[G[i, i], F.add[c, c]]
            else:
                G[i, j] = F.add[G[i, j], c]
                G[j, i] = F.add[G[j, i], c]
        return G.astype(np.uint8)

    def polar(self, v: Sequence[int], w: Sequence[int]) -> int:
        F = self.F
        Gw = mat_vec(F, self.gram, w)
        acc = 0
        for a, b in zip(v, Gw):
            acc = int(F.add[acc, F.mul[int(a), b]])
        return acc

    def eval_batch(self, V: np.ndarray) -> np.ndarray:
        """Values on the rows of an (N, dim) code array."""
        F = self.F
        out = np.zeros(V.shape[0], dtype=np.int64)
        for i, j, c in self._terms()[0]:
            t = F.mul[F.mul[V[:, i], V[:, j]], c]
            out = F.add[out, t]
        return out


def quad_eval(Q: QuadraticForm, v: Sequence[int]) -> int:
    if len(v) != Q.dim:
        raise ValueError("dimension mismatch")
    F = Q.F
    acc = 0
    for i, j, c in Q._terms()[0]:
        acc = int(F.add[acc, F.mul[F.mul[int(v[i]), int(v[j])], c]])
    return acc


def is_isometry(Q: QuadraticForm, x: np.ndarray | MatrixOverFq) -> bool:
    a = x.a if isinstance(x, MatrixOverFq) else np.asarray(x, dtype=np.uint8)
    if a.shape != (Q.dim, Q.dim):
        raise ValueError("dimension mismatch")
    F = Q.F
    ar = Arith.get(F, Q.dim)
    for i in range(Q.dim):
        col = [int(a[r, i]) for r in range(Q.dim)]
        e = [0] * Q.dim
        e[i] = 1
        if quad_eval(Q, col) != quad_eval(Q, e):
            return False
    lhs = ar.mul(ar.mul(a.T.copy(), Q.gram), a)
    return bool(np.array_equal(lhs, Q.gram))


def isometry_mask(Q: QuadraticForm, X: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_isometry` over a batch."""
    F = Q.F
    d = Q.dim
    ar = Arith.get(F, d)
    ok = np.ones(X.shape[0], dtype=bool)
    for i in range(d):
        e = [0] * d
        e[i] = 1
        ok &= Q.eval_batch(X[:, :, i].astype(np.int64)) == quad_eval(Q, e)
    XT = np.ascontiguousarray(X.transpose(0, 2, 1))
    lhs = ar.right(ar.right(XT, Q.gram), np.eye(d, dtype=np.uint8))
    lhs = ar.pairwise(lhs, X)
    ok &= (lhs.reshape(X.shape[0], -1) == Q.gram.reshape(-1)).all(axis=1)
    return ok


def group_order_formula(kind: str, m: int, q: int) -> int:
    """Orders of SO/GO in odd dimension 2m+1 and of SO+-/GO+- in dimension 2m.

    ``kind`` is one of ``"SO"``, ``"GO"`` (odd dimension), ``"SO+"``,
    ``"SO-"``, ``"GO+"``, ``"GO-"`` (even dimension).
    """
    if m < 0:
        raise ValueError("rank must be non-negative")
    if kind in ("SO", "GO"):
        order = q ** (m * m)
        for i in range(1, m + 1):
            order *= q ** (2 * i) - 1
        if kind == "GO":
            order *= math.gcd(2, q - 1)
        return order
    if kind in ("SO+", "SO-", "GO+", "GO-"):
        if m == 0:
            return 1
        sign = 1 if kind.endswith("+") else -1
        base = q ** (m * (m - 1)) * (q**m - sign)
        for i in range(1, m):
            base *= q ** (2 * i) - 1
        if kind.startswith("GO"):
            return 2 * base
        e = math.gcd(2, q**m - sign)
        return 2 * base // e
    raise ValueError(f"unknown group kind {kind}")


# ---------------------------------------------------------------------------
# groups


@dataclass
class ConjClass:
    """A conjugacy class: representative element id, size, centraliser order."""

    index: int
    rep: int
    size: int
    centralizer_order: int
    order: int
    power_map: dict[int, int] = field(default_factory=dict)
    key: bytes = b""


class FiniteMatrixGroup:
    """A completely enumerated group of n x n matrices over GF(q)."""

    def __init__(
        self,
        F: FieldSpec,
        n: int,
        keys: np.ndarray,
        generators: Sequence[np.ndarray] | None = None,
        name: str = "",
    ):
        self.F = F
        self.n = n
        self.ar = Arith.get(F, n)
        self.keys = keys  # sorted
        self.elems = self.ar.decode(keys)
        self._generators = None if generators is None else [np.asarray(g, dtype=np.uint8) for g in generators]
        self.name = name
        self._classes: list[ConjClass] | None = None
        self._class_of: np.ndarray | None = None
        self._members: list[np.ndarray] | None = None
        self._power_cache: dict[int, list[int]] = {}

    # basics -----------------------------------------------------------
    @property
    def order(self) -> int:
        return int(self.keys.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<{self.name or 'group'} n={self.n} q={self.F.q} order={self.order}>"

    @property
    def generators(self) -> list[np.ndarray]:
        if self._generators is None:
            self._generators = _extract_generators(self)
        return self._generators

    @cached_property
    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.F.p},{self.F.k},{self.F.modulus},{self.n};".encode())
        h.update(np.ascontiguousarray(self.keys).tobytes())
        return h.hexdigest()[:32]

    def index_of(self, X: np.ndarray) -> np.ndarray:
        """Element ids of a batch (-1 for non-members)."""
        return _lookup(self.keys, self.ar.keys(np.asarray(X, dtype=np.uint8)))

    def index_of_keys(self, keys: np.ndarray) -> np.ndarray:
        return _lookup(self.keys, keys)

    def contains(self, x: np.ndarray | MatrixOverFq) -> bool:
        a = x.a if isinstance(x, MatrixOverFq) else np.asarray(x, dtype=np.uint8)
        return bool(self.index_of(a[None])[0] >= 0)

    def contains_all(self, X: np.ndarray) -> bool:
        return bool((self.index_of(X) >= 0).all())

    def issubset(self, other: FiniteMatrixGroup) -> bool:
        return bool((other.index_of_keys(self.keys) >= 0).all())

    def same_elements(self, other: FiniteMatrixGroup) -> bool:
        return self.order == other.order and bool(np.array_equal(self.keys, other.keys))

    # classes ----------------------------------------------------------
    @property
    def classes(self) -> list[ConjClass]:
        if self._classes is None:
            conjugacy_classes(self)
        assert self._classes is not None
        return self._classes

    @property
    def class_of(self) -> np.ndarray:
        if self._class_of is None:
            conjugacy_classes(self)
        assert self._class_of is not None
        return self._class_of

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    def class_reps(self) -> np.ndarray:
        return self.elems[[c.rep for c in self.classes]]

    def class_index(self, X: np.ndarray) -> np.ndarray:
        """Class ids of a batch of members (raises on non-members)."""
        idx = self.index_of(X)
        if (idx < 0).any():
            raise ValueError(f"element(s) outside {self!r}")
        return self.class_of[idx]

    def class_of_element(self, x: np.ndarray | MatrixOverFq) -> int:
        a = x.a if isinstance(x, MatrixOverFq) else np.asarray(x, dtype=np.uint8)
        return int(self.class_index(a[None])[0])

    def members(self, c: int) -> np.ndarray:
        if self._members is None:
            order = np.argsort(self.class_of, kind="stable")
            bounds = np.cumsum([0] + self.class_sizes())
            self._members = [order[bounds[i] : bounds[i + 1]] for i in range(self.num_classes)]
        return self._members[c]

    @cached_property
    def exponent(self) -> int:
        e = 1
        for c in self.classes:
            e = e * c.order // math.gcd(e, c.order)
        return e

    def inverse_class(self, c: int) -> int:
        cl = self.classes[c]
        return self.power_classes(c)[cl.order - 1] if cl.order > 1 else c

    def power_classes(self, c: int) -> list[int]:
        """Class ids of rep^j for j = 0 .. order-1."""
        if c not in self._power_cache:
            cl = self.classes[c]
            g = self.elems[cl.rep]
            pows = np.empty((cl.order, self.n, self.n), dtype=np.uint8)
            x = self.ar.identity()
            for j in range(cl.order):
                pows[j] = x
                x = self.ar.mul(x, g)
            self._power_cache[c] = [int(v) for v in self.class_index(pows)]
        return self._power_cache[c]

    def centralizer_orders(self) -> list[int]:
        return [c.centralizer_order for c in self.classes]


def _extract_generators(G: FiniteMatrixGroup, seed: int = 0) -> list[np.ndarray]:
    """A small generating set, found greedily in a fixed pseudo-random order."""
    if G.order == 1:
        return []
    rng = np.random.default_rng(seed)
    perm = rng.permutation(G.order)
    gens: list[np.ndarray] = []
    cur = np.array([G.ar.key(G.ar.identity())], dtype=G.keys.dtype)
    for i in perm:
        if _lookup(cur, G.keys[i : i + 1])[0] >= 0:
            continue
        gens.append(G.elems[i].copy())
        cur = _closure_keys(G.ar, gens, bound=G.order)
        if cur.shape[0] == G.order:
            break
    return gens


def _closure_keys(ar: Arith, gens: Sequence[np.ndarray], bound: int) -> np.ndarray:
    ident = ar.identity()[None]
    known = ar.keys(ident)
    frontier = ident
    gens = [np.asarray(g, dtype=np.uint8) for g in gens]
    while frontier.shape[0]:
        new_keys = []
        new_elems = []
        for g in gens:
            Y = ar.left(g, frontier)
            ky = ar.keys(Y)
            mask = _lookup(known, ky) < 0
            if mask.any():
                new_keys.append(ky[mask])
                new_elems.append(Y[mask])
        if not new_keys:
            break
        ky = np.concatenate(new_keys)
        Y = np.concatenate(new_elems)
        ky, first = np.unique(ky, return_index=True)
        frontier = Y[first]
        known = np.union1d(known, ky)
        if known.shape[0] > bound:
            raise BoundExceeded(f"group exceeds the enumeration bound {bound}")
    return known


def closure(
    F: FieldSpec,
    n: int,
    generators: Iterable[np.ndarray | MatrixOverFq],
    bound: int = DEFAULT_BOUND,
    name: str = "",
) -> FiniteMatrixGroup:
    """Enumerate the group generated by ``generators`` breadth first."""
    ar = Arith.get(F, n)
    gens = []
    for g in generators:
        a = g.a if isinstance(g, MatrixOverFq) else np.asarray(g, dtype=np.uint8)
        if a.shape != (n, n):
            raise ValueError("generator of the wrong size")
        if mat_det(F, a) == 0:
            raise ValueError("singular generator")
        if not np.array_equal(a, ar.identity()):
            gens.append(a)
    # drop duplicate generators, keep order
    seen: set[bytes] = set()
    uniq = []
    for g in gens:
        kb = ar.key_bytes(g)
        if kb not in seen:
            seen.add(kb)
            uniq.append(g)
    keys = _closure_keys(ar, uniq, bound)
    return FiniteMatrixGroup(F, n, keys, uniq, name=name)


def closure_cached(
    F: FieldSpec,
    n: int,
    generators: Sequence[np.ndarray],
    recipe: str,
    bound: int = DEFAULT_BOUND,
    name: str = "",
) -> FiniteMatrixGroup:
    """:func:`closure`, with the element keys stored on disk for large groups."""
    ar = Arith.get(F, n)
    gens = [np.asarray(g, dtype=np.uint8) for g in generators]
    digest = hashlib.sha256(b"".join(ar.key_bytes(g) for g in gens)).hexdigest()[:16]
    key = recipe_key("group", recipe, F.p, F.k, F.modulus, n, digest)
    data = load_arrays("group", key)
    if data is not None:
        return FiniteMatrixGroup(F, n, data["keys"], [g for g in gens if not np.array_equal(g, ar.identity())], name=name)
    G = closure(F, n, gens, bound=bound, name=name)
    if G.order >= _CACHE_MIN_ORDER and ar.use_int_keys:
        save_arrays("group", key, keys=G.keys)
    return G


def group_from_keys(
    F: FieldSpec, n: int, keys: np.ndarray, name: str = "", check: bool = True
) -> FiniteMatrixGroup:
    """Group on an explicitly given element set, verified closed if ``check``."""
    keys = np.unique(keys)
    G = FiniteMatrixGroup(F, n, keys, None, name=name)
    if check:
        ar = G.ar
        ident_key = ar.keys(ar.identity()[None])
        if _lookup(keys, ident_key)[0] < 0:
            raise NotClosedError(f"{name or 'set'} does not contain the identity")
        gens = _extract_generators_checked(G)
        G._generators = gens
    return G


def _extract_generators_checked(G: FiniteMatrixGroup) -> list[np.ndarray]:
    if G.order == 1:
        return []
    rng = np.random.default_rng(0)
    perm = rng.permutation(G.order)
    gens: list[np.ndarray] = []
    cur = G.ar.keys(G.ar.identity()[None])
    for i in perm:
        if _lookup(cur, G.keys[i : i + 1])[0] >= 0:
            continue
        gens.append(G.elems[i].copy())
        try:
            cur = _closure_keys(G.ar, gens, bound=G.order)
        except BoundExceeded:
            raise NotClosedError(f"{G.name or 'set'} is not closed under products") from None
        if (_lookup(G.keys, cur) < 0).any():
            raise NotClosedError(f"{G.name or 'set'} is not closed under products")
        if cur.shape[0] == G.order:
            break
    return gens


def subgroup(
    G: FiniteMatrixGroup,
    predicate: Callable[[np.ndarray], np.ndarray] | None = None,
    generators: Sequence[np.ndarray] | None = None,
    name: str = "",
) -> FiniteMatrixGroup:
    """Subgroup cut out by a vectorised predicate, or generated inside G."""
    if (predicate is None) == (generators is None):
        raise ValueError("give exactly one of predicate / generators")
    if predicate is not None:
        mask = np.asarray(predicate(G.elems), dtype=bool)
        return group_from_keys(G.F, G.n, G.keys[mask], name=name)
    for g in generators:  # type: ignore[union-attr]
        if not G.contains(g):
            raise ValueError("generator outside the parent group")
    return closure(G.F, G.n, generators, bound=G.order, name=name)  # type: ignore[arg-type]


def conjugacy_classes(G: FiniteMatrixGroup) -> list[ConjClass]:
    """Orbits of the generators' conjugation action, canonically ordered."""
    if G._classes is not None:
        return G._classes
    key = None
    if G.order >= _CACHE_MIN_ORDER:
        key = recipe_key("classes", G.content_hash)
        data = load_arrays("classes", key)
        if data is not None and data["labels"].shape[0] == G.order:
            return _finalize_classes(G, data["labels"].astype(np.int64))
    labels = _conjugation_orbits(G)
    classes = _finalize_classes(G, labels)
    if key is not None:
        save_arrays("classes", key, labels=G.class_of)
    return classes


def _conjugation_orbits(G: FiniteMatrixGroup) -> np.ndarray:
    N = G.order
    ar = G.ar
    rows = [np.arange(N)]
    cols = [np.arange(N)]
    for g in G.generators:
        ginv = ar.inv(g)
        img = np.empty(N, dtype=np.int64)
        for s in range(0, N, _CHUNK):
            Y = ar.conj(g, G.elems[s : s + _CHUNK], ginv)
            img[s : s + Y.shape[0]] = G.index_of(Y)
        if (img < 0).any():  # pragma: no cover
            raise AssertionError("conjugation left the group")
        rows.append(np.arange(N))
        cols.append(img)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.shape[0], dtype=np.int8), (r, c)), shape=(N, N)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def _finalize_classes(G: FiniteMatrixGroup, labels: np.ndarray) -> list[ConjClass]:
    N = G.order
    ar = G.ar
    ncomp = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=ncomp)
    # elements are sorted by key, so the first occurrence is the smallest key
    first = np.full(ncomp, N, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(N))
    orders = [ar.order(G.elems[first[c]]) for c in range(ncomp)]
    ordering = sorted(range(ncomp), key=lambda c: (orders[c], int(sizes[c]), int(first[c])))
    relabel = np.empty(ncomp, dtype=np.int64)
    for new, old in enumerate(ordering):
        relabel[old] = new
    G._class_of = relabel[labels].astype(np.int32)
    classes = []
    for new, old in enumerate(ordering):
        rep = int(first[old])
        size = int(sizes[old])
        classes.append(
            ConjClass(
                index=new,
                rep=rep,
                size=size,
                centralizer_order=N // size,
                order=orders[old],
                key=ar.key_bytes(G.elems[rep]),
            )
        )
    G._classes = classes
    G._members = None
    # power maps for primes dividing the exponent
    expo = 1
    for c in classes:
        expo = expo * c.order // math.gcd(expo, c.order)
    primes = [p for p in range(2, expo + 1) if expo % p == 0 and all(p % d for d in range(2, p))]
    for c in classes:
        pcs = G.power_classes(c.index)
        c.power_map = {p: pcs[p % c.order] for p in primes}
    return classes


def class_fusion(H: FiniteMatrixGroup, G: FiniteMatrixGroup) -> list[int]:
    """For each class of H, the class of G containing its representative."""
    if (H.F, H.n) != (G.F, G.n):
        raise ValueError("groups over different ambient spaces")
    idx = G.index_of(H.class_reps())
    if (idx < 0).any():
        raise ValueError(f"{H!r} is not contained in {G!r}")
    return [int(x) for x in G.class_of[idx]]


# ---------------------------------------------------------------------------
# set-level helpers


def product_keys(ar: Arith, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Sorted unique keys of {x y : x in X, y in Y}."""
    if X.shape[0] > Y.shape[0]:
        parts = [ar.keys(ar.right(X, y)) for y in Y]
    else:
        parts = [ar.keys(ar.left(x, Y)) for x in X]
    return np.unique(np.concatenate(parts)) if parts else np.array([], dtype=ar.key_dtype)


def conjugate_keys(ar: Arith, x: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Sorted keys of x X x^-1."""
    return np.unique(ar.keys(ar.conj(x, X)))
