"""Class functions, the usual functors on them, and Dixon-Schneider tables.

A :class:`ClassFunction` stores one :class:`Cyclotomic` per conjugacy
class of an enumerated :class:`FiniteMatrixGroup`, in the group's class
order.  Functors between groups of different matrix size go through
:func:`pullback`, which evaluates a class function of K at the images of
the class representatives of H under an explicit vectorised map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .cache import load_json, recipe_key, save_json
from .exact import Cyclotomic, as_cyclotomic, cyc_make
from .ff import is_prime
from .matgrp import FiniteMatrixGroup, class_fusion

__all__ = [
    "ClassFunction",
    "CharacterTable",
    "inner_product",
    "induce",
    "restrict",
    "inflate",
    "pullback",
    "tensor",
    "conjugate",
    "character_table",
    "is_irreducible",
    "decompose",
    "trivial",
    "regular",
    "CharacterTableError",
]

_ZERO = Cyclotomic.zero()
_ONE = Cyclotomic.one()


class CharacterTableError(RuntimeError):
    """Internal verification of a computed table failed."""


class ClassFunction:
    """A vector of cyclotomic values indexed by the classes of a group."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteMatrixGroup, values: Sequence[object]):
        if len(values) != group.num_classes:
            raise ValueError(f"expected {group.num_classes} values, got {len(values)}")
        self.group = group
        self.values = tuple(as_cyclotomic(v) for v in values)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: ClassFunction) -> None:
        if other.group is not self.group:
            raise ValueError("class functions on different groups")

    def __add__(self, other: ClassFunction) -> ClassFunction:
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    __radd__ = __add__

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> ClassFunction:
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other: object) -> ClassFunction:
        if isinstance(other, ClassFunction):
            return tensor(self, other)
        c = as_cyclotomic(other)
        return ClassFunction(self.group, [a * c for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and all(a == b for a, b in zip(self.values, other.values))

    def __hash__(self) -> int:  # pragma: no cover - class functions are not dict keys
        raise TypeError("ClassFunction is unhashable")

    def __getitem__(self, i: int) -> Cyclotomic:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"ClassFunction({self.group!r}, degree={self.values[0]})"

    # inspection ---------------------------------------------------------
    @property
    def degree(self) -> Cyclotomic:
        return self.values[0]

    def degree_int(self) -> int:
        d = self.values[0]
        if not d.is_integer():
            raise ValueError(f"degree {d} is not an integer")
        return int(d)

    def conj(self) -> ClassFunction:
        return ClassFunction(self.group, [v.conj() for v in self.values])

    def norm(self) -> Fraction:
        return inner_product(self, self)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def value_at(self, x: np.ndarray) -> Cyclotomic:
        return self.values[self.group.class_of_element(x)]

    def kernel_contains(self, H: FiniteMatrixGroup) -> bool:
        """True iff every element of H acts trivially (values equal the degree)."""
        cls = self.group.class_index(H.elems)
        d = self.values[0]
        return all(self.values[c] == d for c in np.unique(cls))

    def to_json(self) -> list[dict]:
        return [v.to_json() for v in self.values]


def trivial(G: FiniteMatrixGroup) -> ClassFunction:
    return ClassFunction(G, [_ONE] * G.num_classes)


def regular(G: FiniteMatrixGroup) -> ClassFunction:
    return ClassFunction(G, [Cyclotomic.rational(G.order)] + [_ZERO] * (G.num_classes - 1))


def _all_rational(values: Iterable[Cyclotomic]) -> bool:
    return all(v.N == 1 for v in values)


def inner_product(chi: ClassFunction, psi: ClassFunction) -> Fraction:
    """(1/|H|) sum |C| chi(C) conj(psi(C)); the result must be rational."""
    if chi.group is not psi.group:
        raise ValueError("inner product of class functions on different groups")
    G = chi.group
    sizes = G.class_sizes()
    if _all_rational(chi.values) and _all_rational(psi.values):
        total = Fraction(0)
        for s, a, b in zip(sizes, chi.values, psi.values):
            if a.num[0] and b.num[0]:
                total += s * a.to_fraction() * b.to_fraction()
        return total / G.order
    acc = _ZERO
    for s, a, b in zip(sizes, chi.values, psi.values):
        if a.is_zero() or b.is_zero():
            continue
        acc = acc + (a * b.conj()) * s
    if not acc.is_rational():
        raise ValueError("inner product is not rational; inputs are not class functions of characters")
    return acc.to_fraction() / G.order


def tensor(a: ClassFunction, b: ClassFunction) -> ClassFunction:
    a._check(b)
    return ClassFunction(a.group, [x * y for x, y in zip(a.values, b.values)])


def pullback(
    chi: ClassFunction,
    H: FiniteMatrixGroup,
    mapping: Callable[[np.ndarray], np.ndarray] | None = None,
) -> ClassFunction:
    """The class function h -> chi(mapping(h)) on H.

    ``mapping`` sends a batch of H-elements to a batch of elements of
    ``chi.group``; the identity map (restriction) is used when omitted.
    The result is well defined only if ``mapping`` is compatible with
    conjugacy; :func:`check_pullback` verifies that on demand.
    """
    reps = H.class_reps()
    imgs = reps if mapping is None else mapping(reps)
    cls = chi.group.class_index(imgs)
    return ClassFunction(H, [chi.values[int(c)] for c in cls])


def check_pullback(
    chi: ClassFunction, H: FiniteMatrixGroup, mapping: Callable[[np.ndarray], np.ndarray]
) -> bool:
    """True iff chi(mapping(h)) is constant on every class of H."""
    imgs = mapping(H.elems)
    vals = chi.group.class_index(imgs)
    per_class: dict[int, set] = {}
    for h_cls, g_cls in zip(H.class_of.tolist(), vals.tolist()):
        per_class.setdefault(h_cls, set()).add(g_cls)
    for gset in per_class.values():
        if len({chi.values[g] for g in gset}) > 1:
            return False
    return True


def restrict(chi: ClassFunction, H: FiniteMatrixGroup) -> ClassFunction:
    """chi restricted to a subgroup H (same matrix size)."""
    fusion = class_fusion(H, chi.group)
    return ClassFunction(H, [chi.values[c] for c in fusion])


def inflate(
    psi: ClassFunction, H: FiniteMatrixGroup, projection: Callable[[np.ndarray], np.ndarray]
) -> ClassFunction:
    """Inflation along a surjective homomorphism H -> psi.group given elementwise."""
    return pullback(psi, H, projection)


def conjugate(
    chi: ClassFunction, x: np.ndarray, target: FiniteMatrixGroup | None = None
) -> ClassFunction:
    """The conjugate character g -> chi(x^-1 g x) on x H x^-1 (``target``)."""
    H = chi.group
    target = H if target is None else target
    ar = H.ar
    x = np.asarray(x, dtype=np.uint8)
    xinv = ar.inv(x)

    def back(X: np.ndarray) -> np.ndarray:
        return ar.conj(xinv, X, x)

    if (H.index_of(back(target.elems[[c.rep for c in target.classes]])) < 0).any():
        raise ValueError("target is not contained in the conjugate of the group")
    return pullback(chi, target, back)


def induce(
    phi: ClassFunction, G: FiniteMatrixGroup, fusion: Sequence[int] | None = None
) -> ClassFunction:
    """Ind phi(C) = |C_G(g)| * sum over H-classes c in C of phi(c) / |C_H(c)|."""
    H = phi.group
    if fusion is None:
        fusion = class_fusion(H, G)
    if len(fusion) != H.num_classes:
        raise ValueError("fusion map does not match the subgroup")
    if G.order % H.order:
        raise ValueError("subgroup order does not divide the group order")
    acc: list[Cyclotomic] = [_ZERO] * G.num_classes
    rational = _all_rational(phi.values)
    if rational:
        facc = [Fraction(0)] * G.num_classes
        for c, v in enumerate(phi.values):
            if v.num[0]:
                facc[fusion[c]] += v.to_fraction() / H.classes[c].centralizer_order
        vals = [Cyclotomic.rational(f * G.classes[i].centralizer_order) for i, f in enumerate(facc)]
        return ClassFunction(G, vals)
    for c, v in enumerate(phi.values):
        if not v.is_zero():
            acc[fusion[c]] = acc[fusion[c]] + v / H.classes[c].centralizer_order
    vals = [a * G.classes[i].centralizer_order for i, a in enumerate(acc)]
    return ClassFunction(G, vals)


def is_irreducible(chi: ClassFunction) -> bool:
    d = chi.values[0]
    return d.is_rational() and d.to_fraction() > 0 and chi.norm() == 1


@dataclass
class CharacterTable:
    group: FiniteMatrixGroup
    irreducibles: list[ClassFunction]

    def __len__(self) -> int:
        return len(self.irreducibles)

    def __iter__(self):
        return iter(self.irreducibles)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.irreducibles[i]

    def degrees(self) -> list[int]:
        return [chi.degree_int() for chi in self.irreducibles]

    def trivial_index(self) -> int:
        for i, chi in enumerate(self.irreducibles):
            if all(v == _ONE for v in chi.values):
                return i
        raise CharacterTableError("no trivial character")  # pragma: no cover

    def to_json(self) -> dict:
        G = self.group
        return {
            "version": 1,
            "order": G.order,
            "classes": [
                {"order": c.order, "size": c.size, "centralizer_order": c.centralizer_order}
                for c in G.classes
            ],
            "irreducibles": [chi.to_json() for chi in self.irreducibles],
        }

    @classmethod
    def from_json(cls, G: FiniteMatrixGroup, data: dict) -> CharacterTable:
        if data.get("order") != G.order or len(data["classes"]) != G.num_classes:
            raise ValueError("serialized table does not match the group")
        irr = [ClassFunction(G, [Cyclotomic.from_json(v) for v in row]) for row in data["irreducibles"]]
        return cls(G, irr)


def decompose(chi: ClassFunction, table: CharacterTable) -> list[int]:
    """Multiplicities of the irreducibles in a (generalised) character."""
    out = []
    for psi in table.irreducibles:
        ip = inner_product(chi, psi)
        if ip.denominator != 1:
            raise ValueError(f"non-integral multiplicity {ip}")
        out.append(int(ip))
    return out


def verify_table(table: CharacterTable) -> None:
    """Row orthonormality, class count and the degree sum (raises on failure)."""
    G = table.group
    irr = table.irreducibles
    if len(irr) != G.num_classes:
        raise CharacterTableError("number of irreducibles differs from the number of classes")
    if sum(d * d for d in table.degrees()) != G.order:
        raise CharacterTableError("sum of squared degrees differs from the group order")
    for i, a in enumerate(irr):
        for j in range(i, len(irr)):
            ip = inner_product(a, irr[j])
            if ip != (1 if i == j else 0):
                raise CharacterTableError(f"rows {i},{j} have inner product {ip}")


# ---------------------------------------------------------------------------
# Dixon-Schneider


def _choose_prime(exponent: int, order: int) -> int:
    bound = 2 * math.isqrt(order)
    ell = exponent + 1
    while ell <= bound or not is_prime(ell):
        ell += exponent
    return ell


def _primitive_root(ell: int) -> int:
    phi = ell - 1
    factors = [p for p in range(2, phi + 1) if phi % p == 0 and is_prime(p)]
    for g in range(2, ell):
        if all(pow(g, phi // p, ell) != 1 for p in factors):
            return g
    raise AssertionError("no primitive root")  # pragma: no cover


def _rref_cols(B: np.ndarray, ell: int) -> tuple[np.ndarray, list[int]]:
    """Column-reduce a k x d basis matrix: B[pivots] becomes the identity."""
    M = (B.T % ell).astype(np.int64)  # rows = basis vectors
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, ell)) % ell
        others = np.nonzero(M[:, c])[0]
        for o in others:
            if o != r:
                M[o] = (M[o] - M[o, c] * M[r]) % ell
        pivots.append(c)
        r += 1
    return M[:r].T.copy(), pivots


def _nullspace(C: np.ndarray, ell: int) -> np.ndarray:
    """Basis (columns) of the right nullspace of a square matrix mod ell."""
    M = (C % ell).astype(np.int64)
    n = M.shape[1]
    pivcols: list[int] = []
    r = 0
    for c in range(n):
        if r == M.shape[0]:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, ell)) % ell
        for o in np.nonzero(M[:, c])[0]:
            if o != r:
                M[o] = (M[o] - M[o, c] * M[r]) % ell
        pivcols.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivcols]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivcols):
            basis[pc, j] = (-M[i, f]) % ell
    return basis


def _charpoly(C: np.ndarray, ell: int) -> list[int]:
    """Coefficients (highest first) of det(xI - C) mod ell, via Hessenberg form."""
    H = (C % ell).astype(np.int64)
    d = H.shape[0]
    for m in range(1, d - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        t = pow(int(H[m, m - 1]), -1, ell)
        for i in range(m + 1, d):
            u = (int(H[i, m - 1]) * t) % ell
            if u:
                H[i] = (H[i] - u * H[m]) % ell
                H[:, m] = (H[:, m] + u * H[:, i]) % ell
    # p_{k+1} = (x - h_kk) p_k - sum_i h_ik (h_{i+1,i} ... h_{k,k-1}) p_i, ascending coefficients
    polys: list[list[int]] = [[1]]
    for k in range(d):
        nxt = [0] + polys[k]
        for j, c in enumerate(polys[k]):
            nxt[j] = (nxt[j] - int(H[k, k]) * c) % ell
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = (prod * int(H[i + 1, i])) % ell
            f = (prod * int(H[i, k])) % ell
            if f:
                for j, c in enumerate(polys[i]):
                    nxt[j] = (nxt[j] - f * c) % ell
        polys.append(nxt)
    return polys[d][::-1]


def _roots(coeffs: list[int], ell: int) -> list[int]:
    xs = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % ell
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def class_matrix(G: FiniteMatrixGroup, j: int) -> np.ndarray:
    """A[k, i] = #{y in C_{j*} : class(y z_i) = k} for class reps z_i."""
    k = G.num_classes
    jstar = G.inverse_class(j)
    Y = G.elems[G.members(jstar)]
    A = np.zeros((k, k), dtype=np.int64)
    for i, c in enumerate(G.classes):
        prod = G.ar.right(Y, G.elems[c.rep])
        cls = G.class_index(prod)
        A[:, i] = np.bincount(cls, minlength=k)
    return A


def _dixon(G: FiniteMatrixGroup) -> list[ClassFunction]:
    k = G.num_classes
    order = G.order
    expo = G.exponent
    ell = _choose_prime(expo, order)
    sizes = [c.size for c in G.classes]
    inv_cls = [G.inverse_class(i) for i in range(k)]

    spaces: list[np.ndarray] = [np.eye(k, dtype=np.int64)]
    done: list[np.ndarray] = []
    if k == 1:
        done, spaces = spaces, []
    order_of_use = sorted(range(1, k), key=lambda j: (sizes[j], j))
    for j in order_of_use:
        if not spaces:
            break
        A = class_matrix(G, j) % ell
        nxt: list[np.ndarray] = []
        for B in spaces:
            B, piv = _rref_cols(B, ell)
            d = B.shape[1]
            C = ((A @ B) % ell)[piv, :]
            roots = _roots(_charpoly(C, ell), ell)
            pieces = []
            for lam in roots:
                N = _nullspace((C - lam * np.eye(d, dtype=np.int64)) % ell, ell)
                pieces.append((B @ N) % ell)
            if sum(p.shape[1] for p in pieces) != d:
                raise CharacterTableError("class matrix is not diagonalisable mod ell")
            for p in pieces:
                (done if p.shape[1] == 1 else nxt).append(p)
        spaces = nxt
    if spaces:
        raise CharacterTableError("class matrices did not separate the characters")
    if len(done) != k:
        raise CharacterTableError("wrong number of eigenvectors")

    # modular characters
    modular: list[list[int]] = []
    for v in done:
        w = v[:, 0] % ell
        w = (w * pow(int(w[0]), -1, ell)) % ell
        s = 0
        for i in range(k):
            s = (s + int(w[i]) * int(w[inv_cls[i]]) * pow(sizes[i], -1, ell)) % ell
        d2 = (order * pow(s, -1, ell)) % ell
        deg = None
        for d in range(1, math.isqrt(order) + 1):
            if order % d == 0 and (d * d - d2) % ell == 0:
                deg = d
                break
        if deg is None:
            raise CharacterTableError("no admissible degree")
        modular.append([(deg * int(w[i]) * pow(sizes[i], -1, ell)) % ell for i in range(k)])

    # lift to cyclotomic integers
    Z = pow(_primitive_root(ell), (ell - 1) // expo, ell)
    power_cls = [G.power_classes(i) for i in range(k)]
    irr = []
    for chi in modular:
        vals = []
        for i in range(k):
            o = G.classes[i].order
            zeta = pow(Z, expo // o, ell)
            pcs = power_cls[i]
            oinv = pow(o, -1, ell)
            terms = {}
            for s_ in range(o):
                acc = 0
                for t in range(o):
                    acc += chi[pcs[t]] * pow(zeta, (-s_ * t) % o, ell)
                ms = (acc * oinv) % ell
                if ms:
                    if ms > chi[0]:
                        raise CharacterTableError("eigenvalue multiplicity out of range")
                    terms[s_] = ms
            vals.append(cyc_make(o, terms))
        irr.append(ClassFunction(G, vals))
    return irr


def _sort_key(chi: ClassFunction) -> tuple:
    return (chi.degree_int(), [str(v) for v in chi.values])


def character_table(G: FiniteMatrixGroup, use_cache: bool = True) -> CharacterTable:
    """All irreducible characters of G, verified orthonormal before returning."""
    cached = getattr(G, "_char_table", None)
    if cached is not None:
        return cached
    key = recipe_key("chartab", G.content_hash)
    data = load_json("chartab", key) if use_cache else None
    table = None
    if data is not None:
        try:
            table = CharacterTable.from_json(G, data)
            verify_table(table)
        except (ValueError, KeyError, CharacterTableError):
            table = None
    if table is None:
        irr = _dixon(G)
        irr.sort(key=_sort_key)
        table = CharacterTable(G, irr)
        verify_table(table)
        if use_cache:
            save_json("chartab", key, table.to_json())
    G._char_table = table  # type: ignore[attr-defined]
    return table
