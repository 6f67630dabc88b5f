"""Arithmetic in small finite fields GF(p^k).

Elements are integer codes in ``[0, q)``: the code of the residue class of
``c_0 + c_1 X + ... + c_{k-1} X^{k-1}`` is ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.
All arithmetic goes through precomputed ``q x q`` tables, which makes the
field objects cheap to share and trivially vectorisable with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .exact import Cyclotomic

__all__ = [
    "FieldSpec",
    "FieldElement",
    "AdditiveCharacter",
    "field_make",
    "find_nu",
    "additive_char",
    "is_prime",
    "DEFAULT_Q_BOUND",
]

DEFAULT_Q_BOUND = 16

# Conway polynomials, coefficients from the constant term upwards.
_CANONICAL_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_has_root(coeffs: tuple[int, ...], p: int) -> bool:
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def _poly_mod(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of num by the monic polynomial den over GF(p)."""
    num = list(num)
    d = len(den) - 1
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c:
            for j in range(d + 1):
                num[i - d + j] = (num[i - d + j] - c * den[j]) % p
    return num[:d]


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(coeffs) - 1
    if deg <= 1:
        return deg == 1
    if _poly_has_root(coeffs, p):
        return False
    for d in range(2, deg // 2 + 1):
        for code in range(p**d):
            den = tuple(_code_poly(code, p, d)) + (1,)
            if not any(_poly_mod(list(coeffs), den, p)):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field GF(p^k) with fixed modulus and full operation tables."""

    p: int
    k: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    trace: np.ndarray = field(repr=False)
    # k x k matrices over GF(p) of multiplication by each element
    mult_mats: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    # scalar helpers on codes
    def e(self, code: int) -> FieldElement:
        return FieldElement(self, int(code))

    def from_int(self, n: int) -> int:
        """Code of the image of the integer ``n`` in the prime field."""
        return n % self.p

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        return int(self.mul[a, self.inv[b]])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = int(self.inv[a]), -e
        r = 1
        while e:
            if e & 1:
                r = int(self.mul[r, a])
            a = int(self.mul[a, a])
            e >>= 1
        return r

    def units(self) -> list[int]:
        return list(range(1, self.q))

    @property
    def squares(self) -> frozenset[int]:
        return frozenset(int(self.mul[x, x]) for x in range(1, self.q))

    def is_square(self, a: int) -> bool:
        return a == 0 or a in self.squares

    def smallest_nonsquare(self) -> int | None:
        sq = self.squares
        for x in range(1, self.q):
            if x not in sq:
                return x
        return None

    def primitive_element(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = int(self.mul[x, g])
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def prime_basis(self) -> list[int]:
        """Codes of 1, X, ..., X^{k-1}: an additive basis over GF(p)."""
        return [self.p**i for i in range(self.k)]

    def sqrt(self, a: int) -> int | None:
        for x in range(self.q):
            if self.mul[x, x] == a:
                return x
        return None


def _poly_code(coeffs: list[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


def _code_poly(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1, bound: int = DEFAULT_Q_BOUND) -> FieldSpec:
    """Build GF(p^k) with the canonical modulus and all operation tables."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= k <= 4:
        raise ValueError(f"extension degree {k} out of range 1..4")
    q = p**k
    if q > bound:
        raise ValueError(f"q = {q} exceeds the configured bound {bound}")
    if k == 1:
        modulus: tuple[int, ...] = (0, 1)
    else:
        if (p, k) not in _CANONICAL_MODULI:
            raise ValueError(f"no canonical modulus stored for GF({p}^{k})")
        modulus = _CANONICAL_MODULI[(p, k)]
        if not _is_irreducible(modulus, p):  # pragma: no cover
            raise AssertionError(f"stored modulus for GF({q}) is reducible")

    polys = [_code_poly(c, p, k) for c in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = _poly_code([(x + y) % p for x, y in zip(polys[a], polys[b])], p)
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(polys[a]):
                for j, y in enumerate(polys[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
            # reduce modulo the monic modulus
            for d in range(len(prod) - 1, k - 1, -1):
                c = prod[d]
                if c:
                    for i in range(k + 1):
                        prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
            mul[a, b] = _poly_code(prod[:k], p)
    neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])

    # trace: x + x^p + ... + x^{p^{k-1}} lies in the prime field
    trace = np.zeros(q, dtype=np.int64)
    for a in range(q):
        acc, y = 0, a
        for _ in range(k):
            acc = int(add[acc, y])
            z = 1
            for _ in range(p):
                z = int(mul[z, y])
            y = z
        if acc >= p:  # pragma: no cover
            raise AssertionError("trace left the prime field")
        trace[a] = acc

    mats = np.zeros((q, k, k), dtype=np.int64)
    for a in range(q):
        for j in range(k):
            col = _code_poly(int(mul[a, p**j]), p, k)
            mats[a, :, j] = col
    return FieldSpec(p, k, modulus, add, mul, neg, inv, trace, mats)


class FieldElement:
    """A value in a :class:`FieldSpec`, with the usual operators."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        if not 0 <= code < spec.q:
            raise ValueError(f"code {code} outside GF({spec.q})")
        self.spec = spec
        self.code = int(code)

    def _coerce(self, other: object) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.spec.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> FieldElement:
        b = self._coerce(other)
        return FieldElement(self.spec, int(self.spec.add[self.code, b]))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.spec, int(self.spec.neg[self.code]))

    def __sub__(self, other: object) -> FieldElement:
        return self + (-FieldElement(self.spec, self._coerce(other)))

    def __rsub__(self, other: object) -> FieldElement:
        return FieldElement(self.spec, self._coerce(other)) - self

    def __mul__(self, other: object) -> FieldElement:
        b = self._coerce(other)
        return FieldElement(self.spec, int(self.spec.mul[self.code, b]))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.code == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.spec, int(self.spec.inv[self.code]))

    def __truediv__(self, other: object) -> FieldElement:
        return self * FieldElement(self.spec, self._coerce(other)).inverse()

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.spec, self.spec.power(self.code, e))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.spec.p and self.code < self.spec.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.q, self.code))

    def __int__(self) -> int:
        return self.code

    def __bool__(self) -> bool:
        return self.code != 0

    def trace(self) -> int:
        return int(self.spec.trace[self.code])

    def __repr__(self) -> str:
        return f"GF({self.spec.q})[{self.code}]"


def find_nu(spec: FieldSpec) -> FieldElement:
    """Smallest code ``nu`` with ``X^2 + X + nu`` irreducible over the field."""
    for nu in range(spec.q):
        has_root = any(
            spec.add[spec.add[spec.mul[x, x], x], nu] == 0 for x in range(spec.q)
        )
        if not has_root:
            return FieldElement(spec, nu)
    raise AssertionError("no irreducible X^2+X+nu")  # pragma: no cover


@dataclass(frozen=True)
class AdditiveCharacter:
    """``x -> zeta_p ** Tr(x)``, a fixed non-trivial character of (GF(q), +)."""

    spec: FieldSpec

    def exponent(self, x: int | FieldElement) -> int:
        return int(self.spec.trace[int(x)])

    def __call__(self, x: int | FieldElement) -> Cyclotomic:
        from .exact import Cyclotomic

        return Cyclotomic.root_of_unity(self.spec.p, self.exponent(x))


def additive_char(spec: FieldSpec) -> AdditiveCharacter:
    return AdditiveCharacter(spec)
