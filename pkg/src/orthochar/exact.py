"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`Cyclotomic` is stored densely in the power basis
``1, z, ..., z^(phi(N)-1)`` of ``Q(z)``, ``z = exp(2 pi i / N)``, after
reduction modulo the N-th cyclotomic polynomial.  Coefficients are kept as
integer numerators over one common positive denominator.

Mixed-conductor operations lift both operands to the lcm of the
conductors.  Values that turn out rational are stored with conductor 1;
any other change of conductor only happens through :meth:`Cyclotomic.reduce`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

__all__ = [
    "Cyclotomic",
    "Rational",
    "cyc_make",
    "cyc_conj",
    "cyc_lift",
    "cyclotomic_polynomial",
    "euler_phi",
    "as_cyclotomic",
]

Rational = Fraction
Number = Union[int, Fraction, "Cyclotomic"]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists from the constant term up; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for d in range(len(out) - 1, -1, -1):
        c = num[d + len(den) - 1]
        out[d] = c
        if c:
            for i, b in enumerate(den):
                num[d + i] -= c * b
    if any(num[: len(den) - 1]):  # pragma: no cover
        raise AssertionError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each exponent e in [0, n): z^e in the power basis, as (index, coeff) pairs."""
    phi = euler_phi(n)
    cp = cyclotomic_polynomial(n)
    rows: list[tuple[tuple[int, int], ...]] = []
    vec = [0] * phi
    vec[0] = 1
    for e in range(n):
        if e > 0:
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(phi):
                    vec[i] -= top * cp[i]
        rows.append(tuple((i, c) for i, c in enumerate(vec) if c))
    return tuple(rows)


def _normalise(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g != 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class Cyclotomic:
    """An element of Q(zeta_N) in canonical dense form."""

    __slots__ = ("N", "num", "den")

    def __init__(self, N: int, num: Iterable[int], den: int = 1, *, _canonical: bool = False):
        num = tuple(num)
        if not _canonical:
            if N < 1:
                raise ValueError("conductor must be positive")
            if len(num) != euler_phi(N):
                raise ValueError("coefficient vector has the wrong length")
            num, den = _normalise(list(num), den)
        if N > 1 and not any(num[1:]):
            N, num = 1, (num[0],)
        self.N = N
        self.num = num
        self.den = den

    # construction -------------------------------------------------------
    @classmethod
    def rational(cls, r: int | Fraction) -> Cyclotomic:
        r = Fraction(r)
        return cls(1, (r.numerator,), r.denominator, _canonical=True)

    @classmethod
    def root_of_unity(cls, N: int, e: int = 1) -> Cyclotomic:
        return cyc_make(N, {e % N: 1})

    @classmethod
    def zero(cls) -> Cyclotomic:
        return cls(1, (0,), 1, _canonical=True)

    @classmethod
    def one(cls) -> Cyclotomic:
        return cls(1, (1,), 1, _canonical=True)

    # inspection ---------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_rational(self) -> bool:
        return self.N == 1

    def is_zero(self) -> bool:
        return self.N == 1 and self.num[0] == 0

    def to_fraction(self) -> Fraction:
        if self.N != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def is_integer(self) -> bool:
        return self.N == 1 and self.den == 1

    def __int__(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.num[0]

    # conductor changes --------------------------------------------------
    def lift(self, M: int) -> Cyclotomic:
        if M % self.N:
            raise ValueError(f"conductor {self.N} does not divide {M}")
        if M == self.N or self.N == 1:
            if self.N == 1:
                return self
            return self
        step = M // self.N
        red = _reduction_table(M)
        out = [0] * euler_phi(M)
        for i, c in enumerate(self.num):
            if c:
                for j, b in red[i * step]:
                    out[j] += b * c
        return Cyclotomic(M, out, self.den, _canonical=True)

    def _lifted_num(self, M: int) -> tuple[int, ...]:
        if self.N == M:
            return self.num
        if self.N == 1:
            return (self.num[0],) + (0,) * (euler_phi(M) - 1)
        return self.lift(M).num

    def reduce(self) -> Cyclotomic:
        """The same number at the smallest conductor containing it."""
        if self.N == 1:
            return self
        N = self.N
        for d in sorted(x for x in range(2, N) if N % x == 0):
            sol = _solve_in_subfield(self, d)
            if sol is not None:
                return sol
        return self

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: Number) -> Cyclotomic:
        o = as_cyclotomic(other)
        if o is NotImplemented:
            return NotImplemented
        if self.N == 1 and o.N == 1:
            a, b = self.num[0], o.num[0]
            den = self.den * o.den // gcd(self.den, o.den)
            return Cyclotomic(1, (a * (den // self.den) + b * (den // o.den),), den)
        M = _lcm(self.N, o.N)
        a, b = self._lifted_num(M), o._lifted_num(M)
        den = self.den * o.den // gcd(self.den, o.den)
        fa, fb = den // self.den, den // o.den
        return Cyclotomic(M, [x * fa + y * fb for x, y in zip(a, b)], den)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.N, tuple(-x for x in self.num), self.den, _canonical=True)

    def __sub__(self, other: Number) -> Cyclotomic:
        o = as_cyclotomic(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Number) -> Cyclotomic:
        o = as_cyclotomic(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Number) -> Cyclotomic:
        o = as_cyclotomic(other)
        if o is NotImplemented:
            return NotImplemented
        if o.N == 1:
            return self._scale(o.num[0], o.den)
        if self.N == 1:
            return o._scale(self.num[0], self.den)
        M = _lcm(self.N, o.N)
        a, b = self._lifted_num(M), o._lifted_num(M)
        acc = [0] * M
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in nz_b:
                    acc[(i + j) % M] += x * y
        red = _reduction_table(M)
        out = [0] * euler_phi(M)
        for e, v in enumerate(acc):
            if v:
                for j, c in red[e]:
                    out[j] += c * v
        return Cyclotomic(M, out, self.den * o.den)

    __rmul__ = __mul__

    def _scale(self, n: int, d: int) -> Cyclotomic:
        if n == 0:
            return Cyclotomic.zero()
        return Cyclotomic(self.N, [x * n for x in self.num], self.den * d)

    def __truediv__(self, other: Number) -> Cyclotomic:
        o = as_cyclotomic(other)
        if o is NotImplemented:
            return NotImplemented
        if o.N == 1:
            if o.num[0] == 0:
                raise ZeroDivisionError("division by zero")
            return self._scale(o.den, o.num[0])
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> Cyclotomic:
        return as_cyclotomic(other) * self.inverse()

    def __pow__(self, e: int) -> Cyclotomic:
        if e < 0:
            return self.inverse() ** (-e)
        r, b = Cyclotomic.one(), self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        if self.N == 1:
            return Cyclotomic.rational(1 / self.to_fraction())
        # product of the other Galois conjugates over the (rational) norm
        prod = Cyclotomic.one()
        for a in range(2, self.N):
            if gcd(a, self.N) == 1:
                prod = prod * self.galois(a)
        norm = (self * prod).to_fraction()
        return prod / norm

    def galois(self, a: int) -> Cyclotomic:
        """Image under the automorphism z -> z^a (a coprime to N)."""
        if self.N == 1:
            return self
        if gcd(a, self.N) != 1:
            raise ValueError("Galois exponent must be a unit")
        N = self.N
        red = _reduction_table(N)
        out = [0] * len(self.num)
        for i, c in enumerate(self.num):
            if c:
                for j, b in red[(i * a) % N]:
                    out[j] += b * c
        return Cyclotomic(N, out, self.den, _canonical=True)

    def conj(self) -> Cyclotomic:
        return self.galois(-1 % self.N) if self.N > 2 else self

    # comparison ----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        o = as_cyclotomic(other)  # type: ignore[arg-type]
        if o is NotImplemented:
            return NotImplemented
        if self.den != o.den:
            return False
        if self.N == o.N:
            return self.num == o.num
        M = _lcm(self.N, o.N)
        return self._lifted_num(M) == o._lifted_num(M)

    def __hash__(self) -> int:
        r = self.reduce()
        return hash((r.N, r.num, r.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        terms = {
            str(i): str(Fraction(c, self.den)) for i, c in enumerate(self.num) if c
        }
        return {"N": self.N, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> Cyclotomic:
        return cyc_make(int(data["N"]), {int(k): Fraction(v) for k, v in data["terms"].items()})

    def __repr__(self) -> str:
        return f"Cyclotomic({self})"

    def __str__(self) -> str:
        if self.N == 1:
            return str(Fraction(self.num[0], self.den))
        parts = []
        for i, c in enumerate(self.num):
            if not c:
                continue
            f = Fraction(c, self.den)
            mon = "" if i == 0 else (f"z{self.N}" if i == 1 else f"z{self.N}^{i}")
            if not mon:
                parts.append(str(f))
            elif f == 1:
                parts.append(mon)
            elif f == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{f}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def as_cyclotomic(x: Number) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return Cyclotomic.rational(int(x))
    except ImportError:  # pragma: no cover
        pass
    return NotImplemented  # type: ignore[return-value]


def cyc_make(N: int, terms: Mapping[int, int | Fraction | str]) -> Cyclotomic:
    """Canonical form of sum(c_e * z_N^e) for the given exponent map."""
    if N < 1:
        raise ValueError("conductor must be positive")
    fr = {e % N: Fraction(c) for e, c in terms.items()}
    den = 1
    for c in fr.values():
        den = _lcm(den, c.denominator)
    red = _reduction_table(N)
    out = [0] * euler_phi(N)
    for e, c in fr.items():
        v = c.numerator * (den // c.denominator)
        if v:
            for j, b in red[e]:
                out[j] += b * v
    return Cyclotomic(N, out, den)


def cyc_conj(x: Cyclotomic) -> Cyclotomic:
    return x.conj()


def cyc_lift(x: Cyclotomic, M: int) -> Cyclotomic:
    return x.lift(M)


def _solve_in_subfield(x: Cyclotomic, d: int) -> Cyclotomic | None:
    """Write x over the power basis of Q(zeta_d), or return None."""
    N = x.N
    step = N // d
    phi_d, phi_N = euler_phi(d), euler_phi(N)
    red = _reduction_table(N)
    cols = []
    for i in range(phi_d):
        v = [Fraction(0)] * phi_N
        for j, b in red[(i * step) % N]:
            v[j] += b
        cols.append(v)
    # augmented system rows: phi_N equations, phi_d unknowns
    rows = [[cols[i][r] for i in range(phi_d)] + [Fraction(x.num[r], x.den)] for r in range(phi_N)]
    piv_cols = []
    rank = 0
    for c in range(phi_d):
        pr = next((r for r in range(rank, phi_N) if rows[r][c] != 0), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(phi_N):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        piv_cols.append(c)
        rank += 1
    if any(rows[r][-1] != 0 for r in range(rank, phi_N)):
        return None
    sol = [Fraction(0)] * phi_d
    for r, c in enumerate(piv_cols):
        sol[c] = rows[r][-1]
    return cyc_make(d, dict(enumerate(sol)))
