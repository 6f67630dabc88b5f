"""Unipotent character labels of type B, their degree and value tables.

A label ``[alpha, beta, d]`` is a bipartition together with an odd
defect d.  Partitions are stored as non-increasing tuples and printed in
exponent notation, so ``(1, 1)`` prints as ``1^2`` and ``(2, 1)`` as
``21``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .chartab import CharacterTable, ClassFunction, decompose, inner_product

__all__ = [
    "SymbolB",
    "UnipotentLabel",
    "QPoly",
    "DegreePolynomial",
    "symbol_bipartition",
    "parse_label",
    "unipotent_degree",
    "degree_table",
    "z_value_table",
    "component_degree_table",
    "hc_branch",
    "identify_unipotent",
    "IdentificationError",
    "PRINTED_SYMBOLS",
    "HC_IDENTITIES",
    "labels_of_rank",
]


class IdentificationError(RuntimeError):
    """A unipotent label matched no irreducible, or more than one."""


# ---------------------------------------------------------------------------
# partitions


def _partition_str(part: Sequence[int]) -> str:
    if not part:
        return "-"
    out = []
    i = 0
    while i < len(part):
        j = i
        while j < len(part) and part[j] == part[i]:
            j += 1
        out.append(str(part[i]) if j - i == 1 else f"{part[i]}^{j - i}")
        i = j
    return "".join(out)


def _parse_partition(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("-", ""):
        return ()
    parts: list[int] = []
    for tok in re.findall(r"\d\^\d+|\d", text.replace(" ", "")):
        if "^" in tok:
            base, exp = tok.split("^")
            parts.extend([int(base)] * int(exp))
        else:
            parts.append(int(tok))
    if any(p <= 0 for p in parts):
        raise ValueError(f"bad partition {text!r}")
    return tuple(sorted(parts, reverse=True))


# ---------------------------------------------------------------------------
# symbols and labels


@dataclass(frozen=True)
class SymbolB:
    """A symbol with strictly increasing rows ``top`` and ``bottom``."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __post_init__(self) -> None:
        for row in (self.top, self.bottom):
            if any(x < 0 for x in row) or any(a >= b for a, b in zip(row, row[1:])):
                raise ValueError(f"rows must be strictly increasing and non-negative: {self}")
        if (len(self.top) - len(self.bottom)) % 2 == 0:
            raise ValueError("the defect r - s must be odd")

    @property
    def defect(self) -> int:
        return len(self.top) - len(self.bottom)

    @property
    def rank(self) -> int:
        r, s = len(self.top), len(self.bottom)
        return sum(self.top) + sum(self.bottom) - ((r + s - 1) // 2) ** 2

    def __str__(self) -> str:
        bottom = " ".join(map(str, self.bottom)) or "-"
        return f"({' '.join(map(str, self.top))} / {bottom})"


@dataclass(frozen=True)
class UnipotentLabel:
    """A bipartition (alpha, beta) with an odd defect d."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    defect: int = 1

    def __post_init__(self) -> None:
        if self.defect < 1 or self.defect % 2 == 0:
            raise ValueError("defect must be odd and positive")
        for part in (self.alpha, self.beta):
            if any(x <= 0 for x in part) or list(part) != sorted(part, reverse=True):
                raise ValueError(f"not a partition: {part}")

    @property
    def rank(self) -> int:
        d1 = (self.defect - 1) // 2
        return sum(self.alpha) + sum(self.beta) + d1 * d1 + d1

    def __str__(self) -> str:
        return f"[{_partition_str(self.alpha)},{_partition_str(self.beta)},{self.defect}]"

    __repr__ = __str__


def parse_label(text: str | UnipotentLabel) -> UnipotentLabel:
    """Parse ``'[1^2,-,1]'``, ``'[21,-,1]'`` or ``'[2 1,-,1]'``."""
    if isinstance(text, UnipotentLabel):
        return text
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"label must look like [alpha,beta,d]: {text!r}")
    fields = [f.strip() for f in body[1:-1].split(",")]
    if len(fields) != 3:
        raise ValueError(f"label must have three fields: {text!r}")
    return UnipotentLabel(_parse_partition(fields[0]), _parse_partition(fields[1]), int(fields[2]))


def _to_label(sym: SymbolB) -> UnipotentLabel:
    alpha = sorted((x - i for i, x in enumerate(sym.top)), reverse=True)
    beta = sorted((x - i for i, x in enumerate(sym.bottom)), reverse=True)
    return UnipotentLabel(tuple(a for a in alpha if a), tuple(b for b in beta if b), sym.defect)


def _to_symbol(lab: UnipotentLabel) -> SymbolB:
    d = lab.defect
    r = max(len(lab.alpha), len(lab.beta) + d)
    s = r - d
    a = sorted(lab.alpha) if lab.alpha else []
    b = sorted(lab.beta) if lab.beta else []
    a = [0] * (r - len(a)) + a
    b = [0] * (s - len(b)) + b
    return SymbolB(tuple(x + i for i, x in enumerate(a)), tuple(x + i for i, x in enumerate(b)))


def symbol_bipartition(x: SymbolB | UnipotentLabel | str) -> SymbolB | UnipotentLabel:
    """Map a symbol to its bipartition label, and a label to its reduced symbol."""
    if isinstance(x, str):
        x = parse_label(x)
    if isinstance(x, SymbolB):
        return _to_label(x)
    return _to_symbol(x)


def labels_of_rank(m: int, max_defect: int | None = None) -> list[UnipotentLabel]:
    """All labels of rank m (every odd defect d with d'^2 + d' <= m)."""
    out = []
    d1 = 0
    while d1 * d1 + d1 <= m:
        d = 2 * d1 + 1
        if max_defect is not None and d > max_defect:
            break
        size = m - (d1 * d1 + d1)
        for k in range(size + 1):
            for a in _partitions(k):
                for b in _partitions(size - k):
                    out.append(UnipotentLabel(a, b, d))
        d1 += 1
    return out


def _partitions(k: int, largest: int | None = None) -> Iterable[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    largest = k if largest is None else largest
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def hc_branch(label: UnipotentLabel | str) -> list[UnipotentLabel]:
    """Labels of rank one higher obtained by adding a box to alpha or to beta."""
    lab = parse_label(label)
    out = []
    for which in ("alpha", "beta"):
        part = list(getattr(lab, which))
        for i in range(len(part) + 1):
            new = part + [0] if i == len(part) else list(part)
            new[i] += 1
            if i > 0 and new[i] > new[i - 1]:
                continue
            new_t = tuple(new)
            if which == "alpha":
                out.append(UnipotentLabel(new_t, lab.beta, lab.defect))
            else:
                out.append(UnipotentLabel(lab.alpha, new_t, lab.defect))
    return out


# ---------------------------------------------------------------------------
# exact polynomials in q


PHI = {1: (-1, 1), 2: (1, 1), 3: (1, 1, 1), 4: (1, 0, 1), 6: (1, -1, 1)}


def _poly_eval(coeffs: Sequence[int], q: int) -> int:
    return sum(c * q**i for i, c in enumerate(coeffs))


@dataclass(frozen=True)
class QPoly:
    """coeff * q^qpow * prod(factor(q)); factors are ascending coefficient tuples."""

    coeff: Fraction
    qpow: int = 0
    factors: tuple[tuple[int, ...], ...] = ()

    def __call__(self, q: int) -> Fraction:
        v = Fraction(self.coeff) * q**self.qpow
        for f in self.factors:
            v *= _poly_eval(f, q)
        return v

    def __str__(self) -> str:
        if self.coeff == 0:
            return "0"
        names = {v: f"phi{k}" for k, v in PHI.items()}
        parts = [] if self.coeff == 1 else [str(self.coeff)]
        if self.qpow:
            parts.append("q" if self.qpow == 1 else f"q^{self.qpow}")
        for f in self.factors:
            parts.append(names.get(f, "(" + "+".join(f"{c}q^{i}" for i, c in enumerate(f) if c) + ")"))
        return "*".join(parts) or "1"


def _qp(coeff: Fraction | int, qpow: int = 0, *phis: int | tuple[int, ...]) -> QPoly:
    return QPoly(Fraction(coeff), qpow, tuple(PHI[p] if isinstance(p, int) else p for p in phis))


_H = Fraction(1, 2)
_ZERO = QPoly(Fraction(0))
_ONE = QPoly(Fraction(1))


@dataclass(frozen=True)
class DegreePolynomial:
    label: UnipotentLabel
    poly: QPoly

    def __call__(self, q: int) -> int:
        v = self.poly(q)
        if v.denominator != 1:
            raise ValueError(f"degree of {self.label} is not an integer at q={q}")
        return int(v)


def _table(rows: Mapping[str, QPoly]) -> dict[UnipotentLabel, QPoly]:
    return {parse_label(k): v for k, v in rows.items()}


_DEGREES: dict[int, dict[UnipotentLabel, QPoly]] = {
    1: _table({"[-,-,1]": _ONE}),
    3: _table({"[1,-,1]": _ONE, "[-,1,1]": _qp(1, 1)}),
    5: _table(
        {
            "[2,-,1]": _ONE,
            "[-,-,3]": _qp(_H, 1, 1, 1),
            "[1^2,-,1]": _qp(_H, 1, 4),
            "[1,1,1]": _qp(_H, 1, 2, 2),
            "[-,2,1]": _qp(_H, 1, 4),
            "[-,1^2,1]": _qp(1, 4),
        }
    ),
    7: _table(
        {
            "[3,-,1]": _ONE,
            "[2,1,1]": _qp(_H, 1, 3, 4),
            "[-,3,1]": _qp(_H, 1, 4, 6),
            "[21,-,1]": _qp(_H, 1, 2, 2, 6),
            "[1,-,3]": _qp(_H, 1, 1, 1, 3),
            "[1,2,1]": _qp(1, 2, 3, 6),
            "[1^2,1,1]": _qp(1, 3, 3, 6),
            "[1,1^2,1]": _qp(_H, 4, 3, 4),
            "[-,21,1]": _qp(_H, 4, 2, 2, 6),
            "[1^3,-,1]": _qp(_H, 4, 4, 6),
            "[-,1,3]": _qp(_H, 4, 1, 1, 3),
            "[-,1^3,1]": _qp(1, 9),
        }
    ),
}

# symbols exactly as printed next to the labels in the two degree tables
PRINTED_SYMBOLS: dict[str, str] = {
    "[2,-,1]": "2/-",
    "[-,-,3]": "0 1 2/-",
    "[1^2,-,1]": "1 2/0",
    "[1,1,1]": "0 2/1",
    "[-,2,1]": "0 1/2",
    "[-,1^2,1]": "0 1 2/1 2",
    "[3,-,1]": "3/-",
    "[2,1,1]": "0 3/1",
    "[-,3,1]": "0 1/3",
    "[21,-,1]": "1 3/0",
    "[1,-,3]": "0 1 3/-",
    "[1,2,1]": "0 2/2",
    "[1^2,1,1]": "1 2/1",
    "[1,1^2,1]": "0 1 3/1 2",
    "[-,21,1]": "0 1 2/1 3",
    "[1^3,-,1]": "1 2 3/0 1",
    "[-,1,3]": "0 1 2 3/1",
    "[-,1^3,1]": "0 1 2 3/1 2 3",
}


def parse_symbol(text: str) -> SymbolB:
    top, bottom = text.split("/")
    row = lambda s: tuple(int(x) for x in s.split()) if s.strip() not in ("-", "") else ()  # noqa: E731
    return SymbolB(row(top), row(bottom))


def degree_table(n: int) -> list[DegreePolynomial]:
    if n not in _DEGREES:
        raise KeyError(f"no degree table for SO_{n}")
    return [DegreePolynomial(lab, poly) for lab, poly in _DEGREES[n].items()]


def unipotent_degree(label: UnipotentLabel | str, q: int) -> int:
    lab = parse_label(label)
    n = 2 * lab.rank + 1
    if n not in _DEGREES or lab not in _DEGREES[n]:
        raise KeyError(f"unknown label {lab}")
    return DegreePolynomial(lab, _DEGREES[n][lab])(q)


# values at z_0, z_1, z_2: (odd q triple, even q triple)
def _zrow(odd: tuple[QPoly, QPoly, QPoly], even: tuple[QPoly, QPoly, QPoly] | None = None):
    return (odd, odd if even is None else even)


_Z_VALUES: dict[int, dict[UnipotentLabel, tuple]] = {
    5: _table(
        {
            "[-,-,3]": _zrow((_qp(-_H, 1, 1), _ZERO, _qp(1, 1)), (_qp(-_H, 1, 1), _qp(-_H, 1, 1), _qp(_H, 1))),
            "[1^2,-,1]": _zrow((_qp(-_H, 1, 1), _qp(1, 1), _ZERO), (_qp(-_H, 1, 1), _qp(_H, 1, 2), _qp(_H, 1))),
            "[1,1,1]": _zrow((_qp(_H, 1, 2), _qp(1, 1), _ZERO), (_qp(_H, 1, 2), _qp(_H, 1, 2), _qp(_H, 1))),
            "[-,2,1]": _zrow((_qp(_H, 1, 2), _ZERO, _qp(1, 1)), (_qp(_H, 1, 2), _qp(-_H, 1, 1), _qp(_H, 1))),
        }
    ),
    7: _table(
        {
            "[2,1,1]": _zrow(
                (_qp(_H, 1, (1, 1, 2)), _qp(_H, 1, 2, 2), _qp(_H, 1, 4)),
                (_qp(_H, 1, (1, 1, 2)), _qp(_H, 1, 2, 4), _qp(_H, 1, 3)),
            ),
            "[-,3,1]": _zrow(
                (_qp(_H, 1, (1, -1, 2)), _qp(_H, 1, 1, 1), _qp(_H, 1, 4)),
                (_qp(_H, 1, (1, -1, 2)), _qp(-_H, 1, 1, 4), _qp(_H, 1, 6)),
            ),
            "[21,-,1]": _zrow(
                (_qp(_H, 1, 2), _qp(_H, 1, 2, 2), _qp(_H, 1, 4)),
                (_qp(_H, 1, 2), _qp(_H, 1, 2, 4), _qp(_H, 1, 3)),
            ),
            "[1,-,3]": _zrow(
                (_qp(-_H, 1, 1), _qp(_H, 1, 1, 1), _qp(_H, 1, 4)),
                (_qp(-_H, 1, 1), _qp(-_H, 1, 1, 4), _qp(_H, 1, 6)),
            ),
            "[1,2,1]": _zrow((_qp(1, 2, 4), _qp(1, 2), _qp(1, 2))),
            "[1^2,1,1]": _zrow((_qp(1, 3), _qp(2, 3), _ZERO), (_qp(1, 3), _qp(1, 3, 4), _qp(1, 3))),
            "[1,1^2,1]": _zrow((_qp(_H, 4, 2), _qp(1, 4), _ZERO), (_qp(_H, 4, 2), _qp(_H, 4, 4), _qp(_H, 4))),
            "[-,21,1]": _zrow((_qp(_H, 4, 2), _ZERO, _qp(1, 4)), (_qp(_H, 4, 2), _qp(-_H, 4, 1, 2), _qp(_H, 4))),
            "[1^3,-,1]": _zrow((_qp(-_H, 4, 1), _qp(1, 4), _ZERO), (_qp(-_H, 4, 1), _qp(_H, 4, 4), _qp(_H, 4))),
            "[-,1,3]": _zrow((_qp(-_H, 4, 1), _ZERO, _qp(1, 4)), (_qp(-_H, 4, 1), _qp(-_H, 4, 1, 2), _qp(_H, 4))),
        }
    ),
}


def z_value_table(n: int, q: int) -> dict[UnipotentLabel, tuple[Fraction, Fraction, Fraction]]:
    """chi(z_0), chi(z_1), chi(z_2) for every unipotent label of SO_n(q), n in {5, 7}."""
    if n not in _Z_VALUES:
        raise KeyError(f"no value table for SO_{n}")
    parity = q % 2 == 0
    out: dict[UnipotentLabel, tuple[Fraction, Fraction, Fraction]] = {}
    for lab in _DEGREES[n]:
        if lab in _Z_VALUES[n]:
            row = _Z_VALUES[n][lab][1 if parity else 0]
            out[lab] = tuple(p(q) for p in row)  # type: ignore[assignment]
        elif _DEGREES[n][lab] == _ONE:
            out[lab] = (Fraction(1),) * 3  # type: ignore[assignment]
        else:
            out[lab] = (Fraction(0),) * 3  # type: ignore[assignment]
    return out


_COMPONENT_DEGREES: dict[int, dict[UnipotentLabel, tuple[QPoly, ...]]] = {
    5: _table(
        {
            "[2,-,1]": (_ONE, _ZERO, _ZERO, _ZERO),
            "[-,-,3]": (_ZERO, _ZERO, _ZERO, _ONE),
            "[1^2,-,1]": (_ONE, _ONE, _ZERO, _ONE),
            "[1,1,1]": (_qp(1, 0, 2), _ONE, _ONE, _ZERO),
            "[-,2,1]": (_qp(1, 1), _ZERO, _ONE, _ZERO),
            "[-,1^2,1]": (_qp(1, 1), _qp(1, 1), _qp(1, 1), _qp(1, 1)),
        }
    ),
    7: _table(
        {
            "[3,-,1]": (_ONE, _ZERO, _ZERO, _ZERO),
            "[2,1,1]": (_qp(_H, 0, (2, 1), 4), _ONE, _ONE, _ZERO),
            "[-,3,1]": (_qp(_H, 1, 4), _ZERO, _ONE, _ZERO),
            "[21,-,1]": (_qp(_H, 0, 2, (2, -1, 1)), _ONE, _ZERO, _ONE),
            "[1,-,3]": (_qp(_H, 1, 1, 1), _ZERO, _ZERO, _ONE),
            "[1,2,1]": (_qp(1, 1, 3), _qp(1, 1), _qp(2, 1), _ZERO),
            "[1^2,1,1]": (_qp(1, 1, 3), _qp(1, 1, 2), _qp(1, 2), _qp(1, 2)),
            "[1,1^2,1]": (_qp(_H, 1, (1, 2), 4), _qp(_H, 1, 2, 2), _qp(_H, 1, 2, 2), _qp(_H, 1, 4)),
            "[-,21,1]": (_qp(_H, 1, (1, 0, 1, 2)), _qp(_H, 1, 4), _qp(_H, 1, 2, 2), _qp(_H, 1, 4)),
            "[1^3,-,1]": (_qp(_H, 1, 4), _qp(_H, 1, 4), _qp(_H, 1, 1, 1), _qp(_H, 1, 4)),
            "[-,1,3]": (_qp(_H, 1, 1, 1), _qp(_H, 1, 1, 1), _qp(_H, 1, 1, 1), _qp(_H, 1, 4)),
            "[-,1^3,1]": (_qp(1, 4), _qp(1, 4), _qp(1, 4), _qp(1, 4)),
        }
    ),
}


def component_degree_table(n: int, q: int) -> dict[UnipotentLabel, tuple[int, int, int, int]]:
    """(theta^1(1), theta^0(1), theta^+(1), theta^-(1)) for every unipotent label."""
    out = {}
    for lab, row in _COMPONENT_DEGREES[n].items():
        vals = [p(q) for p in row]
        if any(v.denominator != 1 for v in vals):
            raise ValueError(f"non-integral component degree for {lab} at q={q}")
        out[lab] = tuple(int(v) for v in vals)
    return out  # type: ignore[return-value]


# Harish-Chandra induction identities used in the decomposition proofs
HC_IDENTITIES: list[tuple[str, tuple[str, ...]]] = [
    ("[1,-,1]", ("[2,-,1]", "[1^2,-,1]", "[1,1,1]")),
    ("[-,1,1]", ("[1,1,1]", "[-,1^2,1]", "[-,2,1]")),
    ("[2,-,1]", ("[3,-,1]", "[2,1,1]", "[21,-,1]")),
    ("[-,-,3]", ("[1,-,3]", "[-,1,3]")),
    ("[-,2,1]", ("[-,3,1]", "[1,2,1]", "[-,21,1]")),
    ("[-,1^2,1]", ("[1,1^2,1]", "[-,21,1]", "[-,1^3,1]")),
    ("[1,1,1]", ("[2,1,1]", "[1,2,1]", "[1^2,1,1]", "[1,1^2,1]")),
    ("[1^2,-,1]", ("[21,-,1]", "[1^2,1,1]", "[1^3,-,1]")),
]


# ---------------------------------------------------------------------------
# identification inside a computed character table


def identify_unipotent(
    table: CharacterTable,
    n: int,
    q: int,
    hc_induced: Mapping[UnipotentLabel, ClassFunction],
    z_classes: Sequence[int] | None = None,
    tiebreak: Callable[[UnipotentLabel, list[int]], list[int]] | None = None,
) -> dict[UnipotentLabel, int]:
    """Match every unipotent label of SO_n(q) to an index of ``table``.

    Candidates are first filtered by the fingerprint (degree, chi(z_0),
    chi(z_1), chi(z_2)), with z-values used when ``z_classes`` locates
    the z_j in the table's class list.  Remaining ties are broken by
    Harish-Chandra multiplicities: ``hc_induced`` maps each unipotent
    label of the Levi factor to its induced character, and a label must
    occur exactly once in R(sigma) for each parent sigma under
    :func:`hc_branch` and not at all otherwise.  If candidates remain,
    ``tiebreak`` (a further necessary condition, supplied by the caller)
    filters them.  Residual ambiguity raises.
    """
    if n not in _DEGREES:
        raise KeyError(f"no degree table for SO_{n}")
    degs = table.degrees()
    zvals = z_value_table(n, q) if (z_classes is not None and n in _Z_VALUES) else None
    mults: dict[UnipotentLabel, list[int]] | None = None
    out: dict[UnipotentLabel, int] = {}
    for lab, poly in _DEGREES[n].items():
        deg = DegreePolynomial(lab, poly)(q)
        cands = [i for i, d in enumerate(degs) if d == deg]
        if zvals is not None:
            want = zvals[lab]
            cands = [
                i
                for i in cands
                if all(
                    table[i].values[c].is_rational() and table[i].values[c].to_fraction() == w
                    for c, w in zip(z_classes, want)  # type: ignore[arg-type]
                )
            ]
        if len(cands) > 1:
            if mults is None:
                mults = {p: decompose(chi, table) for p, chi in hc_induced.items()}
            parents = {p for p in hc_induced if lab in hc_branch(p)}
            cands = [
                i
                for i in cands
                if all((mults[p][i] == 1) if p in parents else (mults[p][i] == 0) for p in hc_induced)
            ]
        if len(cands) > 1 and tiebreak is not None:
            cands = tiebreak(lab, cands)
        if len(cands) != 1:
            raise IdentificationError(f"{lab} at SO_{n}({q}): candidates {cands}")
        out[lab] = cands[0]
    if len(set(out.values())) != len(out):
        raise IdentificationError(f"two labels matched the same irreducible at SO_{n}({q})")
    return out


def hc_check(
    table: CharacterTable, hc_induced: Mapping[UnipotentLabel, ClassFunction], ids: Mapping[UnipotentLabel, int]
) -> dict[UnipotentLabel, bool]:
    """R(sigma) == sum of chi_X over X in hc_branch(sigma), as class functions."""
    out = {}
    for parent, chi in hc_induced.items():
        expected = None
        for child in hc_branch(parent):
            if child in ids:
                expected = table[ids[child]] if expected is None else expected + table[ids[child]]
        out[parent] = expected is not None and expected == chi
    return out


def multiplicity(chi: ClassFunction, psi: ClassFunction) -> Fraction:
    return inner_product(chi, psi)
