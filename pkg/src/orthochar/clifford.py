"""Irreducible characters of P_n by Clifford theory over U, and the
character identities relating them to Harish-Chandra induction.

Irr(P) splits into four families according to the U-character covered:

* Type 1: inflations of Irr(L) along P -> L;
* Type 0: induced from I^0 = U P~_{n-2}, payload mu in Irr(P_{n-2});
* Type +/-: induced from I^+- = U L^+-, payload theta in Irr(L^+-).

Everything is recursive in n: the Type 0 payloads at level n are the
irreducibles of P_{n-2} built by the same class one level down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from .chartab import (
    CharacterTable,
    ClassFunction,
    character_table,
    induce,
    inner_product,
    pullback,
    restrict,
    trivial,
)
from .exact import Cyclotomic
from .matgrp import FiniteMatrixGroup, class_fusion
from .ortho import ParabolicData, levi, mid, parabolic, s_batch
from .symbols import (
    UnipotentLabel,
    hc_branch,
    hc_check,
    identify_unipotent,
    parse_label,
)

__all__ = [
    "IrrPLabel",
    "ComponentSplit",
    "ParabolicCharacters",
    "parabolic_characters",
    "irr_parabolic",
    "psi",
    "values_on_z",
    "value_table_row",
    "component_split",
    "m_matrix",
    "m_matrix_det",
    "expected_m_det",
    "degrees_from_values",
    "verify_theorem42",
    "verify_lgp",
    "verify_prop51",
    "steinberg_restriction",
    "unipotent_characters",
    "UnipotentData",
    "CliffordError",
]

KINDS = ("1", "0", "+", "-")


class CliffordError(RuntimeError):
    """A completeness or consistency check of the construction failed."""


@dataclass(frozen=True)
class IrrPLabel:
    """Type tag plus the name of the payload irreducible."""

    kind: str
    payload: str
    n: int

    def __str__(self) -> str:
        if self.n == 3:
            if self.kind == "1" and self.payload == "[-,-,1]":
                return "1_P3"
            if self.kind == "+":
                return "mu"
        return f"{self.kind}:{self.payload}"

    __repr__ = __str__


@dataclass
class ComponentSplit:
    """chi = 1chi + 0chi + +chi + -chi, with the payload multiplicities."""

    chi: ClassFunction
    components: dict[str, ClassFunction]
    multiplicities: dict[str, list[tuple[IrrPLabel, int]]]
    theta_degrees: dict[str, int]

    def degrees(self) -> tuple[int, int, int, int]:
        return tuple(self.theta_degrees[k] for k in KINDS)  # type: ignore[return-value]

    def payload(self, kind: str) -> dict[str, int]:
        return {lab.payload: c for lab, c in self.multiplicities[kind] if c}

    def to_json(self) -> dict:
        return {
            k: {"theta_degree": self.theta_degrees[k], "payload": self.payload(k)} for k in KINDS
        }


# ---------------------------------------------------------------------------
# unipotent characters of SO_n(q)


@dataclass
class UnipotentData:
    n: int
    q: int
    table: CharacterTable
    ids: dict[UnipotentLabel, int]
    hc_induced: dict[UnipotentLabel, ClassFunction]

    def character(self, label: UnipotentLabel | str) -> ClassFunction:
        return self.table[self.ids[parse_label(label)]]

    def labels(self) -> list[UnipotentLabel]:
        return list(self.ids)

    def hc_identities(self) -> dict[UnipotentLabel, bool]:
        return hc_check(self.table, self.hc_induced, self.ids)


@lru_cache(maxsize=None)
def unipotent_characters(n: int, q: int) -> UnipotentData:
    """Irr(SO_n(q)) with its unipotent characters located by label."""
    pd = parabolic(n, q)
    G = pd.G
    table = character_table(G)
    pc = parabolic_characters(n, q)
    hc: dict[UnipotentLabel, ClassFunction] = {}
    for lab, sigma in pc.levi_unipotents().items():
        hc[lab] = induce(pullback(sigma, pd.P, levi), G, fusion=pc.fusion_to_G)
    zc = None
    if n >= 5:
        zc = [int(c) for c in G.class_index(np.array(pd.zdata.z))]
    ids = identify_unipotent(table, n, q, hc, zc, tiebreak=lambda lab, c: torus_constancy_filter(table, c))
    return UnipotentData(n, q, table, ids, hc)


def torus_constancy_filter(table: CharacterTable, cands: list[int]) -> list[int]:
    """Keep the candidates that are constant on every set {t : C_G(t) = C_G(s)}, C_G(s) abelian.

    For s regular semisimple with T = C_G(s)°, a unipotent character
    satisfies chi(s) = <chi, R_T(1)>, which depends on T only.  An abelian
    centraliser of order prime to p has a torus as identity component, and
    every t with C_G(t) = C_G(s) shares that torus, so constancy there is a
    necessary condition for being unipotent.
    """
    G = table.group
    ar, p = G.ar, G.F.p
    cent = [c.centralizer_order for c in G.classes]
    keep = list(cands)
    for c, cl in enumerate(G.classes):
        if cl.order == 1 or cl.order % p == 0 or cent[c] % p == 0:
            continue
        s = G.elems[cl.rep]
        mask = ar.keys(ar.left(s, G.elems)) == ar.keys(ar.right(G.elems, s))
        C = G.elems[mask]
        if C.shape[0] != cent[c]:  # pragma: no cover
            raise CliffordError("centraliser order mismatch")
        Ck = np.sort(ar.keys(C))
        if any(not np.array_equal(np.sort(ar.keys(ar.left(x, C))), Ck) or not np.array_equal(ar.keys(ar.left(x, C)), ar.keys(ar.right(C, x))) for x in C):
            continue
        cls_C = G.class_index(C)
        S = sorted({int(k) for k in cls_C if cent[int(k)] == C.shape[0]})
        keep = [i for i in keep if len({table[i].values[k] for k in S}) == 1]
    return keep


# ---------------------------------------------------------------------------
# per-level construction


def _discrete_log(F, a: int, gen: int) -> int:
    x, e = 1, 0
    while x != a:
        x = int(F.mul[x, gen])
        e += 1
        if e > F.q:
            raise ValueError(f"{a} is not a unit")
    return e


def _kernel_contains_keys(chi: ClassFunction, keys: np.ndarray) -> bool:
    G = chi.group
    E = G.ar.decode(keys)
    cls = np.unique(G.class_index(E))
    return all(chi.values[int(c)] == chi.values[0] for c in cls)


class ParabolicCharacters:
    """Irr(P_n(q)) and the payload tables of the four types."""

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.pd: ParabolicData = parabolic(n, q)
        self.m = self.pd.m
        self._fusions: dict[str, list[int]] = {}

    def __repr__(self) -> str:
        return f"ParabolicCharacters(n={self.n}, q={self.q})"

    @property
    def P(self) -> FiniteMatrixGroup:
        return self.pd.P

    @cached_property
    def sub(self) -> ParabolicCharacters | None:
        return parabolic_characters(self.n - 2, self.q) if self.n >= 5 else None

    def fusion(self, H: FiniteMatrixGroup, key: str) -> list[int]:
        if key not in self._fusions:
            self._fusions[key] = class_fusion(H, self.P)
        return self._fusions[key]

    @cached_property
    def fusion_to_G(self) -> list[int]:
        return class_fusion(self.P, self.pd.G)

    # -- Irr(L) -----------------------------------------------------------
    @cached_property
    def _a_logs(self) -> list[int]:
        """Discrete logs of a = g[0,0] at the class representatives of L."""
        F = self.pd.F
        gen = F.primitive_element()
        return [_discrete_log(F, int(a), gen) for a in self.pd.L.class_reps()[:, 0, 0]]

    def a_character(self, j: int) -> ClassFunction:
        """g -> zeta_{q-1}^{j log a} on L."""
        L = self.pd.L
        N = self.q - 1
        if N == 1:
            return trivial(L)
        return ClassFunction(L, [Cyclotomic.root_of_unity(N, (j * e) % N) for e in self._a_logs])

    def lprime_table(self) -> tuple[CharacterTable | None, dict[int, str]]:
        """Irr(SO_{n-2}) and names for its unipotent members."""
        if self.n == 3:
            return None, {0: "[-,-,1]"}
        ud = unipotent_characters(self.n - 2, self.q)
        names = {idx: str(lab) for lab, idx in ud.ids.items()}
        return ud.table, names

    def lift_lprime(self, chi: ClassFunction) -> ClassFunction:
        """g -> chi(mid(g)) on L."""
        L = self.pd.L
        cls = chi.group.class_index(mid(L.class_reps()))
        return ClassFunction(L, [chi.values[int(c)] for c in cls])

    @cached_property
    def levi_irreducibles(self) -> list[tuple[str, ClassFunction]]:
        """Irr(L) = Irr(L') x Irr(A), since L = A x L'."""
        tab, names = self.lprime_table()
        base: list[tuple[str, ClassFunction]]
        if tab is None:
            base = [(names[0], trivial(self.pd.L))]
        else:
            base = [(names.get(i, f"chi{i}"), self.lift_lprime(chi)) for i, chi in enumerate(tab)]
        out = []
        for j in range(self.q - 1):
            alpha = self.a_character(j)
            for name, chi in base:
                out.append((name if j == 0 else f"{name}.a{j}", chi if j == 0 else chi * alpha))
        return out

    def levi_unipotents(self) -> dict[UnipotentLabel, ClassFunction]:
        """The unipotent characters of L (trivial on A), keyed by their L' label."""
        out = {}
        for name, chi in self.levi_irreducibles:
            if name.startswith("[") and ".a" not in name:
                out[parse_label(name)] = chi
        return out

    # -- Irr(L^+-) ----------------------------------------------------------
    def _pm_K(self, eps: str) -> np.ndarray:
        """Keys of K^+-: L^+- cap L' for odd q, the cyclic index-2 subgroup for even q."""
        Le = self.pd.L_eps(eps)
        if self.q % 2:
            return Le.keys[Le.elems[:, 0, 0] == 1]
        half = Le.order // 2
        for c in Le.classes:
            if c.order == half:
                x = Le.elems[c.rep]
                pw = [np.eye(self.n, dtype=np.uint8)]
                for _ in range(half - 1):
                    pw.append(Le.ar.mul(pw[-1], x))
                return np.unique(Le.ar.keys(np.array(pw)))
        raise CliffordError(f"no cyclic index-2 subgroup in L^{eps}")  # pragma: no cover

    @lru_cache(maxsize=None)
    def pm_irreducibles(self, eps: str) -> list[tuple[str, ClassFunction]]:
        """Irr(L^eps) with the naming 1, nu1, nu2, nu3, xi_i (n=5) or 1, theta_i."""
        Le = self.pd.L_eps(eps)
        tab = character_table(Le)
        triv = tab.trivial_index()
        if self.n != 5:
            out = [("1", tab[triv])]
            rest = [chi for i, chi in enumerate(tab) if i != triv]
            out += [(f"theta{k}", chi) for k, chi in enumerate(rest, start=1)]
            return out
        K = self._pm_K(eps)
        linear = [i for i, chi in enumerate(tab) if chi.degree_int() == 1 and i != triv]
        nu1 = [i for i in linear if _kernel_contains_keys(tab[i], K)]
        others = [i for i in linear if i not in nu1]
        if len(nu1) != 1 or len(others) not in (0, 2):
            raise CliffordError(f"unexpected linear characters of L^{eps}: {len(nu1)}, {len(others)}")
        out = [("1", tab[triv]), ("nu1", tab[nu1[0]])]
        if others:
            st_res = restrict(self.steinberg_L, Le)
            mult = [int(inner_product(st_res, tab[i])) for i in others]
            if sorted(mult) != [0, 1]:
                raise CliffordError(f"St_L restricted to L^{eps} does not single out nu3: {mult}")
            i3 = others[mult.index(1)]
            i2 = others[mult.index(0)]
            out += [("nu2", tab[i2]), ("nu3", tab[i3])]
        xi = [i for i, chi in enumerate(tab) if chi.degree_int() == 2]
        out += [(f"xi{k}", tab[i]) for k, i in enumerate(xi)]
        if len(out) != len(tab):
            raise CliffordError(f"unnamed irreducibles of L^{eps}")
        return out

    def pm_character(self, eps: str, name: str) -> ClassFunction:
        """A named payload on L^eps; 'Xi' is the sum of the xi_i, '+' separates summands."""
        table = dict(self.pm_irreducibles(eps))
        acc = None
        for part in name.split("+"):
            part = part.strip()
            if part == "Xi":
                chi = sum((c for k, c in table.items() if k.startswith("xi")), 0)
                if isinstance(chi, int):
                    chi = ClassFunction(self.pd.L_eps(eps), [0] * self.pd.L_eps(eps).num_classes)
            else:
                chi = table[part]
            acc = chi if acc is None else acc + chi
        return acc  # type: ignore[return-value]

    @cached_property
    def steinberg_L(self) -> ClassFunction:
        """St_L = St_{L'} inflated (trivial on A)."""
        top = [lab for lab in self.levi_unipotents() if not lab.alpha and lab.defect == 1 and len(lab.beta) == lab.rank]
        if self.n == 3:
            return trivial(self.pd.L)
        if len(top) != 1:  # pragma: no cover
            raise CliffordError("no Steinberg label for L'")
        return self.levi_unipotents()[top[0]]

    # -- psi ----------------------------------------------------------------
    def _psi1(self, sigma: ClassFunction) -> ClassFunction:
        return pullback(sigma, self.P, levi)

    def _psi0(self, mu: ClassFunction) -> ClassFunction:
        pd = self.pd
        I0 = pd.I0
        reps = I0.class_reps()
        lam = pd.lambdas["0"]
        exps = lam.exponents(reps)
        cls = mu.group.class_index(mid(reps))
        p = pd.F.p
        vals = [Cyclotomic.root_of_unity(p, int(e)) * mu.values[int(c)] for e, c in zip(exps, cls)]
        return induce(ClassFunction(I0, vals), self.P, fusion=self.fusion(I0, "I0"))

    def _psi_pm(self, eps: str, theta: ClassFunction) -> ClassFunction:
        pd = self.pd
        I = pd.inertia(eps)
        reps = I.class_reps()
        lam = pd.lambdas[eps]
        exps = lam.exponents(reps)
        cls = theta.group.class_index(levi(reps))
        p = pd.F.p
        vals = [Cyclotomic.root_of_unity(p, int(e)) * theta.values[int(c)] for e, c in zip(exps, cls)]
        return induce(ClassFunction(I, vals), self.P, fusion=self.fusion(I, "I" + eps))

    def psi(self, kind: str, payload: ClassFunction) -> ClassFunction:
        """The additive extension of the four constructions."""
        if kind == "1":
            return self._psi1(payload)
        if kind == "0":
            if self.n < 5:
                raise ValueError("Type 0 needs n >= 5")
            return self._psi0(payload)
        if kind in ("+", "-"):
            if kind == "-" and self.n < 5:
                raise ValueError("Type - needs n >= 5")
            return self._psi_pm(kind, payload)
        raise ValueError(f"unknown type {kind!r}")

    def payload_irreducibles(self, kind: str) -> list[tuple[str, ClassFunction]]:
        if kind == "1":
            return self.levi_irreducibles
        if kind == "0":
            assert self.sub is not None
            return [(str(lab), chi) for lab, chi in self.sub.irr]
        return self.pm_irreducibles(kind)

    def kinds(self) -> tuple[str, ...]:
        return KINDS if self.n >= 5 else ("1", "+")

    # -- Irr(P) -------------------------------------------------------------
    @cached_property
    def _irr_full(self) -> list[tuple[IrrPLabel, ClassFunction, int]]:
        out = []
        for kind in self.kinds():
            for name, payload in self.payload_irreducibles(kind):
                out.append((IrrPLabel(kind, name, self.n), self.psi(kind, payload), payload.degree_int()))
        P = self.P
        if len(out) != P.num_classes:
            raise CliffordError(f"{len(out)} characters for {P.num_classes} classes of {P!r}")
        if sum(chi.degree_int() ** 2 for _, chi, _ in out) != P.order:
            raise CliffordError(f"sum of squared degrees differs from |{P!r}|")
        return out

    @property
    def irr(self) -> list[tuple[IrrPLabel, ClassFunction]]:
        return [(lab, chi) for lab, chi, _ in self._irr_full]

    def by_name(self, name: str) -> ClassFunction:
        for lab, chi in self.irr:
            if str(lab) == name:
                return chi
        raise KeyError(name)

    def payload_degree(self, label: IrrPLabel) -> int:
        for lab, _, d in self._irr_full:
            if lab == label:
                return d
        raise KeyError(label)

    def split(self, chi: ClassFunction) -> ComponentSplit:
        comps: dict[str, ClassFunction] = {}
        mults: dict[str, list[tuple[IrrPLabel, int]]] = {k: [] for k in KINDS}
        degs = {k: 0 for k in KINDS}
        zero = ClassFunction(self.P, [0] * self.P.num_classes)
        for k in KINDS:
            comps[k] = zero
        for lab, psi_, d in self._irr_full:
            c = inner_product(chi, psi_)
            if c.denominator != 1 or c < 0:
                raise CliffordError(f"multiplicity {c} of {lab} is not a non-negative integer")
            c = int(c)
            mults[lab.kind].append((lab, c))
            if c:
                comps[lab.kind] = comps[lab.kind] + psi_ * c
                degs[lab.kind] += c * d
        total = sum((comps[k] for k in KINDS), zero)
        if total != chi:
            raise CliffordError("character is not a combination of the constructed irreducibles")
        return ComponentSplit(chi, comps, mults, degs)

    def z_classes(self) -> list[int]:
        return list(self.pd.zdata.classes)


@lru_cache(maxsize=None)
def parabolic_characters(n: int, q: int) -> ParabolicCharacters:
    return ParabolicCharacters(n, q)


def irr_parabolic(n: int, q: int) -> list[tuple[IrrPLabel, ClassFunction]]:
    """The complete list Irr(P_n(q)) with labels (raises if incomplete)."""
    return parabolic_characters(n, q).irr


def psi(n: int, q: int, kind: str, payload: ClassFunction) -> ClassFunction:
    return parabolic_characters(n, q).psi(kind, payload)


def component_split(n: int, q: int, chi: ClassFunction) -> ComponentSplit:
    return parabolic_characters(n, q).split(chi)


# ---------------------------------------------------------------------------
# values on z_0, z_1, z_2 and the M matrix


def values_on_z(chi: ClassFunction, pc: ParabolicCharacters) -> tuple[Cyclotomic, Cyclotomic, Cyclotomic]:
    """chi(z_0), chi(z_1), chi(z_2) for a class function on P or on G."""
    if chi.group is pc.P:
        cls = pc.z_classes()
    else:
        cls = [int(c) for c in chi.group.class_index(np.array(pc.pd.zdata.z))]
    return tuple(chi.values[c] for c in cls)  # type: ignore[return-value]


def value_table_row(kind: str, m: int, q: int) -> tuple[Fraction, Fraction, Fraction]:
    """Values on (z_0, z_1, z_2) of an irreducible of the given type, per unit payload degree."""
    Q = Fraction(q) ** (m - 1)
    h = Fraction(1, 2)
    if kind == "1":
        return (Fraction(1),) * 3  # type: ignore[return-value]
    if q % 2:
        rows = {
            "0": (Fraction(-1), Q - 1, -(Q + 1)),
            "+": (h * Q * (q - 1), -Q, Fraction(0)),
            "-": (-h * Q * (q - 1), Fraction(0), Q),
        }
    else:
        rows = {
            "0": (Fraction(-1), Q * Q - 1, Fraction(-1)),
            "+": (h * Q * (q - 1), -h * Q * (Q + 1), -h * Q),
            "-": (-h * Q * (q - 1), -h * Q * (Q - 1), h * Q),
        }
    return rows[kind]


def type_degree(kind: str, m: int, q: int) -> Fraction:
    """psi(1) / payload(1) for each type."""
    Q = Fraction(q) ** (m - 1)
    return {
        "1": Fraction(1),
        "0": Q * Q - 1,
        "+": Fraction(1, 2) * Q * (Q + 1) * (q - 1),
        "-": Fraction(1, 2) * Q * (Q - 1) * (q - 1),
    }[kind]


def m_matrix(m: int, q: int) -> list[list[Fraction]]:
    """Rows: degree, z_0, z_1, z_2; columns: theta^1, theta^0, theta^+, theta^-."""
    cols = [[type_degree(k, m, q), *value_table_row(k, m, q)] for k in KINDS]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def _gauss(A: list[list[Fraction]], b: list[Fraction] | None) -> tuple[Fraction, list[Fraction] | None]:
    """Determinant of A and, if b is given, the solution of A x = b."""
    n = len(A)
    M = [list(row) + ([b[i]] if b is not None else []) for i, row in enumerate(A)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    if b is None:
        return det, None
    return det, [M[i][n] / M[i][i] for i in range(n)]


def m_matrix_det(m: int, q: int) -> Fraction:
    return _gauss(m_matrix(m, q), None)[0]


def expected_m_det(m: int, q: int) -> Fraction:
    if q % 2:
        return Fraction(q) ** (4 * m - 2)
    return Fraction(1, 2) * Fraction(q) ** (5 * m - 3)


def degrees_from_values(
    chi1: object, z0: object, z1: object, z2: object, m: int, q: int
) -> tuple[int, int, int, int]:
    """(theta^1(1), theta^0(1), theta^+(1), theta^-(1)) from the four values, via M^-1."""
    if m < 2:
        raise ValueError("needs m >= 2")
    b = [_as_fraction(v) for v in (chi1, z0, z1, z2)]
    det, x = _gauss(m_matrix(m, q), b)
    if det == 0 or x is None:
        raise CliffordError("M is singular")
    if any(v.denominator != 1 for v in x):
        raise CliffordError(f"non-integral component degrees {x}")
    return tuple(int(v) for v in x)  # type: ignore[return-value]


def _as_fraction(v: object) -> Fraction:
    if isinstance(v, Cyclotomic):
        if not v.is_rational():
            raise ValueError(f"{v} is not rational")
        return v.to_fraction()
    return Fraction(v)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# restriction identities


@dataclass
class IdentityReport:
    claim: str
    n: int
    q: int
    holds: bool
    details: dict = field(default_factory=dict)


def _conj_pull(
    f: ClassFunction, H: FiniteMatrixGroup, x: np.ndarray, post: Callable[[np.ndarray], np.ndarray] | None = None
) -> ClassFunction:
    """h -> f(post(x^-1 h x)) on H."""
    ar = H.ar
    xinv = ar.inv(x)

    def mp(X: np.ndarray) -> np.ndarray:
        Y = ar.conj(xinv, X, x)
        return post(Y) if post is not None else Y

    return pullback(f, H, mp)


def _lhs_nu(pc: ParabolicCharacters, nu: ClassFunction) -> ClassFunction:
    """(^s nu) induced from R Q_K to P, with nu a class function on P_{n-2}."""
    pd = pc.pd
    return induce(_conj_pull(nu, pd.RQK, pd.s, mid), pc.P, fusion=pc.fusion(pd.RQK, "RQK"))


def verify_lgp(n: int, q: int, sigma: ClassFunction) -> IdentityReport:
    """R_L^G(sigma) restricted to P = 1psi_sigma + Ind_{RQ_K}(^s sigma) + Ind_L(^t sigma)."""
    pc = parabolic_characters(n, q)
    pd = pc.pd
    lhs = restrict(induce(pc.psi("1", sigma), pd.G, fusion=pc.fusion_to_G), pc.P)
    middle = induce(_conj_pull(sigma, pd.RQK, pd.s, levi), pc.P, fusion=pc.fusion(pd.RQK, "RQK"))
    last = induce(_conj_pull(sigma, pd.L, pd.t), pc.P, fusion=pc.fusion(pd.L, "L"))
    rhs = pc.psi("1", sigma) + middle + last
    details: dict = {"degree": lhs.degree_int()}
    ok = lhs == rhs
    if n >= 5 and sigma.kernel_contains(pd.A):
        # the middle term, expanded over Irr(P_{n-2})
        sig_sub = restrict(_to_lprime(pc, sigma), pd.sub.P)  # type: ignore[union-attr]
        assert pc.sub is not None
        expanded = None
        for _, nu in pc.sub.irr:
            c = inner_product(sig_sub, nu)
            if c:
                term = _lhs_nu(pc, nu) * int(c)
                expanded = term if expanded is None else expanded + term
        details["middle_expansion"] = expanded == middle
        ok = ok and bool(details["middle_expansion"])
    return IdentityReport("R_L^G(sigma) restricted to P", n, q, ok, details)


def _to_lprime(pc: ParabolicCharacters, sigma: ClassFunction) -> ClassFunction:
    """sigma restricted to L' read as a class function on SO_{n-2}."""
    sub = pc.pd.sub
    assert sub is not None
    G2 = sub.G
    Lp = pc.pd.Lp
    cls_L = pc.pd.L.class_index(pc.pd.embed(G2.class_reps()))
    del Lp
    return ClassFunction(G2, [sigma.values[int(c)] for c in cls_L])


def _theorem42_a(pc: ParabolicCharacters, sigma: ClassFunction) -> dict:
    pd = pc.pd
    ar = pd.ar
    tP = pd.conj_keys(pd.t, pd.P)
    tL = pd.conj_keys(pd.t, pd.L)
    inter = np.intersect1d(tP, pd.P.keys)
    # ^t(sigma inflated to P) restricted to tP cap P, against ^t sigma on L
    on_inter = _conj_pull(pc.psi("1", sigma), pd.L, pd.t)
    t_sigma = _conj_pull(sigma, pd.L, pd.t)
    del ar
    return {
        "tL = L": bool(np.array_equal(tL, pd.L.keys)),
        "tP cap P = L": bool(np.array_equal(inter, pd.L.keys)),
        "restriction equals t-conjugate": on_inter == t_sigma,
        "t-conjugate irreducible": t_sigma.norm() == 1,
        "induced from tP cap P": induce(on_inter, pc.P, pc.fusion(pd.L, "L")) == induce(t_sigma, pc.P, pc.fusion(pd.L, "L")),
    }


def _theorem42_b(pc: ParabolicCharacters, nu: ClassFunction) -> dict:
    pd = pc.pd
    lhs = _lhs_nu(pc, nu)
    LK, QK = pd.LK, pd.QK
    s_nu = _conj_pull(nu, LK, pd.s, mid)
    infl = pullback(s_nu, QK, pd.qk_levi_projection)
    Sigma = induce(infl, pd.L)
    rhs = pc.psi("0", nu) + pc.psi("1", Sigma)
    return {"lhs": lhs, "rhs": rhs, "Sigma_degree": Sigma.degree_int()}


def _theorem42_c(pc: ParabolicCharacters, nu0: ClassFunction, nu: ClassFunction) -> dict:
    pd = pc.pd
    sub = pd.sub
    assert sub is not None
    lhs = _lhs_nu(pc, nu)
    H = sub.sPcapP
    f = _conj_pull(nu0, H, sub.s, mid)
    Sigma = induce(f, sub.P)
    rhs = pc.psi("0", Sigma)
    return {"lhs": lhs, "rhs": rhs, "Sigma_degree": Sigma.degree_int()}


def _theorem42_pm(pc: ParabolicCharacters, eps: str, theta0: ClassFunction, nu: ClassFunction) -> dict:
    pd = pc.pd
    n = pd.n
    lhs = _lhs_nu(pc, nu)
    H = pd.P_eps_n3(eps)
    if eps == "+":
        keep = [i for i in range(n) if i not in (1, n - 2)]

        def proj(X: np.ndarray) -> np.ndarray:
            return np.ascontiguousarray(X[:, keep][:, :, keep])

    else:
        sub = pd.sub
        assert sub is not None and sub.ctx.sub is not None
        b4 = sub.ctx.sub.b
        from .matgrp import Arith, mat_inv

        ar4 = Arith.get(pd.F, n - 4)
        b4inv = mat_inv(pd.F, b4)

        def proj(X: np.ndarray) -> np.ndarray:
            M = pd.minus_inner(X)
            Mp = np.ascontiguousarray(M[:, 1:-1, 1:-1])
            Y = ar4.right(ar4.left(b4inv, Mp), b4)
            return s_batch(sub.ctx, Y, X[:, 0, 0].astype(np.int64))

    f = pullback(theta0, H, proj)
    theta = induce(f, pd.L_eps(eps))
    rhs = pc.psi(eps, theta)
    return {"lhs": lhs, "rhs": rhs, "theta_degree": theta.degree_int()}


def verify_theorem42(n: int, q: int, part: str, label: IrrPLabel | str | None = None) -> list[IdentityReport]:
    """Check one part of the restriction theorem for every eligible payload.

    part a: sigma in Irr(L) with A in its kernel; parts b-e: nu in Irr(P_{n-2})
    of Type 1, 0, +, - respectively.  ``label`` restricts to one payload.
    """
    pc = parabolic_characters(n, q)
    pd = pc.pd
    if n < 5:
        raise ValueError("needs n >= 5")
    if part in ("c", "e") and pd.m < 3:
        raise ValueError(f"part {part} needs m >= 3")
    out: list[IdentityReport] = []
    if part == "a":
        for name, sigma in pc.levi_irreducibles:
            if not sigma.kernel_contains(pd.A):
                continue
            if label is not None and name != str(label):
                continue
            res = _theorem42_a(pc, sigma)
            out.append(IdentityReport(f"(a) sigma={name}", n, q, all(res.values()), res))
        return out
    kind = {"b": "1", "c": "0", "d": "+", "e": "-"}[part]
    assert pc.sub is not None
    sub = pc.sub
    for lab, nu in sub.irr:
        if lab.kind != kind:
            continue
        if label is not None and str(lab) != str(label):
            continue
        payload = dict(sub.payload_irreducibles(kind))[lab.payload]
        if part == "b":
            res = _theorem42_b(pc, nu)
        elif part == "c":
            res = _theorem42_c(pc, payload, nu)
        else:
            res = _theorem42_pm(pc, kind, payload, nu)
        lhs, rhs = res.pop("lhs"), res.pop("rhs")
        res["lhs_degree"] = lhs.degree_int()
        res["rhs_degree"] = rhs.degree_int()
        out.append(IdentityReport(f"({part}) nu={lab}", n, q, lhs == rhs, res))
    return out


def prop51_rhs(pc: ParabolicCharacters, sigma_prime: ClassFunction) -> ClassFunction:
    """1psi_sigma + 0psi_{sigma' on P_{n-2}} + +psi_{sigma on L+} + -psi_{sigma on L-}."""
    pd = pc.pd
    assert pd.sub is not None
    sigma = pc.lift_lprime(sigma_prime)
    out = pc.psi("1", sigma)
    out = out + pc.psi("0", restrict(sigma_prime, pd.sub.P))
    out = out + pc.psi("+", restrict(sigma, pd.Lplus))
    out = out + pc.psi("-", restrict(sigma, pd.Lminus))
    return out


def verify_prop51(n: int, q: int) -> list[IdentityReport]:
    """Ind_L^P(sigma) against the four-term formula, for every sigma in Irr(L')."""
    pc = parabolic_characters(n, q)
    tab, names = pc.lprime_table()
    assert tab is not None
    out = []
    for i, sp in enumerate(tab):
        lhs = induce(pc.lift_lprime(sp), pc.P, pc.fusion(pc.pd.L, "L"))
        rhs = prop51_rhs(pc, sp)
        out.append(IdentityReport(f"Ind_L^P sigma, sigma={names.get(i, f'chi{i}')}", n, q, lhs == rhs))
    return out


def steinberg_restriction(n: int, q: int) -> tuple[ComponentSplit, bool]:
    """St_G restricted to P via the four-term formula, and whether it equals the direct restriction."""
    pc = parabolic_characters(n, q)
    ud = unipotent_characters(n, q)
    m = pc.m
    st_label = UnipotentLabel((), (1,) * m, 1)
    tab, names = pc.lprime_table()
    assert tab is not None
    st_lp_label = UnipotentLabel((), (1,) * (m - 1), 1) if m > 1 else UnipotentLabel((), (), 1)
    ud_sub = unipotent_characters(n - 2, q)
    st_lp = ud_sub.table[ud_sub.ids[st_lp_label]]
    formula = prop51_rhs(pc, st_lp)
    direct = restrict(ud.character(st_label), pc.P)
    return pc.split(formula), formula == direct


def hc_parents(label: UnipotentLabel) -> Sequence[UnipotentLabel]:
    """Levi labels whose HC induction contains ``label``."""
    from .symbols import labels_of_rank

    return [p for p in labels_of_rank(label.rank - 1) if label in hc_branch(p)]
