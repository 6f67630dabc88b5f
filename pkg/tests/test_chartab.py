from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.chartab import (
    character_table,
    conjugate,
    decompose,
    induce,
    inner_product,
    is_irreducible,
    regular,
    restrict,
    trivial,
)
from orthochar.clifford import parabolic_characters
from orthochar.exact import Cyclotomic
from orthochar.ff import field_make
from orthochar.matgrp import closure, subgroup
from orthochar.ortho import build_context, go_group, parabolic, so_group


def _cyclic4():
    F = field_make(5, 1)
    return closure(F, 1, [np.array([[2]], dtype=np.uint8)])


def _tables():
    pd52, pd53 = parabolic(5, 2), parabolic(5, 3)
    groups = {
        "C4": _cyclic4(),
        "P3(3)": parabolic(3, 3).P,
        "P5(2)": pd52.P,
        "P5(3)": pd53.P,
        "L5(3)": pd53.L,
        "SO5(2)": so_group(build_context(5, 2)),
        "GO4-(2)": go_group(2, "minus", 4),
        "GO4+(3)": go_group(3, "plus", 4),
    }
    return {k: character_table(G) for k, G in groups.items()}


TABLES = _tables()
SUBGROUP_PAIRS = [
    ("U5(3)", lambda: parabolic(5, 3).U, lambda: parabolic(5, 3).P),
    ("L5(3)", lambda: parabolic(5, 3).L, lambda: parabolic(5, 3).P),
    ("I0(5,3)", lambda: parabolic(5, 3).I0, lambda: parabolic(5, 3).P),
    ("P5(2)", lambda: parabolic(5, 2).P, lambda: so_group(build_context(5, 2))),
    ("L5(2)", lambda: parabolic(5, 2).L, lambda: so_group(build_context(5, 2))),
]


def test_cyclic_group_of_order_4():
    T = TABLES["C4"]
    assert len(T) == 4 and T.degrees() == [1, 1, 1, 1]
    i = Cyclotomic.root_of_unity(4, 1)
    values = {v for chi in T for v in chi.values}
    assert values == {Cyclotomic.one(), -Cyclotomic.one(), i, -i}


def test_p3_3_degrees():
    assert sorted(TABLES["P3(3)"].degrees()) == [1, 1, 2]


def test_so5_2_matches_s6():
    T = TABLES["SO5(2)"]
    assert len(T) == 11
    assert sum(d * d for d in T.degrees()) == 720
    # classical degrees of the symmetric group S_6 (= Sp_4(2))
    assert sorted(T.degrees()) == [1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16]


@pytest.mark.parametrize("name", sorted(TABLES))
def test_orthogonality(name):
    T = TABLES[name]
    G = T.group
    k = G.num_classes
    assert len(T) == k
    for i in range(k):
        for j in range(k):
            assert inner_product(T[i], T[j]) == (1 if i == j else 0)
    cent = G.centralizer_orders()
    for a in range(k):
        for b in range(k):
            col = sum((chi[a] * chi[b].conj() for chi in T), Cyclotomic.zero())
            assert col == (Cyclotomic.rational(cent[a]) if a == b else Cyclotomic.zero())
    assert all(G.order % d == 0 for d in T.degrees())


def test_inner_product_basics():
    G = TABLES["SO5(2)"].group
    one = trivial(G)
    assert inner_product(one, one) == 1
    for chi in TABLES["SO5(2)"]:
        assert inner_product(regular(G), chi) == chi.degree_int()


def test_induction_examples():
    G = TABLES["SO5(2)"].group
    P = parabolic(5, 2).P
    ind = induce(trivial(P), G)
    assert ind.degree_int() == 720 // 48 == 15
    assert inner_product(ind, trivial(G)) == 1
    assert induce(trivial(G), G) == trivial(G)
    triv = subgroup(G, generators=[np.eye(5, dtype=np.uint8)])
    assert induce(trivial(triv), G) == regular(G)


def test_restriction_of_trivial():
    G = TABLES["SO5(2)"].group
    K = parabolic(5, 2).P
    assert restrict(trivial(G), K) == trivial(K)


def test_is_irreducible():
    G = TABLES["SO5(2)"].group
    one = trivial(G)
    assert is_irreducible(one)
    assert not is_irreducible(one + one)
    assert (one + one).norm() == 4


def test_t_conjugate_of_steinberg_of_levi():
    pc = parabolic_characters(5, 3)
    St = pc.steinberg_L
    assert conjugate(St, pc.pd.t) == St


@given(st.sampled_from(range(len(SUBGROUP_PAIRS))), st.data())
def test_frobenius_reciprocity(pair, data):
    _, mkH, mkG = SUBGROUP_PAIRS[pair]
    H, G = mkH(), mkG()
    TH, TG = character_table(H), character_table(G)
    phi = TH[data.draw(st.integers(0, len(TH) - 1))]
    chi = TG[data.draw(st.integers(0, len(TG) - 1))]
    assert inner_product(induce(phi, G), chi) == inner_product(phi, restrict(chi, H))


@given(st.sampled_from(sorted(TABLES)), st.data())
def test_decompose_recovers_multiplicities(name, data):
    T = TABLES[name]
    mult = data.draw(st.lists(st.integers(0, 3), min_size=len(T), max_size=len(T)))
    chi = sum((c * T[i] for i, c in enumerate(mult) if c), 0 * T[0])
    assert decompose(chi, T) == mult


def test_inner_product_is_rational_on_characters():
    T = TABLES["P5(3)"]
    for a in T:
        for b in T:
            assert isinstance(inner_product(a * b, a), Fraction)
