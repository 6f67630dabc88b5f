import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.ff import field_make, find_nu
from orthochar.matgrp import (
    BoundExceeded,
    QuadraticForm,
    class_fusion,
    closure,
    conjugacy_classes,
    group_order_formula,
    is_isometry,
    quad_eval,
    subgroup,
)
from orthochar.ortho import build_context, field_for_q, parabolic, parabolic_order, so_generators, so_group


def _q_odd(v):
    """Q_{2m+1} on [v_m..v_1, v_0, v_1'..v_m'] over a prime field, evaluated by hand."""
    n = len(v)
    m = n // 2
    return sum(v[i] * v[n - 1 - i] for i in range(m)) + v[m] * v[m]


def test_quad_eval_examples():
    F = field_make(3, 1)
    Q5 = QuadraticForm(F, "odd", 5)
    assert quad_eval(Q5, [0, 0, 1, 0, 0]) == 1
    assert quad_eval(Q5, [0] * 5) == 0
    for q in (2, 3, 5):
        Fq = field_make(q, 1)
        nu = find_nu(Fq).code
        Qm = QuadraticForm(Fq, "minus", 4, nu=nu)
        assert quad_eval(Qm, [0, 0, 1, 0]) == nu


@pytest.mark.parametrize("q", [2, 3, 5])
def test_quad_eval_matches_hand_formula(q):
    F = field_make(q, 1)
    Q5 = QuadraticForm(F, "odd", 5)
    for v in itertools.product(range(q), repeat=5):
        assert quad_eval(Q5, list(v)) == _q_odd(v) % q


def test_is_isometry_examples():
    F = field_make(3, 1)
    Q5 = QuadraticForm(F, "odd", 5)
    assert is_isometry(Q5, np.eye(5, dtype=np.uint8))
    x = np.eye(5, dtype=np.uint8)
    x[0, 1] = 1
    assert not is_isometry(Q5, x)
    # independent oracle: some vector has Q(xv) != Q(v)
    witnesses = [v for v in itertools.product(range(3), repeat=5) if _q_odd(x.astype(int) @ v % 3) % 3 != _q_odd(v) % 3]
    assert witnesses


@pytest.mark.parametrize("n,q", [(5, 2), (5, 3), (7, 2)])
def test_weyl_element_s_is_isometry(n, q):
    pd = parabolic(n, q)
    assert is_isometry(pd.ctx.Q, pd.s)
    assert is_isometry(pd.ctx.Q, pd.t)


def _exhaustive_isometry(Q, x):
    F = Q.F
    d = Q.dim
    for v in itertools.product(range(F.q), repeat=d):
        w = [0] * d
        for i in range(d):
            acc = 0
            for j in range(d):
                acc = int(F.add[acc, F.mul[int(x[i, j]), v[j]]])
            w[i] = acc
        if quad_eval(Q, w) != quad_eval(Q, list(v)):
            return False
    return True


@given(st.sampled_from([(3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3)]), st.data())
def test_is_isometry_agrees_with_exhaustive_check(nq, data):
    n, q = nq
    F = field_for_q(q)
    Q = QuadraticForm(F, "odd", n)
    if data.draw(st.booleans()):
        gens = so_generators(build_context(n, q))
        x = np.eye(n, dtype=np.uint8)
        ar = build_context(n, q).ar
        for i in data.draw(st.lists(st.integers(0, len(gens) - 1), max_size=6)):
            x = ar.mul(x, gens[i])
    else:
        x = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n * n, max_size=n * n)), dtype=np.uint8).reshape(n, n)
    assert is_isometry(Q, x) == _exhaustive_isometry(Q, x)


def test_order_formula_spot_values():
    assert group_order_formula("SO", 2, 2) == 720
    assert group_order_formula("SO", 3, 2) == 1451520
    assert group_order_formula("GO-", 2, 2) == 120
    assert group_order_formula("SO", 1, 2) == 6


def test_closure_trivial_and_small():
    F = field_make(2, 1)
    assert closure(F, 3, []).order == 1
    ctx3 = build_context(3, 2)
    assert closure(F, 3, so_generators(ctx3)).order == group_order_formula("SO", 1, 2)
    ctx5 = build_context(5, 2)
    assert closure(F, 5, so_generators(ctx5)).order == group_order_formula("SO", 2, 2)


def test_closure_bound():
    ctx5 = build_context(5, 3)
    with pytest.raises(BoundExceeded):
        closure(ctx5.F, 5, so_generators(ctx5), bound=1000)


def test_closure_independent_of_generator_order():
    ctx = build_context(5, 2)
    gens = so_generators(ctx)
    a = closure(ctx.F, 5, gens)
    b = closure(ctx.F, 5, list(reversed(gens)))
    assert a.same_elements(b)


def _brute_force_classes(G):
    """Conjugacy classes by direct conjugation over all elements."""
    ar = G.ar
    remaining = set(range(G.order))
    sizes = []
    while remaining:
        i = min(remaining)
        conj = set()
        for g in G.elems:
            conj.add(int(G.index_of(ar.conj(g, G.elems[i : i + 1]))[0]))
        remaining -= conj
        sizes.append(len(conj))
    return sorted(sizes)


def test_classes_u5_2_abelian():
    U = parabolic(5, 2).U
    assert U.order == 8
    assert U.num_classes == 8


def test_classes_p3_3():
    P3 = parabolic(3, 3).P
    assert P3.order == 6
    assert P3.num_classes == 3
    assert sorted(P3.class_sizes()) == _brute_force_classes(P3)


def test_classes_so5_2():
    G = so_group(build_context(5, 2))
    assert G.num_classes == 11
    # SO_5(2) = Sp_4(2) = S_6: class count = number of partitions of 6
    parts = [p for p in itertools.product(range(7), repeat=6) if sum(p) == 6 and list(p) == sorted(p, reverse=True)]
    assert len(parts) == 11
    assert sorted(G.class_sizes()) == _brute_force_classes(G)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (5, 2), (5, 3)])
def test_class_sizes_partition_the_group(n, q):
    pd = parabolic(n, q)
    for H in (pd.P, pd.U, pd.L):
        sizes = H.class_sizes()
        assert sum(sizes) == H.order
        assert all(H.order % s == 0 for s in sizes)


def test_fusion_of_u_into_p():
    pd = parabolic(5, 2)
    fus = class_fusion(pd.U, pd.P)
    assert len(set(fus)) == 4


def test_fusion_of_trivial_subgroup():
    pd = parabolic(5, 2)
    triv = subgroup(pd.P, generators=[np.eye(5, dtype=np.uint8)])
    assert triv.order == 1
    assert class_fusion(triv, pd.P) == [0]


def test_stabilizer_of_isotropic_line_is_p():
    ctx = build_context(5, 2)
    G = so_group(ctx)

    def fixes_line(X):
        return (X[:, 1:, 0] == 0).all(axis=1)

    S = subgroup(G, predicate=fixes_line)
    assert S.order == 48 == parabolic_order(2, 2)
    assert S.same_elements(parabolic(5, 2).P)


def test_center_of_u_is_u():
    U = parabolic(5, 3).U
    ar = U.ar
    for g in U.elems:
        assert U.index_of(ar.conj(g, U.elems)).tolist() == list(range(U.order))


def test_levi_derived_subgroup_order():
    pd = parabolic(5, 3)
    assert pd.Lp.order == 24 == group_order_formula("SO", 1, 3)


def test_classes_are_cached_consistently():
    G = parabolic(5, 3).P
    assert conjugacy_classes(G) is G.classes
