import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.exact import Cyclotomic
from orthochar.ff import field_make
from orthochar.matgrp import QuadraticForm, closure, mat_det, quad_eval
from orthochar.ortho import (
    build_context,
    inertia_orders,
    lambda_chars,
    lemma4_subgroups,
    orbit_structure,
    parabolic,
    s_batch,
    so_group,
    symplectic_isomorphism,
    torus_generators,
    u_batch,
    u_elem,
    weyl_elements,
    z_reps,
)

NQ = [(5, 2), (5, 3), (7, 2)]


def test_nu_prime_choices():
    for q in (2, 4):
        assert build_context(5, q).nu_prime == 1
    ctx = build_context(5, 3)
    assert ctx.nu_prime in (1, 2)  # 2 is the non-square of GF(3)


def test_b3_over_gf2_by_exhaustive_search():
    F = field_make(2, 1)
    ctx = build_context(5, 2)
    Q3 = QuadraticForm(F, "odd", 3)
    Q3t = QuadraticForm(F, "odd", 3, nu=ctx.nu, twisted=True)
    vecs = list(itertools.product(range(2), repeat=3))
    invertible, solutions = 0, []
    for entries in itertools.product(range(2), repeat=9):
        b = np.array(entries, dtype=np.uint8).reshape(3, 3)
        if mat_det(F, b) == 0:
            continue
        invertible += 1
        if all(quad_eval(Q3t, list(b.astype(int) @ v % 2)) == quad_eval(Q3, list(v)) for v in vecs):
            solutions.append(tuple(entries))
    assert invertible == 168
    assert solutions
    assert tuple(ctx.b3.reshape(-1).tolist()) == min(solutions)


def test_u_identity():
    ctx = build_context(5, 3)
    assert np.array_equal(u_elem(ctx, [0, 0, 0]).a, np.eye(5, dtype=np.uint8))


@given(st.sampled_from(NQ), st.data())
def test_u_is_a_homomorphism(nq, data):
    n, q = nq
    ctx = build_context(n, q)
    F = ctx.F
    v = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n - 2, max_size=n - 2)))
    w = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n - 2, max_size=n - 2)))
    uv, uw = u_batch(ctx, v[None])[0], u_batch(ctx, w[None])[0]
    assert np.array_equal(ctx.ar.mul(uv, uw), u_batch(ctx, F.add[v, w][None])[0])


@given(st.sampled_from(NQ), st.data())
def test_levi_action_on_u(nq, data):
    n, q = nq
    ctx = build_context(n, q)
    F, ar = ctx.F, ctx.ar
    sub = so_group(build_context(n - 2, q))
    x = sub.elems[data.draw(st.integers(0, sub.order - 1))]
    a = data.draw(st.integers(1, q - 1))
    v = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n - 2, max_size=n - 2)))
    s = s_batch(ctx, x[None], np.array([a]))[0]
    lhs = ar.conj(s, u_batch(ctx, v[None]))[0]
    xv = np.zeros(n - 2, dtype=np.int64)
    for j in range(n - 2):
        xv = F.add[xv, F.mul[int(v[j]), x[:, j].astype(np.int64)]]
    assert np.array_equal(lhs, u_batch(ctx, F.mul[a, xv][None])[0])


def test_s_block_shape():
    ctx = build_context(5, 3)
    s = weyl_elements(ctx)["s"]
    J2 = np.array([[0, 1], [1, 0]])
    assert np.array_equal(s[:2, :2], J2)
    assert np.array_equal(s[3:, 3:], J2)
    assert s[2, 2] == 1
    assert np.count_nonzero(s) == 5


@pytest.mark.parametrize("n,q", NQ)
def test_t_normalises_the_torus(n, q):
    ctx = build_context(n, q)
    T = closure(ctx.F, n, torus_generators(ctx))
    t = weyl_elements(ctx)["t"]
    assert T.contains_all(ctx.ar.conj(t, T.elems))


@pytest.mark.parametrize("n,q", NQ)
def test_lambda_values(n, q):
    ctx = build_context(n, q)
    lam = lambda_chars(ctx)
    d, m = n - 2, ctx.m
    zp = Cyclotomic.root_of_unity(ctx.F.p, 1)
    e_last = np.zeros(d, dtype=np.int64)
    e_last[d - 1] = 1
    e0 = np.zeros(d, dtype=np.int64)
    e0[m - 1] = 1
    assert lam["0"](u_elem(ctx, e_last)) == zp
    assert lam["+"](u_elem(ctx, e0)) == zp
    for k in lam:
        assert lam[k](np.eye(n, dtype=np.uint8)) == Cyclotomic.one()


@pytest.mark.parametrize("n,q", [(5, 2), (5, 3), (5, 4), (5, 5), (7, 2), (7, 3)])
def test_four_orbits(n, q):
    ctx = build_context(n, q)
    o = orbit_structure(ctx)
    assert o.num_orbits == 4
    assert sum(o.orbit_sizes.values()) == q ** (n - 2)
    assert o.inertia_orders == o.expected_inertia


def test_inertia_group_orders_at_5_3():
    pd = parabolic(5, 3)
    assert pd.Ptilde.order == 6 == inertia_orders(2, 3)["Ptilde"]
    assert pd.Lminus.order == 8 == inertia_orders(2, 3)["L-"]


def test_centralizers_at_5_3():
    zd = z_reps(parabolic(5, 3))
    assert zd.centralizer_orders == [162, 108, 216]
    assert tuple(zd.centralizer_orders) == zd.expected_centralizers
    assert 1 + sum(zd.class_sizes) == 27


@pytest.mark.parametrize("n,q", NQ)
def test_centralizers_match_formula(n, q):
    pd = parabolic(n, q)
    zd = z_reps(pd)
    assert tuple(zd.centralizer_orders) == zd.expected_centralizers
    assert 1 + sum(zd.class_sizes) == q ** (n - 2)
    assert len(set(zd.classes)) == 3


@pytest.mark.parametrize("n,q", NQ)
def test_subgroup_identities(n, q):
    pd = parabolic(n, q)
    out = lemma4_subgroups(pd)
    failed = [claim for claim, ok in out["checks"] if not ok]
    assert failed == []
    assert out["sU_cap_U"].shape[0] == q
    assert pd.U.order == q * out["R"].order
    dc = out["double_cosets"]
    assert dc["num_orbits"] == 3 and dc["partition_ok"]


def test_rs_identities_need_m_3():
    claims = [c for c, _ in lemma4_subgroups(parabolic(7, 2))["checks"]]
    claims5 = [c for c, _ in lemma4_subgroups(parabolic(5, 2))["checks"]]
    assert len(claims) > len(claims5)


def test_even_q_symplectic_isomorphism():
    assert all(symplectic_isomorphism(5, 2).values())
    with pytest.raises(ValueError):
        symplectic_isomorphism(5, 3)


def test_n3_has_trivial_plus_levi():
    pd = parabolic(3, 3)
    assert pd.P.order == 6
    assert pd.Lplus.order == 1
