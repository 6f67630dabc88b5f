from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.chartab import character_table, inner_product, is_irreducible, restrict
from orthochar.clifford import (
    KINDS,
    component_split,
    degrees_from_values,
    expected_m_det,
    irr_parabolic,
    m_matrix_det,
    parabolic_characters,
    psi,
    steinberg_restriction,
    unipotent_characters,
    value_table_row,
    values_on_z,
    verify_lgp,
    verify_prop51,
    verify_theorem42,
)
from orthochar.ortho import parabolic

NQ = [(5, 2), (5, 3), (7, 2)]


@pytest.mark.parametrize("n,q", NQ + [(3, 2), (3, 3)])
def test_completeness(n, q):
    irr = irr_parabolic(n, q)
    P = parabolic(n, q).P
    assert len(irr) == P.num_classes
    assert sum(chi.degree_int() ** 2 for _, chi in irr) == P.order
    chars = [chi for _, chi in irr]
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            assert inner_product(a, b) == (1 if i == j else 0)


def test_type_counts():
    assert Counter(lab.kind for lab, _ in irr_parabolic(5, 2)) == {"1": 3, "0": 2, "+": 2, "-": 3}
    assert len(irr_parabolic(5, 3)) == 22
    # squared-degree totals per type: 6 + 18 + 18 + 6 = 48 and 48 + 384 + 576 + 288 = 1296
    for (n, q), totals in {(5, 2): [6, 18, 18, 6], (5, 3): [48, 384, 576, 288]}.items():
        by_kind = Counter()
        for lab, chi in irr_parabolic(n, q):
            by_kind[lab.kind] += chi.degree_int() ** 2
        assert [by_kind[k] for k in KINDS] == totals


def test_n3_types():
    pc = parabolic_characters(3, 3)
    assert pc.kinds() == ("1", "+")
    assert {str(lab) for lab, _ in pc.irr} >= {"1_P3", "mu"}


def test_degree_examples():
    pc = parabolic_characters(5, 3)
    assert pc.by_name("0:1_P3").degree_int() == 8
    assert pc.by_name("+:1").degree_int() == 12
    pc2 = parabolic_characters(5, 2)
    xis = [chi for lab, chi in pc2.irr if lab.kind == "-" and lab.payload.startswith("xi")]
    assert len(xis) == 1 and xis[0].degree_int() == 2


def test_every_constructed_character_is_irreducible_at_5_3():
    assert all(is_irreducible(chi) for _, chi in irr_parabolic(5, 3))


@given(st.sampled_from([(5, 2), (5, 3)]), st.sampled_from(KINDS), st.data())
def test_psi_is_additive(nq, kind, data):
    pc = parabolic_characters(*nq)
    pays = pc.payload_irreducibles(kind)
    a = pays[data.draw(st.integers(0, len(pays) - 1))][1]
    b = pays[data.draw(st.integers(0, len(pays) - 1))][1]
    assert psi(*nq, kind, a + b) == psi(*nq, kind, a) + psi(*nq, kind, b)


@pytest.mark.parametrize("n,q", NQ)
def test_values_on_z_match_table(n, q):
    pc = parabolic_characters(n, q)
    m = (n - 1) // 2
    for lab, chi in pc.irr:
        d = pc.payload_degree(lab)
        want = tuple(v * d for v in value_table_row(lab.kind, m, q))
        got = tuple(v.to_fraction() for v in values_on_z(chi, pc))
        assert got == want, lab


def test_value_table_examples():
    pc = parabolic_characters(5, 3)
    for lab, chi in pc.irr:
        z0, z1, z2 = values_on_z(chi, pc)
        if lab.kind == "0":
            assert z0.to_fraction() == -pc.payload_degree(lab)
        if lab.kind == "+":
            assert z2.is_zero()
    for n, q in ((5, 2), (7, 2)):
        pc = parabolic_characters(n, q)
        m = (n - 1) // 2
        for lab, chi in pc.irr:
            if lab.kind == "+":
                Q = q ** (m - 1)
                assert values_on_z(chi, pc)[1].to_fraction() == -Fraction(1, 2) * Q * (Q + 1) * pc.payload_degree(lab)


def test_split_of_type_1_irreducible():
    pc = parabolic_characters(5, 3)
    for lab, chi in pc.irr:
        if lab.kind == "1":
            sp = component_split(5, 3, chi)
            assert sp.components["1"] == chi
            assert all(sp.components[k].is_zero() for k in ("0", "+", "-"))


def test_split_examples():
    st52 = restrict(unipotent_characters(5, 2).character("[-,1^2,1]"), parabolic(5, 2).P)
    assert component_split(5, 2, st52).degrees() == (2, 2, 2, 2)
    c = restrict(unipotent_characters(5, 3).character("[1,1,1]"), parabolic(5, 3).P)
    assert component_split(5, 3, c).degrees() == (4, 1, 1, 0)


def test_degrees_from_values_examples():
    for m, q in ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3)):
        assert degrees_from_values(1, 1, 1, 1, m, q) == (1, 0, 0, 0)
    assert degrees_from_values(24, 6, 3, 0, 2, 3) == (4, 1, 1, 0)


@pytest.mark.parametrize("n,q", NQ)
def test_two_routes_agree_on_all_of_irr_g(n, q):
    ud = unipotent_characters(n, q)
    pc = parabolic_characters(n, q)
    m = (n - 1) // 2
    for chi in ud.table:
        res = restrict(chi, pc.P)
        vals = values_on_z(res, pc)
        assert degrees_from_values(res.degree_int(), *vals, m, q) == pc.split(res).degrees()


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)])
def test_m_matrix_determinant(m, q):
    assert m_matrix_det(m, q) == expected_m_det(m, q)


def test_expected_determinants():
    assert expected_m_det(2, 3) == 729
    assert expected_m_det(2, 2) == 64
    assert expected_m_det(3, 2) == 2048


def test_theorem42_b_degree():
    reps = verify_theorem42(5, 2, "b", "1_P3")
    assert len(reps) == 1 and reps[0].holds
    assert reps[0].details["lhs_degree"] == reps[0].details["rhs_degree"] == 6


@pytest.mark.parametrize("n,q,parts", [(5, 2, "abd"), (5, 3, "abd"), (7, 2, "abcde")])
def test_theorem42_all_parts(n, q, parts):
    for part in parts:
        reps = verify_theorem42(n, q, part)
        assert reps, part
        assert all(r.holds for r in reps), [r.claim for r in reps if not r.holds]


def test_theorem42_c_degrees():
    q, m = 2, 3
    sub = parabolic_characters(5, q)
    for r in verify_theorem42(7, q, "c"):
        nu_label = r.claim.split("nu=")[1]
        lab = next(lab for lab, _ in sub.irr if str(lab) == nu_label)
        nu0 = sub.payload_degree(lab)
        want = q * (q ** (2 * m - 2) - 1) * (q ** (2 * m - 4) - 1) // (q - 1) * nu0
        assert r.details["lhs_degree"] == r.details["rhs_degree"] == want


def test_theorem42_a_t_conjugate():
    pc = parabolic_characters(5, 3)
    reps = verify_theorem42(5, 3, "a", "[-,1,1]")
    assert len(reps) == 1 and reps[0].holds
    assert pc.steinberg_L.kernel_contains(pc.pd.A)


@pytest.mark.parametrize("n,q", NQ)
def test_lgp_for_every_unipotent(n, q):
    pc = parabolic_characters(n, q)
    for lab, sigma in pc.levi_unipotents().items():
        assert verify_lgp(n, q, sigma).holds, lab


@pytest.mark.parametrize("n,q", NQ)
def test_prop51(n, q):
    reps = verify_prop51(n, q)
    assert reps and all(r.holds for r in reps)


def _all_xi(pc, eps):
    return {k: 1 for k, _ in pc.pm_irreducibles(eps) if k.startswith("xi")}


def test_steinberg_odd_q():
    sp, same = steinberg_restriction(5, 3)
    assert same
    pc = parabolic_characters(5, 3)
    assert sp.payload("1") == {"[-,1,1]": 1}
    assert sp.payload("0") == {"1_P3": 1, "mu": 1}
    assert sp.payload("+") == {"1": 1, "nu1": 1, "nu3": 1, **_all_xi(pc, "+")}
    assert sp.payload("-") == {"nu3": 1, **_all_xi(pc, "-")}


def test_steinberg_even_q():
    sp, same = steinberg_restriction(5, 2)
    assert same
    pc = parabolic_characters(5, 2)
    assert sp.payload("+") == {"1": 1, "nu1": 1, **_all_xi(pc, "+")}
    assert "nu3" not in sp.payload("+")
    assert sp.payload("-") == _all_xi(pc, "-")


@pytest.mark.parametrize("n,q", NQ)
def test_steinberg_vanishes_on_z(n, q):
    st_label = "[-,1^%d,1]" % ((n - 1) // 2) if n > 5 else "[-,1^2,1]"
    chi = unipotent_characters(n, q).character(st_label)
    pc = parabolic_characters(n, q)
    assert all(v.is_zero() for v in values_on_z(chi, pc))
    assert steinberg_restriction(n, q)[1]


def test_nu3_is_linear_and_kernel_avoids_k():
    pc = parabolic_characters(5, 3)
    for eps in ("+", "-"):
        nu3 = pc.pm_character(eps, "nu3")
        assert nu3.degree_int() == 1
        L = nu3.group
        assert inner_product(restrict(pc.steinberg_L, L), nu3) == 1


def test_levi_table_matches_dixon():
    pc = parabolic_characters(5, 3)
    L = pc.pd.L
    direct = character_table(L)
    built = [chi for _, chi in pc.levi_irreducibles]
    assert len(built) == len(direct)
    assert all(any(chi == d for d in direct) for chi in built)
