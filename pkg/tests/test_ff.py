import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.exact import Cyclotomic
from orthochar.ff import FieldElement, additive_char, field_make, find_nu, is_prime

# every prime power q <= 16
PRIME_POWERS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)]


def _field(p, k):
    return field_make(p, k)


def test_prime_fields_have_modulus_x():
    assert field_make(2, 1).modulus == (0, 1)
    assert field_make(5, 1).q == 5


def test_gf4_modulus():
    F = field_make(2, 2)
    assert F.modulus == (1, 1, 1)
    assert F.q == 4


def test_rejects_non_prime_and_large_q():
    with pytest.raises(ValueError):
        field_make(6, 1)
    with pytest.raises(ValueError):
        field_make(17, 1)


@pytest.mark.parametrize("p,k", PRIME_POWERS)
def test_field_axioms_exhaustive(p, k):
    F = _field(p, k)
    q = F.q
    R = range(q)
    for a, b in itertools.product(R, R):
        assert F.add[a, b] == F.add[b, a]
        assert F.mul[a, b] == F.mul[b, a]
        assert 0 <= F.add[a, b] < q and 0 <= F.mul[a, b] < q
    for a in R:
        assert F.add[a, 0] == a and F.mul[a, 1] == a
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1
    for a, b, c in itertools.product(R, R, R):
        assert F.add[F.add[a, b], c] == F.add[a, F.add[b, c]]
        assert F.mul[F.mul[a, b], c] == F.mul[a, F.mul[b, c]]
        assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]


@pytest.mark.parametrize("p,k", PRIME_POWERS)
def test_unit_group_is_cyclic(p, k):
    F = _field(p, k)
    g = F.primitive_element()
    seen, x = set(), 1
    for _ in range(F.q - 1):
        x = F.mul[x, g]
        seen.add(int(x))
    assert seen == set(range(1, F.q))


def test_prime_powers_cover_all_q_up_to_16():
    assert sorted(p**k for p, k in PRIME_POWERS) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize("q,expected", [(2, 1), (3, 2), (5, 1)])
def test_find_nu_values(q, expected):
    F = field_make(q, 1)
    assert find_nu(F).code == expected


@pytest.mark.parametrize("p,k", PRIME_POWERS)
def test_find_nu_is_irreducible_and_minimal(p, k):
    F = _field(p, k)
    nu = find_nu(F).code

    def has_root(c):
        return any(F.add[F.add[F.mul[x, x], x], c] == 0 for x in range(F.q))

    assert not has_root(nu)
    assert all(has_root(c) for c in range(nu))
    assert find_nu(F).code == nu


def test_additive_character_examples():
    F2 = field_make(2, 1)
    assert additive_char(F2)(1) == Cyclotomic.rational(-1)
    F4 = field_make(2, 2)
    omega = 2  # the class of X, a root of X^2+X+1
    assert F4.add[F4.mul[omega, omega], F4.add[omega, 1]] == 0
    # Tr(omega) = omega + omega^2 = 1 computed from the Frobenius orbit
    assert F4.add[omega, F4.mul[omega, omega]] == 1
    assert additive_char(F4)(omega) == Cyclotomic.rational(-1)
    for F in (F2, F4, field_make(5, 1)):
        assert additive_char(F)(0) == Cyclotomic.one()


@pytest.mark.parametrize("p,k", PRIME_POWERS)
def test_additive_character_homomorphism_and_sum(p, k):
    F = _field(p, k)
    xi = additive_char(F)
    total = Cyclotomic.zero()
    for a in range(F.q):
        total = total + xi(a)
        for b in range(F.q):
            assert xi(F.add[a, b]) == xi(a) * xi(b)
    assert total == Cyclotomic.zero()
    assert any(xi(a) != Cyclotomic.one() for a in range(F.q))


@given(st.sampled_from(PRIME_POWERS), st.data())
def test_field_element_operators(pk, data):
    F = _field(*pk)
    a = FieldElement(F, data.draw(st.integers(0, F.q - 1)))
    b = FieldElement(F, data.draw(st.integers(1, F.q - 1)))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * b.inverse() * b == a
    assert b ** (F.q - 1) == FieldElement(F, 1)


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
