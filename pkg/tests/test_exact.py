import cmath
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from orthochar.exact import (
    Cyclotomic,
    cyc_conj,
    cyc_lift,
    cyc_make,
    cyclotomic_polynomial,
    euler_phi,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 24]


def _embed(x: Cyclotomic) -> complex:
    """Numerical image under zeta_N -> exp(2 pi i / N); an independent check of canonical forms."""
    z = cmath.exp(2j * cmath.pi / x.N)
    return sum(c * z**i for i, c in enumerate(x.num)) / x.den


@st.composite
def cyclotomics(draw, conductors=CONDUCTORS):
    N = draw(st.sampled_from(conductors))
    terms = draw(
        st.dictionaries(
            st.integers(0, N - 1),
            st.fractions(min_value=-5, max_value=5, max_denominator=4),
            max_size=4,
        )
    )
    return cyc_make(N, terms)


def test_imaginary_unit():
    i = cyc_make(4, {1: 1})
    assert i * i == Cyclotomic.rational(-1)


def test_sum_of_cube_roots_is_zero():
    assert cyc_make(3, {0: 1, 1: 1, 2: 1}) == Cyclotomic.zero()


def test_rational_input():
    x = cyc_make(1, {0: Fraction(5, 3)})
    assert x.is_rational() and x.to_fraction() == Fraction(5, 3)


def test_conjugation_examples():
    z4 = Cyclotomic.root_of_unity(4, 1)
    assert cyc_conj(z4) == -z4
    r = Cyclotomic.rational(Fraction(7, 2))
    assert cyc_conj(r) == r
    x = cyc_make(5, {1: 1, 4: 1})
    assert cyc_conj(x) == x


def test_lift_examples():
    assert cyc_lift(Cyclotomic.rational(-1), 6) == Cyclotomic.rational(-1)
    assert cyc_lift(Cyclotomic.root_of_unity(3, 1), 6) == Cyclotomic.root_of_unity(6, 2)


@given(cyclotomics(), st.sampled_from([2, 3, 5]))
def test_lift_then_reduce_is_identity(x, k):
    y = x.lift(x.N * k)
    assert y == x
    r = y.reduce()
    assert r == x and r.N <= x.N


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    for n in range(1, 40):
        assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)


@given(cyclotomics(), cyclotomics(), cyclotomics())
def test_ring_axioms(x, y, z):
    zero, one = Cyclotomic.zero(), Cyclotomic.one()
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + zero == x and x * one == x
    assert x - x == zero
    assert x + (-x) == zero


@given(cyclotomics())
def test_inverse(x):
    if not x.is_zero():
        assert x * x.inverse() == Cyclotomic.one()
        assert x / x == Cyclotomic.one()


@given(cyclotomics(), cyclotomics())
def test_numerical_embedding_is_a_homomorphism(x, y):
    assert abs(_embed(x + y) - (_embed(x) + _embed(y))) < 1e-9
    assert abs(_embed(x * y) - _embed(x) * _embed(y)) < 1e-9
    assert abs(_embed(x.conj()) - _embed(x).conjugate()) < 1e-9


@given(cyclotomics(), cyclotomics())
def test_conjugation_is_a_ring_automorphism(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x


@given(st.sampled_from(CONDUCTORS), st.lists(st.integers(0, 23), max_size=5))
def test_norm_of_sum_of_roots_is_real_nonnegative(N, exps):
    x = Cyclotomic.zero()
    for e in exps:
        x = x + Cyclotomic.root_of_unity(N, e)
    n = x * x.conj()
    assert n == n.conj()
    assert _embed(n).real > -1e-9


@given(cyclotomics())
def test_equality_is_hash_consistent(x):
    y = x.lift(x.N * 2)
    assert x == y and hash(x) == hash(y)


@given(cyclotomics())
def test_json_round_trip(x):
    assert Cyclotomic.from_json(x.to_json()) == x
