import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthochar.clifford import unipotent_characters
from orthochar.matgrp import group_order_formula
from orthochar.ortho import parabolic, z_reps
from orthochar.symbols import (
    HC_IDENTITIES,
    PRINTED_SYMBOLS,
    IdentificationError,
    SymbolB,
    UnipotentLabel,
    degree_table,
    hc_branch,
    identify_unipotent,
    labels_of_rank,
    parse_label,
    parse_symbol,
    symbol_bipartition,
    unipotent_degree,
)


def test_printed_pairs_round_trip():
    assert len(PRINTED_SYMBOLS) == 18
    for label, sym in PRINTED_SYMBOLS.items():
        lab, s = parse_label(label), parse_symbol(sym)
        assert symbol_bipartition(s) == lab
        assert symbol_bipartition(lab) == s
        assert str(lab) == label


def test_symbol_examples():
    assert symbol_bipartition(parse_symbol("2/-")) == parse_label("[2,-,1]")
    assert symbol_bipartition(parse_symbol("0 1 2/1 2")) == parse_label("[-,1^2,1]")
    s = parse_symbol("0 1 2 3/1 2 3")
    lab = symbol_bipartition(s)
    assert lab == parse_label("[-,1^3,1]") and lab.rank == 3 and lab.defect == 1 and s.rank == 3


def test_label_parsing_forms():
    assert parse_label("[21,-,1]") == parse_label("[2 1,-,1]") == UnipotentLabel((2, 1), (), 1)
    assert parse_label("[1^3,-,1]") == UnipotentLabel((1, 1, 1), (), 1)
    with pytest.raises(ValueError):
        parse_label("[1,1]")


@st.composite
def labels(draw):
    m = draw(st.integers(0, 6))
    return draw(st.sampled_from(labels_of_rank(m)))


@given(labels())
def test_round_trip_property(lab):
    sym = symbol_bipartition(lab)
    assert symbol_bipartition(sym) == lab
    assert sym.rank == lab.rank and sym.defect == lab.defect


@given(labels())
def test_shift_invariance(lab):
    sym = symbol_bipartition(lab)
    shifted = SymbolB((0,) + tuple(x + 1 for x in sym.top), (0,) + tuple(x + 1 for x in sym.bottom))
    assert symbol_bipartition(shifted) == lab


def test_number_of_unipotent_characters():
    # SO_3: 2, SO_5: 6, SO_7: 12
    assert [len(labels_of_rank(m)) for m in (1, 2, 3)] == [2, 6, 12]
    assert {str(x) for x in labels_of_rank(2)} == {str(d.label) for d in degree_table(5)}
    assert {str(x) for x in labels_of_rank(3)} == {str(d.label) for d in degree_table(7)}


def test_degree_examples():
    for q in (2, 3, 4, 5, 7):
        assert unipotent_degree("[-,1^2,1]", q) == q**4
        assert unipotent_degree("[3,-,1]", q) == 1
    assert unipotent_degree("[1,2,1]", 2) == 84


@pytest.mark.parametrize("n", [3, 5, 7])
def test_degree_squares_bounded_by_order(n):
    m = (n - 1) // 2
    for q in (2, 3, 4, 5):
        total = sum(d(q) ** 2 for d in degree_table(n))
        assert total <= group_order_formula("SO", m, q)
        assert all(group_order_formula("SO", m, q) % d(q) == 0 for d in degree_table(n))


def test_hc_branch_examples():
    assert sorted(map(str, hc_branch("[1,-,1]"))) == sorted(["[2,-,1]", "[1^2,-,1]", "[1,1,1]"])
    assert sorted(map(str, hc_branch("[-,1,1]"))) == sorted(["[1,1,1]", "[-,1^2,1]", "[-,2,1]"])
    assert sorted(map(str, hc_branch("[-,-,3]"))) == sorted(["[1,-,3]", "[-,1,3]"])


def test_hc_identities_reproduced_by_branching():
    for parent, children in HC_IDENTITIES:
        assert sorted(map(str, hc_branch(parent))) == sorted(children)


@pytest.mark.parametrize("parent,children", HC_IDENTITIES)
def test_hc_identities_degree_bookkeeping(parent, children):
    """R(sigma)(1) = [G:P] sigma(1), with [G:P] = (q^{2m} - 1)/(q - 1)."""
    m = parse_label(parent).rank + 1
    for q in range(2, 10):
        index = (q ** (2 * m) - 1) // (q - 1)
        assert sum(unipotent_degree(c, q) for c in children) == index * unipotent_degree(parent, q)


@pytest.mark.parametrize("n,q", [(5, 2), (5, 3), (7, 2)])
def test_identified_degrees_and_hc_class_functions(n, q):
    ud = unipotent_characters(n, q)
    for lab in ud.labels():
        assert ud.character(lab).degree_int() == unipotent_degree(lab, q)
    assert all(ud.hc_identities().values())


def _z_values(n, q, label):
    ud = unipotent_characters(n, q)
    chi = ud.character(label)
    return [chi.value_at(z).to_fraction() for z in z_reps(parabolic(n, q)).z]


def test_identification_examples():
    assert unipotent_characters(5, 3).character("[1^2,-,1]").degree_int() == 15
    assert _z_values(5, 3, "[1^2,-,1]") == [-3, 3, 0]
    assert unipotent_characters(5, 2).character("[-,-,3]").degree_int() == 1
    assert _z_values(5, 2, "[-,-,3]") == [-1, -1, 1]
    ud = unipotent_characters(5, 2)
    assert all(v == 1 for v in ud.character("[2,-,1]").values)


def test_degree_alone_is_ambiguous_at_even_q():
    ud = unipotent_characters(5, 2)
    with pytest.raises(IdentificationError):
        identify_unipotent(ud.table, 5, 2, hc_induced={})
