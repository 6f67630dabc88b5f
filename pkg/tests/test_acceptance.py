"""Acceptance criteria 1-13, each printing one PASS/FAIL line.

All comparisons are exact.  Run with ``pytest tests/test_acceptance.py -v``.
"""

import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from orthochar.clifford import m_matrix_det, parabolic_characters
from orthochar.matgrp import group_order_formula
from orthochar.ortho import build_context, go_group, parabolic, parabolic_order, so_group
from orthochar.verify import (
    MATCH,
    check_centralizers,
    check_component_degrees,
    check_irr_parabolic,
    check_orbits,
    check_steinberg,
    check_subgroups,
    check_symbol_tables,
    check_symbols,
    check_theorem42,
    check_values_on_z,
    compute_new_pm_components,
    verify_table_7_2,
    verify_table_8_2,
)

NQ = [(5, 2), (5, 3), (7, 2)]
BOUND = 2_000_000


@pytest.fixture
def verdict(request, capsys):
    """Print one PASS/FAIL line for the criterion, then fail if any item failed."""
    failures: list[str] = []
    yield failures
    name = request.node.name.removeprefix("test_")
    with capsys.disabled():
        line = f"{'PASS' if not failures else 'FAIL'} {name}"
        print("\n" + line + ("" if not failures else ": " + "; ".join(failures)))
    assert not failures


def _collect(failures, reports):
    assert reports
    for r in reports:
        if r.status != MATCH:
            failures.append(f"{r.claim} (n={r.n}, q={r.q}): {r.reason or r.computed}")


def test_criterion_01_orders(verdict):
    def cmp(what, formula, group_fn):
        if formula > BOUND:
            return
        got = group_fn().order
        if got != formula:
            verdict.append(f"{what}: {got} != {formula}")

    for q in (2, 3, 4, 5):
        cmp(f"SO3({q})", group_order_formula("SO", 1, q), lambda: so_group(build_context(3, q)))
        cmp(f"SO5({q})", group_order_formula("SO", 2, q), lambda: so_group(build_context(5, q)))
        cmp(f"P3({q})", parabolic_order(1, q), lambda: parabolic(3, q).P)
        cmp(f"P5({q})", parabolic_order(2, q), lambda: parabolic(5, q).P)
        for kind, tag in (("plus", "GO+"), ("minus", "GO-")):
            for dim in (2, 4):
                cmp(f"{tag}_{dim}({q})", group_order_formula(tag, dim // 2, q), lambda: go_group(q, kind, dim))
    cmp("P7(2)", parabolic_order(3, 2), lambda: parabolic(7, 2).P)
    cmp("SO7(2)", group_order_formula("SO", 3, 2), lambda: parabolic(7, 2).G)
    spots = {
        "SO5(2)": (parabolic(5, 2).G.order, 720),
        "SO7(2)": (parabolic(7, 2).G.order, 1451520),
        "GO4-(2)": (go_group(2, "minus", 4).order, 120),
    }
    verdict.extend(f"{k}: {a} != {b}" for k, (a, b) in spots.items() if a != b)


def test_criterion_02_four_orbits(verdict):
    for n, q in [(5, 2), (5, 3), (5, 4), (5, 5), (7, 2), (7, 3)]:
        _collect(verdict, check_orbits(n, q))


def test_criterion_03_clifford_completeness(verdict):
    for n, q in NQ:
        _collect(verdict, check_irr_parabolic(n, q))
    for (n, q), count in (((5, 2), 10), ((5, 3), 22)):
        got = len(parabolic_characters(n, q).irr)
        if got != count:
            verdict.append(f"|Irr(P_{n})| at q={q}: {got} != {count}")


def test_criterion_04_values_on_z(verdict):
    for n, q in NQ:
        _collect(verdict, check_values_on_z(n, q))


def test_criterion_05_centralizers(verdict):
    for n, q in NQ:
        _collect(verdict, check_centralizers(n, q))


def test_criterion_06_subgroup_identities(verdict):
    for n, q in NQ:
        _collect(verdict, check_subgroups(n, q))


def test_criterion_07_restriction_of_induced(verdict):
    for n, q in NQ:
        reps = check_theorem42(n, q)
        parts = {r.claim for r in reps}
        want = 6 if n == 7 else 4
        if len(parts) != want:
            verdict.append(f"n={n} q={q}: {len(parts)} identity groups checked, expected {want}")
        _collect(verdict, reps)


def test_criterion_08_steinberg(verdict):
    for n, q in NQ:
        _collect(verdict, check_steinberg(n, q))


def test_criterion_09_so5_table(verdict):
    for q in (2, 3):
        reps, records = verify_table_7_2(q)
        _collect(verdict, reps)
        has_nu3 = any("nu3" in r.components.get(k, {}) for r in records for k in "+-")
        if has_nu3 != (q % 2 == 1):
            verdict.append(f"q={q}: bracketed nu3 terms present = {has_nu3}")


def test_criterion_10_component_degrees(verdict):
    for n, q in NQ:
        _collect(verdict, check_component_degrees(n, q))
    hand = {(2, 3): Fraction(3**6), (2, 2): Fraction(2**7, 2), (3, 2): Fraction(2**12, 2)}
    for (m, q), want in hand.items():
        if m_matrix_det(m, q) != want:
            verdict.append(f"det(M) m={m} q={q}: {m_matrix_det(m, q)} != {want}")


def test_criterion_11_so7_table(verdict):
    reps, records = verify_table_8_2(2)
    _collect(verdict, reps)
    if len(records) != 12:
        verdict.append(f"{len(records)} SO7 labels decomposed, expected 12")
    _, new_reps = compute_new_pm_components(2)
    _collect(verdict, new_reps)


def test_criterion_12_symbols(verdict):
    _collect(verdict, check_symbol_tables())
    for n, q in NQ:
        _collect(verdict, check_symbols(n, q))


def test_criterion_13_property_suites_in_isolation(verdict):
    here = Path(__file__).parent
    files = [str(here / f) for f in ("test_ff.py", "test_exact.py", "test_chartab.py")]
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *files],
        capture_output=True,
        text=True,
        cwd=here.parent,
    )
    if proc.returncode != 0:
        verdict.append(proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-500:])
