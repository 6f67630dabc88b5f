"""Exact character theory of the maximal parabolic P_n of SO_n(q), n odd.

Modules:
    ff        finite fields GF(q), additive characters
    exact     exact arithmetic in cyclotomic fields
    matgrp    enumerated matrix groups, classes, fusion
    chartab   class functions and Dixon character tables
    ortho     SO_n(q), the parabolic P_n and its subgroups
    clifford  Irr(P_n) by Clifford theory, restriction identities
    symbols   Lusztig symbols and unipotent labels
    verify    verification suites; ``cli`` is the command line front end
"""

from .chartab import CharacterTable, ClassFunction, character_table, induce, inner_product, restrict
from .clifford import (
    ComponentSplit,
    IrrPLabel,
    component_split,
    degrees_from_values,
    irr_parabolic,
    parabolic_characters,
    psi,
    unipotent_characters,
    verify_theorem42,
)
from .exact import Cyclotomic
from .ff import FieldSpec, field_make
from .matgrp import FiniteMatrixGroup, QuadraticForm, group_order_formula
from .ortho import build_context, parabolic, so_group
from .symbols import UnipotentLabel, parse_label, symbol_bipartition
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "CharacterTable",
    "ClassFunction",
    "ComponentSplit",
    "Cyclotomic",
    "FieldSpec",
    "FiniteMatrixGroup",
    "IrrPLabel",
    "QuadraticForm",
    "UnipotentLabel",
    "VerificationReport",
    "build_context",
    "character_table",
    "component_split",
    "degrees_from_values",
    "field_make",
    "group_order_formula",
    "induce",
    "inner_product",
    "irr_parabolic",
    "parabolic",
    "parabolic_characters",
    "parse_label",
    "psi",
    "restrict",
    "run_suite",
    "so_group",
    "symbol_bipartition",
    "unipotent_characters",
    "verify_theorem42",
]
