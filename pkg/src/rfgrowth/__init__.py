"""Exact computations around residual finiteness growth.

The package builds the two-generated groups ``B_f`` sitting inside products of
alternating groups, checks the detection structure of their witness words, and
computes residual finiteness growth of small finitely presented groups by
brute-force quotient search.
"""

from rfgrowth.perm import Perm, cycle_alpha, three_cycle_beta, factor_in_alt
from rfgrowth.shift_sparse import ShiftSparsePerm
from rfgrowth.sequences import GrowthFunction, SequenceTable, build, verify_clauses
from rfgrowth.words import Alphabet, free_reduce

__all__ = [
    "Alphabet",
    "GrowthFunction",
    "Perm",
    "SequenceTable",
    "ShiftSparsePerm",
    "build",
    "cycle_alpha",
    "factor_in_alt",
    "free_reduce",
    "three_cycle_beta",
    "verify_clauses",
]

__version__ = "0.1.0"
