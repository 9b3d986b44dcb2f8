"""Exponent-lattice replay of the algebraic argument built on peeling."""
from .brute import BruteResult, CrossCheck, brute_force_expand, cross_check
from .graded import GradedSupport, lemma1_reduce, lemma1_steps, star_op
from .monomials import (
    CoeffTag,
    CoverageError,
    DepthError,
    MonomialRep,
    NilOracle,
    RewriteReport,
    assign_pieces,
    collapse_piece,
    homogenize,
    rewrite_step,
    rewrite_to,
    simplex_lattice,
    simplex_polytope,
)
from .powers import PowerProduct
from .proof import Claim, ProofTrace, run_main_proof

__all__ = [
    "BruteResult", "CrossCheck", "brute_force_expand", "cross_check", "GradedSupport",
    "lemma1_reduce", "lemma1_steps", "star_op", "CoeffTag", "CoverageError", "DepthError",
    "MonomialRep", "NilOracle", "RewriteReport", "assign_pieces", "collapse_piece", "homogenize",
    "rewrite_step", "rewrite_to", "simplex_lattice", "simplex_polytope", "PowerProduct", "Claim",
    "ProofTrace", "run_main_proof",
]
