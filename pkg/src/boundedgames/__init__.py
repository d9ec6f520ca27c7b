"""Bounded-degree QBF and positional-game toolkit."""

from .formula import (CnfMatrix, PairedSatInstance, ParseError, QbfFormula, check_class,
                      degree_profile, emit_psat, emit_qdimacs, parse_psat, parse_qdimacs)
from .games import Convention, GameOutcome, solve_positional
from .hypergraph import Hypergraph, emit_hypergraph, parse_hypergraph
from .qbf import QbfOutcome, apply_rule, solve_paired_sat, solve_qbf2, solve_qbf_oracle

__version__ = "0.1.0"
