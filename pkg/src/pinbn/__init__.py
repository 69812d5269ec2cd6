"""Distributed pinning control of Boolean networks from their network structure."""

from .dynamics import (
    AttractorReport,
    StateIndex,
    VerificationReport,
    attractors,
    forward_orbits,
    state_transition_graph,
    step,
    verify_global_stability,
)
from .fas import FeedbackArcSetResult, enumerate_cycles, solve_feedback_arc_set
from .network import (
    BooleanNetwork,
    CapExceeded,
    InteractionDigraph,
    algebraic_form_L,
    interaction_digraph,
    minimize,
    parse_network,
    read_network,
    to_rules,
)
from .stp import LogicalMatrix, delta, stp, structure_matrix
from .synth import PinningPlan, SynthesisError, synthesize

__version__ = "0.1.0"

__all__ = [
    "AttractorReport",
    "BooleanNetwork",
    "CapExceeded",
    "FeedbackArcSetResult",
    "InteractionDigraph",
    "LogicalMatrix",
    "PinningPlan",
    "StateIndex",
    "SynthesisError",
    "VerificationReport",
    "algebraic_form_L",
    "attractors",
    "delta",
    "enumerate_cycles",
    "forward_orbits",
    "interaction_digraph",
    "minimize",
    "parse_network",
    "read_network",
    "solve_feedback_arc_set",
    "state_transition_graph",
    "step",
    "stp",
    "structure_matrix",
    "synthesize",
    "to_rules",
    "verify_global_stability",
]
