"""Capacity checking and hybrid routing + network-coding synthesis for
unit-capacity networks with one source and two terminals whose demanded
message sets overlap."""

from .augment import AugmentedNetwork, LemmaReport, build_augmented, check_lemma
from .errors import (
    CodeConstructionError,
    CyclicSupportError,
    DualcastError,
    InfeasibleDemandError,
    InfeasibleResidualError,
    InputError,
    InvariantError,
    NonterminationError,
    PlanMismatchError,
    TheoremViolationError,
    UnknownEdgeError,
    UnknownNodeError,
)
from .flow import EdgePath, FlowResult, decompose_paths, max_flow, min_cut_value
from .nccode import GF, MulticastCode, apply_code, build_multicast_code, get_field
from .netgraph import (
    Demand,
    Edge,
    Network,
    expand_capacities,
    in_edges,
    out_edges,
    remove_edges,
)
from .planner import (
    FeasibilityReport,
    TransferPlan,
    VerificationReport,
    check_feasibility,
    synthesize,
    verify_plan,
)
from .recolor import (
    ColoringState,
    ReroutingTrace,
    algorithm_a,
    cond,
    extract_exclusive_green,
    run_to_fixpoint,
    symmetric_pass,
)

__all__ = [
    "AugmentedNetwork",
    "CodeConstructionError",
    "ColoringState",
    "CyclicSupportError",
    "Demand",
    "DualcastError",
    "Edge",
    "EdgePath",
    "FeasibilityReport",
    "FlowResult",
    "GF",
    "InfeasibleDemandError",
    "InfeasibleResidualError",
    "InputError",
    "InvariantError",
    "LemmaReport",
    "MulticastCode",
    "Network",
    "NonterminationError",
    "PlanMismatchError",
    "ReroutingTrace",
    "TheoremViolationError",
    "TransferPlan",
    "UnknownEdgeError",
    "UnknownNodeError",
    "VerificationReport",
    "algorithm_a",
    "apply_code",
    "build_augmented",
    "build_multicast_code",
    "check_feasibility",
    "check_lemma",
    "cond",
    "decompose_paths",
    "expand_capacities",
    "extract_exclusive_green",
    "get_field",
    "in_edges",
    "max_flow",
    "min_cut_value",
    "out_edges",
    "remove_edges",
    "run_to_fixpoint",
    "symmetric_pass",
    "synthesize",
    "verify_plan",
]
