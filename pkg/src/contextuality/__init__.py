"""Exact contextuality analysis of bipartite compound systems.

Decides, in rational arithmetic, whether a non-signaling system of random
variables is a mixture of its non-signaling deterministic realizations,
returning an explicit decomposition or a Bell-type infeasibility witness;
includes the Peres 33-ray / 40-triad Kochen-Specker construction.
"""

from .analysis import (
    BellWitness,
    Decomposition,
    NsRealizationSet,
    RealizationLimitExceeded,
    SignalingSystemError,
    Verdict,
    chsh,
    classify,
    classify_support,
    decomposition_reproduces,
    enumerate_ns_realizations,
    fine_oracle,
    full_support,
    hidden_variable_model,
    witness_score,
)
from .catalog import NamedSystem, PairMixture, conspiracy_system, get, pair_as_mixture
from .feasibility import (
    FarkasCertificate,
    FeasibilityProblem,
    FeasibleSolution,
    make_problem,
    solve_feasibility,
    verify,
)
from .peres import (
    Ray,
    Triad,
    Zr2,
    build_ksp_support,
    canonical_ray,
    dot,
    ks_search,
    orthogonal_triads,
    peres_rays,
)
from .systems import (
    Assignment,
    Context,
    Realization,
    SignalingWitness,
    SupportSpec,
    SystemSpec,
    check_nonsignaling,
    count_assignments,
    expectation_product,
    is_ns_assignment,
    make_support,
    make_system,
    marginal,
    mix,
    mix_context_dependent,
    support_of,
    validate,
)

__all__ = [
    "Assignment",
    "BellWitness",
    "Context",
    "Decomposition",
    "FarkasCertificate",
    "FeasibilityProblem",
    "FeasibleSolution",
    "NamedSystem",
    "NsRealizationSet",
    "PairMixture",
    "Ray",
    "Realization",
    "RealizationLimitExceeded",
    "SignalingSystemError",
    "SignalingWitness",
    "SupportSpec",
    "SystemSpec",
    "Triad",
    "Verdict",
    "Zr2",
    "build_ksp_support",
    "canonical_ray",
    "check_nonsignaling",
    "chsh",
    "classify",
    "classify_support",
    "conspiracy_system",
    "count_assignments",
    "decomposition_reproduces",
    "dot",
    "enumerate_ns_realizations",
    "expectation_product",
    "fine_oracle",
    "full_support",
    "get",
    "hidden_variable_model",
    "is_ns_assignment",
    "ks_search",
    "make_problem",
    "make_support",
    "make_system",
    "marginal",
    "mix",
    "mix_context_dependent",
    "orthogonal_triads",
    "pair_as_mixture",
    "peres_rays",
    "solve_feasibility",
    "support_of",
    "validate",
    "verify",
    "witness_score",
]

__version__ = "0.1.0"
