"""Exact Fourier-Motzkin projection of secrecy rate regions.

Builds the pre-projection region with per-user garbage rates and the
projected target region, eliminates the garbage rates one variable at a
time with exact rational arithmetic, prunes redundant inequalities with
replayable certificates over the admissible entropy cone, and
cross-validates every symbolic claim against sampled channel models.
"""

from .elimination import (
    EliminationStep,
    Pairing,
    PruneEvent,
    Trace,
    eliminate_all,
    eliminate_variable,
    project_and_verify,
)
from .entropy import (
    EntropyFunctional,
    GroundSet,
    ShannonContext,
    elemental_inequalities,
    hypothesis_inequalities,
    independence_equalities,
    joint_entropy,
    mutual_information,
    shannon_context,
)
from .lp import LpColumn, LpError, LpOutcome, LpProblem, feasibility, solve
from .oracle import (
    ChannelModel,
    EntropyVector,
    check_implication,
    entropy_vector,
    sample_model,
)
from .prover import Certificate, is_redundant, prove_nonneg, prune
from .regions import (
    InequalitySystem,
    RateInequality,
    RateVar,
    build_master_region,
    build_target_region,
    system_equal,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ChannelModel",
    "EliminationStep",
    "EntropyFunctional",
    "EntropyVector",
    "GroundSet",
    "InequalitySystem",
    "LpColumn",
    "LpError",
    "LpOutcome",
    "LpProblem",
    "Pairing",
    "PruneEvent",
    "RateInequality",
    "RateVar",
    "ShannonContext",
    "Trace",
    "build_master_region",
    "build_target_region",
    "check_implication",
    "elemental_inequalities",
    "eliminate_all",
    "eliminate_variable",
    "entropy_vector",
    "feasibility",
    "hypothesis_inequalities",
    "independence_equalities",
    "is_redundant",
    "joint_entropy",
    "mutual_information",
    "project_and_verify",
    "prove_nonneg",
    "prune",
    "sample_model",
    "shannon_context",
    "solve",
    "system_equal",
]
