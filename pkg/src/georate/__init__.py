"""Weighted geodesic random walks on model manifolds and their large-deviation rate functions."""

__version__ = "0.1.0"

from .errors import ConfigError, ContractError, CutLocusError, GeorateError, NumericalError
from .increments import (
    Gaussian,
    IncrementLaw,
    PoissonProduct,
    Rademacher1D,
    TwoPointAxis,
    UniformBall,
    UniformSphereShell,
    parse_law,
    sample,
)
from .manifold import Euclidean, Hyperbolic, LogAll, Manifold, Sphere, parse_manifold
from .rates import (
    LegendreResult,
    RateProblem,
    grad_psi,
    hess_psi,
    mgf_log_exact,
    psi,
    psi_star,
    rate_k,
    rate_manifold,
    rate_proj,
)
from .walk import (
    Partition,
    WalkPath,
    piece_sums_lower,
    piece_sums_upper,
    reconstruct_lower,
    reconstruct_upper,
    run_walk,
    run_walks,
    tangent_discrepancy,
    tau_rw,
)
from .weights import WeightRow, row_from_seed, sample_row

__all__ = [
    "ConfigError",
    "ContractError",
    "CutLocusError",
    "Euclidean",
    "Gaussian",
    "GeorateError",
    "Hyperbolic",
    "IncrementLaw",
    "LegendreResult",
    "LogAll",
    "Manifold",
    "NumericalError",
    "Partition",
    "PoissonProduct",
    "Rademacher1D",
    "RateProblem",
    "Sphere",
    "TwoPointAxis",
    "UniformBall",
    "UniformSphereShell",
    "WalkPath",
    "WeightRow",
    "grad_psi",
    "hess_psi",
    "mgf_log_exact",
    "parse_law",
    "parse_manifold",
    "piece_sums_lower",
    "piece_sums_upper",
    "psi",
    "psi_star",
    "rate_k",
    "rate_manifold",
    "rate_proj",
    "reconstruct_lower",
    "reconstruct_upper",
    "row_from_seed",
    "run_walk",
    "run_walks",
    "sample",
    "sample_row",
    "tangent_discrepancy",
    "tau_rw",
]
