from ._core import (
    EntropyEstimate,
    SpectralResult,
    ToolkitError,
    TransitionMatrix,
    char_poly,
    entropy_gap,
    eps0,
    extend_matrix,
    fixed_points,
    growth_rate,
    is_irreducible,
    oracle_perron_root,
    perron_chain,
    separated_entropy,
    snake_bound,
    spectral_radius,
    variation_verdict,
    yomdin_defect,
)

__all__ = [
    "EntropyEstimate",
    "SpectralResult",
    "ToolkitError",
    "TransitionMatrix",
    "char_poly",
    "entropy_gap",
    "eps0",
    "extend_matrix",
    "fixed_points",
    "growth_rate",
    "is_irreducible",
    "oracle_perron_root",
    "perron_chain",
    "separated_entropy",
    "snake_bound",
    "spectral_radius",
    "variation_verdict",
    "yomdin_defect",
]
