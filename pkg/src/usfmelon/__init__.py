"""Watermelon probabilities for uniform spanning forests on the half-plane.

Exact determinant tables and asymptotic amplitudes via potential-kernel
arithmetic in Q[1/pi], cross-checked by finite-lattice linear algebra,
exhaustive enumeration on tiny graphs, and a seeded Wilson-algorithm
Monte Carlo sampler.
"""

from .detasym import (
    Partition,
    ShiftVectors,
    TruncatedSeries,
    coeff_det,
    fk_direct,
    fk_expand,
    log_leading,
    partitions_up_to,
    powerlaw_leading,
    schur_eval,
)
from .errors import (
    ConsistencyError,
    InsufficientCutoffError,
    PairingAlarm,
    QuadratureError,
)
from .exactnum import Interval, PiPoly, SymbolicGreen, det, det_minors, sym_det
from .fitting import FitReport, fit_exponent
from .halfplane import (
    f_minus,
    f_plus,
    g_fin_closed_row1,
    green_closed,
    green_open,
    green_open_row1,
)
from .kernel import (
    DEFAULT_KERNEL,
    PotentialKernel,
    kernel_asymptotic,
    kernel_exact,
    kernel_numeric,
)
from .lattice import (
    RectDomain,
    SparseLaplacian,
    assemble_laplacian,
    convergence_sweep,
    diag_green_drift,
    green_solve,
    melon_strings,
    watermelon_prob_finite,
)
from .melons import (
    ExactRatio,
    WatermelonSpec,
    closed_denominator_gcoeff,
    decay_exponent,
    green_matrix,
    table_closed,
    table_open,
    watermelon_constant,
    watermelon_prob_halfplane,
)
from .tinygraph import ForestCounts, TinyGraph, forests_bruteforce, int_det

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "PairingAlarm",
    "QuadratureError",
    "InsufficientCutoffError",
    "PiPoly",
    "SymbolicGreen",
    "Interval",
    "det",
    "det_minors",
    "sym_det",
    "PotentialKernel",
    "DEFAULT_KERNEL",
    "kernel_exact",
    "kernel_numeric",
    "kernel_asymptotic",
    "f_minus",
    "f_plus",
    "green_open",
    "green_closed",
    "green_open_row1",
    "g_fin_closed_row1",
    "WatermelonSpec",
    "ExactRatio",
    "green_matrix",
    "table_open",
    "table_closed",
    "closed_denominator_gcoeff",
    "watermelon_constant",
    "watermelon_prob_halfplane",
    "decay_exponent",
    "RectDomain",
    "SparseLaplacian",
    "assemble_laplacian",
    "green_solve",
    "melon_strings",
    "watermelon_prob_finite",
    "convergence_sweep",
    "diag_green_drift",
    "TinyGraph",
    "ForestCounts",
    "forests_bruteforce",
    "int_det",
    "Partition",
    "TruncatedSeries",
    "ShiftVectors",
    "partitions_up_to",
    "schur_eval",
    "coeff_det",
    "fk_direct",
    "fk_expand",
    "powerlaw_leading",
    "log_leading",
    "FitReport",
    "fit_exponent",
    "__version__",
]
