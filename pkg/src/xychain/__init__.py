"""Ground-state pairwise entanglement of the infinite spin-1/2 XY chain.

Computes two-point correlators via Toeplitz determinants of the fermionic
G function, pairwise concurrences, one- and two-tangles, the concurrence
range R and the two-spin entanglement length, together with closed-form
small-distance-to-factorization expansions and a finite-chain exact
diagonalization cross-check.
"""

from .model import FACTORIZED_TOL, ModelPoint, Regime
from .gfunction import (
    DEFAULT_TOL,
    GTable,
    QuadratureFailure,
    g_expansion,
    g_quadrature,
    g_xx_closed_form,
)
from .correlators import (
    CorrelatorSet,
    correlator_set,
    gxx_from_table,
    gyy_from_table,
    mx2_estimate,
    toeplitz_log_det,
)
from .entanglement import (
    Channel,
    ConcurrenceEntry,
    ConcurrenceProfile,
    FitError,
    PositivityError,
    RangeResult,
    RangeStatus,
    TangleReport,
    UndeterminedError,
    Xi2seFit,
    amplitude_a2,
    concurrence,
    concurrence_at,
    concurrence_profile,
    concurrence_range,
    epsilon0,
    epsilon0_empirical,
    second_order_cr,
    tangles,
    xi2se,
    xx_concurrence,
    xx_range,
    xx_two_tangle,
)
from .expansions import NEXT_ORDER, DomainError, Oracle, evaluate, residual_order
from . import ed

__version__ = "0.1.0"

__all__ = [
    "FACTORIZED_TOL",
    "ModelPoint",
    "Regime",
    "DEFAULT_TOL",
    "GTable",
    "QuadratureFailure",
    "g_expansion",
    "g_quadrature",
    "g_xx_closed_form",
    "CorrelatorSet",
    "correlator_set",
    "gxx_from_table",
    "gyy_from_table",
    "mx2_estimate",
    "toeplitz_log_det",
    "Channel",
    "ConcurrenceEntry",
    "ConcurrenceProfile",
    "FitError",
    "PositivityError",
    "RangeResult",
    "RangeStatus",
    "TangleReport",
    "UndeterminedError",
    "Xi2seFit",
    "amplitude_a2",
    "concurrence",
    "concurrence_at",
    "concurrence_profile",
    "concurrence_range",
    "epsilon0",
    "epsilon0_empirical",
    "second_order_cr",
    "tangles",
    "xi2se",
    "xx_concurrence",
    "xx_range",
    "xx_two_tangle",
    "NEXT_ORDER",
    "DomainError",
    "Oracle",
    "evaluate",
    "residual_order",
    "ed",
    "__version__",
]
