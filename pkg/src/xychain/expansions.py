"""Closed-form series for correlators, concurrences and tangles.

Every truncated expansion used to cross-check the full numerics lives here
as an evaluatable oracle.  Anisotropic series take eps = |h - h_f| and a
side flag instead of h, so the symmetry in the sign of h - h_f is directly
testable.  The gamma = 1 limits are served by dedicated ids because several
generic formulas degenerate there (alpha = 0).
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
PI = math.pi


class DomainError(ValueError):
    pass


class Oracle(str, Enum):
    GXX = "gxx"                      # anisotropic g^xx_r, first order in eps
    GYY = "gyy"
    GZZ = "gzz"
    MZ = "mz"
    CR_FIRST = "cr_first"            # C_r = alpha^(2r-1)/(2 gamma) eps
    CR_SECOND = "cr_second"          # large-r second order
    EPSILON0 = "epsilon0"
    R_ASYMPTOTIC = "r_asymptotic"    # R(eps) near the circle
    XX_GXX = "xx_gxx"                # isotropic series (h -> 1^-)
    XX_GZZ = "xx_gzz"
    XX_MZ = "xx_mz"
    XX_CR = "xx_cr"
    XX_R_EXPONENT = "xx_r_exponent"  # R ~ eps^(-1/2)
    ONE_TANGLE = "one_tangle"        # tau_1, anisotropic
    RESIDUAL_TANGLE = "residual_tangle"
    RATIO = "ratio"                  # tau_2 / tau_1 limit
    XX_ONE_TANGLE = "xx_one_tangle"
    PFEUTY_C1 = "pfeuty_c1"          # gamma = 1 series in h
    PFEUTY_C2 = "pfeuty_c2"
    GAMMA1_GXX = "gamma1_gxx"        # |g^xx_r| = 1/4 - eps^2/16
    GAMMA1_TAU1 = "gamma1_tau1"      # eps^4/32
    GAMMA1_RESIDUAL = "gamma1_residual"  # eps^6/64


def _alpha(gamma: float) -> float:
    return math.sqrt((1.0 - gamma) / (1.0 + gamma))


def _need_aniso(gamma: float | None) -> float:
    if gamma is None or not 0.0 < gamma <= 1.0:
        raise DomainError(f"anisotropic series require 0 < gamma <= 1, got {gamma}")
    return gamma


def _signed_eps(eps: float | None, side: str) -> float:
    if eps is None or eps < 0.0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    if side not in ("above", "below"):
        raise DomainError(f"side must be 'above' or 'below', got {side!r}")
    return eps if side == "above" else -eps


def evaluate(
    oracle: Oracle,
    *,
    gamma: float | None = None,
    eps: float | None = None,
    h: float | None = None,
    r: int | None = None,
    side: str = "above",
) -> float:
    """Evaluate one truncated series; raises DomainError outside validity."""
    if oracle in (Oracle.GXX, Oracle.GYY, Oracle.GZZ, Oracle.MZ):
        gamma = _need_aniso(gamma)
        de = _signed_eps(eps, side)
        if side != "above":
            raise DomainError("correlator series are stated for h > h_f only")
        a = _alpha(gamma)
        if oracle is Oracle.MZ:
            return a / 2.0 + de / (4.0 * gamma)
        if r is None or r < 1:
            raise DomainError("r >= 1 required")
        if oracle is Oracle.GXX:
            return (-1.0) ** r / 4.0 * (
                2.0 * gamma / (1.0 + gamma)
                + (a ** (2 * r + 1) - 2.0 * a) / (2.0 * gamma) * de
            )
        if oracle is Oracle.GYY:
            return -((-1.0) ** r) / 4.0 * a ** (2 * r - 1) / (2.0 * gamma) * de
        return 0.25 * (
            a**2 + (a / gamma + a ** (2 * r - 1) / (gamma + 1.0)) * de
        )

    if oracle is Oracle.CR_FIRST:
        gamma = _need_aniso(gamma)
        if eps is None or r is None:
            raise DomainError("eps and r required")
        return _alpha(gamma) ** (2 * r - 1) / (2.0 * gamma) * eps

    if oracle is Oracle.CR_SECOND:
        from .entanglement import second_order_cr

        gamma = _need_aniso(gamma)
        return second_order_cr(gamma, eps, r)

    if oracle is Oracle.EPSILON0:
        from .entanglement import epsilon0

        gamma = _need_aniso(gamma)
        return epsilon0(gamma, r)

    if oracle is Oracle.R_ASYMPTOTIC:
        from .entanglement import amplitude_a2

        gamma = _need_aniso(gamma)
        if gamma == 1.0:
            raise DomainError("R asymptote degenerates at gamma = 1 (alpha = 0)")
        a = _alpha(gamma)
        la2 = math.log(a**2)
        return math.log(eps) / la2 + math.log(4.0 * a * gamma * amplitude_a2(gamma)) / la2

    if oracle is Oracle.XX_MZ:
        if h is None or h < 0.0:
            raise DomainError("h >= 0 required")
        return 0.5 if h >= 1.0 else 0.5 - math.acos(h) / PI

    if oracle in (Oracle.XX_GXX, Oracle.XX_GZZ, Oracle.XX_CR, Oracle.XX_ONE_TANGLE):
        if gamma not in (None, 0.0):
            raise DomainError("isotropic series require gamma = 0")
        if eps is None or eps < 0.0:
            raise DomainError("eps >= 0 required")
        s, s32, s2 = math.sqrt(eps), eps**1.5, eps**2
        if oracle is Oracle.XX_ONE_TANGLE:
            return 4.0 * SQRT2 / PI * s - 8.0 / PI**2 * eps
        if oracle in (Oracle.XX_GXX, Oracle.XX_GZZ) and (r is None or r < 1):
            raise DomainError("r >= 1 required")
        if oracle is Oracle.XX_GXX:
            return (-1.0) ** r * (
                s / (PI * SQRT2)
                - (4.0 * r**2 - 1.0) / (12.0 * PI * SQRT2) * s32
                + 2.0 * r * (r**2 - 1.0) / (9.0 * PI**2) * s2
            )
        if oracle is Oracle.XX_GZZ:
            return (
                0.25
                - SQRT2 / PI * s
                - s32 / (6.0 * PI * SQRT2)
                + 4.0 * r**2 / (3.0 * PI**2) * s2
            )
        if r is None or r < 1:
            raise DomainError("r >= 1 required")
        return (
            2.0 * SQRT2 / PI * s
            - 4.0 * r / (PI * SQRT3) * eps
            + (8.0 * r * SQRT3 - (4.0 * r**2 - 1.0) * PI) / (3.0 * PI**2 * SQRT2) * s32
            + 2.0
            * r
            * (30.0 * SQRT3 + 20.0 * (r**2 - 1.0) * PI + (4.0 * r**2 - 5.0) * SQRT3 * PI**2)
            / (45.0 * PI**3)
            * s2
        )

    if oracle is Oracle.XX_R_EXPONENT:
        return -0.5

    if oracle in (Oracle.ONE_TANGLE, Oracle.RESIDUAL_TANGLE, Oracle.RATIO):
        gamma = _need_aniso(gamma)
        if oracle is Oracle.RATIO:
            return (1.0 + gamma) ** 2 / (3.0 + gamma)
        if gamma == 1.0:
            raise DomainError("gamma = 1 is served by the dedicated gamma1 oracles")
        if eps is None:
            raise DomainError("eps required")
        if oracle is Oracle.ONE_TANGLE:
            return (1.0 - gamma) * (3.0 + gamma) / (8.0 * gamma**3 * (1.0 + gamma)) * eps**2
        return (1.0 - gamma) ** 2 * (2.0 + gamma) / (8.0 * gamma**3 * (1.0 + gamma)) * eps**2

    if oracle in (Oracle.PFEUTY_C1, Oracle.PFEUTY_C2):
        if h is None or h < 0.0:
            raise DomainError("h >= 0 required")
        if oracle is Oracle.PFEUTY_C1:
            return h**2 / 8.0 + 3.0 * h**4 / 128.0
        return h**4 / 128.0

    if oracle is Oracle.GAMMA1_GXX:
        if eps is None:
            raise DomainError("eps required")
        return 0.25 - eps**2 / 16.0

    if oracle is Oracle.GAMMA1_TAU1:
        return eps**4 / 32.0

    if oracle is Oracle.GAMMA1_RESIDUAL:
        return eps**6 / 64.0

    raise DomainError(f"unknown oracle {oracle}")


#: claimed order of the first neglected term, per oracle family
NEXT_ORDER = {
    Oracle.GXX: 2.0,
    Oracle.GYY: 2.0,
    Oracle.GZZ: 2.0,
    Oracle.MZ: 2.0,
    Oracle.CR_FIRST: 2.0,
    Oracle.XX_GXX: 2.5,
    Oracle.XX_GZZ: 2.5,
    Oracle.XX_CR: 2.5,
    Oracle.ONE_TANGLE: 3.0,
    Oracle.RESIDUAL_TANGLE: 3.0,
}


def residual_order(
    oracle: Oracle,
    numeric_provider,
    eps_grid,
    min_residual: float = 1e-14,
    **params,
) -> float | None:
    """Fitted log-log slope of |numeric - series| vs eps.

    ``numeric_provider(eps)`` supplies the full-numerics value.  Returns the
    slope, or None (inconclusive) when the residual sits at the numerical
    noise floor.
    """
    eps_grid = np.asarray(sorted(eps_grid), float)
    if eps_grid[-1] / eps_grid[0] < 99.0:
        raise ValueError("eps_grid must span at least two decades")
    resid = np.array(
        [abs(numeric_provider(e) - evaluate(oracle, eps=e, **params)) for e in eps_grid]
    )
    if np.any(resid < min_residual):
        return None
    slope = np.polyfit(np.log(eps_grid), np.log(resid), 1)[0]
    return float(slope)
