"""Hamiltonian parameter points of the transverse-field XY chain.

Reduced units throughout: J = 1, lattice spacing 1.  A point is specified
by the anisotropy ``gamma`` in [0, 1] and the reduced field ``h >= 0``.
The ground state factorizes exactly on the circle h^2 + gamma^2 = 1 and
along the line {gamma = 0, h >= 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

#: tolerance used to decide whether a point sits on the factorized circle
FACTORIZED_TOL = 1e-12


class Regime(str, Enum):
    """Symmetry regime of a parameter point."""

    BROKEN_SYM_LOWER_BOUND = "broken_sym_lower_bound"  # h^2+gamma^2 < 1, gamma > 0
    UNBROKEN = "unbroken"
    FACTORIZED_CIRCLE = "factorized_circle"
    FACTORIZED_LINE = "factorized_line"


@dataclass(frozen=True)
class ModelPoint:
    """A point (gamma, h) in the parameter plane with derived quantities."""

    gamma: float
    h: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.h < 0.0:
            raise ValueError(f"h must be >= 0, got {self.h}")

    @property
    def alpha(self) -> float:
        """alpha = sqrt((1-gamma)/(1+gamma)); 0 at gamma=1, 1 at gamma=0."""
        return math.sqrt((1.0 - self.gamma) / (1.0 + self.gamma))

    @property
    def h_f(self) -> float:
        """Factorizing field sqrt(1 - gamma^2)."""
        return math.sqrt(max(0.0, 1.0 - self.gamma**2))

    @property
    def eps(self) -> float:
        """Distance |h - h_f| from the factorizing field."""
        return abs(self.h - self.h_f)

    @property
    def side(self) -> str:
        """'above' if h >= h_f else 'below'."""
        return "above" if self.h >= self.h_f else "below"

    @property
    def regime(self) -> Regime:
        circle = self.h**2 + self.gamma**2
        if self.gamma == 0.0 and self.h >= 1.0 - FACTORIZED_TOL:
            return Regime.FACTORIZED_LINE
        if abs(circle - 1.0) <= FACTORIZED_TOL:
            return Regime.FACTORIZED_CIRCLE
        if circle < 1.0 and self.gamma > 0.0:
            return Regime.BROKEN_SYM_LOWER_BOUND
        return Regime.UNBROKEN

    @classmethod
    def from_eps(cls, gamma: float, eps: float, side: str = "above") -> "ModelPoint":
        """Build the point at distance eps from the factorizing field.

        ``side`` is 'above' (h = h_f + eps) or 'below' (h = h_f - eps).
        """
        h_f = math.sqrt(max(0.0, 1.0 - gamma**2))
        if side == "above":
            h = h_f + eps
        elif side == "below":
            h = h_f - eps
            if h < 0.0:
                raise ValueError(f"eps={eps} puts h below zero at gamma={gamma}")
        else:
            raise ValueError(f"side must be 'above' or 'below', got {side!r}")
        return cls(gamma, h)
