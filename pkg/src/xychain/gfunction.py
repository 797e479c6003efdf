"""The Barouch-McCoy G function and its near-factorization expansion.

G(r, h, gamma) is the one-dimensional integral whose values fill the
Toeplitz matrices giving every correlator of the chain:

    G(r) = (1/pi) * int_0^pi [ (h - cos p) cos(r p) + gamma sin p sin(r p) ]
                              / lambda(p)  dp,
    lambda(p) = sqrt((h - cos p)^2 + gamma^2 sin^2 p).

The integrand is a cosine of a phase, so |G| <= 1 always.  For gamma = 0
the integral collapses to a sign function and is evaluated in closed form.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .model import ModelPoint

#: default absolute quadrature tolerance; Toeplitz determinants amplify
#: entry error by at most ~r * cond, which leaves headroom for r <~ 200
DEFAULT_TOL = 1e-10

#: above this |r| the integration domain is pre-split so that no panel
#: covers more than half an oscillation period
OSCILLATORY_R = 50


class QuadratureFailure(RuntimeError):
    """Adaptive refinement did not reach the requested tolerance."""

    def __init__(self, message: str, value: float, err: float):
        super().__init__(message)
        self.value = value
        self.err = err


def g_integrand(phi: float, r: int, h: float, gamma: float) -> float:
    lam = math.hypot(h - math.cos(phi), gamma * math.sin(phi))
    if lam == 0.0:
        return 0.0
    num = (h - math.cos(phi)) * math.cos(r * phi) + gamma * math.sin(phi) * math.sin(r * phi)
    return num / lam


def _breakpoints(r: int, h: float, gamma: float) -> list[float]:
    pts: list[float] = []
    if abs(r) > OSCILLATORY_R:
        # half an oscillation period per panel keeps error estimates honest
        n = 2 * abs(r)
        pts.extend(np.linspace(0.0, math.pi, n + 1)[1:-1])
    if gamma == 0.0 and 0.0 <= h < 1.0:
        pts.append(math.acos(h))
    return sorted(pts)


def g_quadrature(point: ModelPoint, r: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Evaluate G(r, h, gamma) by adaptive quadrature.

    Returns (value, estimated absolute error).  Raises QuadratureFailure,
    carrying the best estimate, if the subdivision budget is exhausted
    without reaching ``tol``.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    h, gamma = point.h, point.gamma
    pts = _breakpoints(r, h, gamma)
    limit = max(200, 4 * abs(r), 2 * len(pts) + 10)
    kwargs = dict(epsabs=tol, epsrel=1e-12, limit=limit, full_output=True)
    if pts:
        kwargs["points"] = pts
    out = quad(g_integrand, 0.0, math.pi, args=(r, h, gamma), **kwargs)
    value, err = out[0] / math.pi, out[1] / math.pi
    ier_ok = len(out) < 4  # no warning message appended
    if not ier_ok and err > 10.0 * tol:
        raise QuadratureFailure(
            f"G({r}) quadrature did not converge at (gamma={gamma}, h={h}): {out[3]}",
            value,
            err,
        )
    return value, err


def g_xx_closed_form(h: float, r: int) -> float:
    """G(r) of the isotropic chain (gamma = 0), in closed form.

    For h < 1 the integrand is sgn(h - cos p) cos(r p), which integrates to
    -(2/pi) sin(r arccos h)/r for r != 0 and 1 - 2 arccos(h)/pi at r = 0.
    For h >= 1 the saturated branch gives delta_{r,0}.
    """
    if h < 0.0:
        raise ValueError("h must be >= 0")
    if h >= 1.0:
        return 1.0 if r == 0 else 0.0
    phi_f = math.acos(h)
    if r == 0:
        return 1.0 - 2.0 * phi_f / math.pi
    return -2.0 * math.sin(r * phi_f) / (math.pi * r)


def g_expansion(gamma: float, r: int) -> tuple[float, float]:
    """Zeroth- and first-order coefficients of G(r) in (h - h_f).

    Valid for 0 < gamma <= 1 only; the expansion is singular at gamma = 0.
    For r < 0 the zeroth-order term carries alpha^(|r|-1): the printed
    alpha^(-r-1) would violate |G| <= 1 for gamma < 1 and fails the
    checkable gamma=1 limit, so the bounded reading is used (confirmed
    against quadrature in the test suite).
    """
    if gamma <= 0.0:
        raise ValueError("g_expansion requires gamma > 0")
    alpha = math.sqrt((1.0 - gamma) / (1.0 + gamma))
    if r == 0:
        return alpha, 1.0 / (2.0 * gamma)
    if r > 0:
        return 0.0, alpha**r / (2.0 * gamma)
    m = -r
    c0 = -2.0 * gamma / (1.0 + gamma) * alpha ** (m - 1)
    num = 1.0 + 2.0 * m * gamma - (2.0 * m**2 + 1.0) * gamma**2
    if num == 0.0:
        c1 = 0.0
    elif alpha == 0.0:
        raise ValueError("first-order coefficient of G(-r) degenerates at gamma = 1")
    else:
        c1 = num / (2.0 * gamma * (1.0 + gamma) ** 2) * alpha ** (m - 2)
    return c0, c1


@dataclass
class GTable:
    """Cached G(n) values for n in [-n_max, n_max] at one parameter point.

    Built once, thereafter read-only; safe to share across workers.
    """

    point: ModelPoint
    n_max: int
    values: np.ndarray
    errors: np.ndarray
    tol: float

    def g(self, n: int) -> float:
        if abs(n) > self.n_max:
            raise IndexError(f"G({n}) outside table depth n_max={self.n_max}")
        return float(self.values[n + self.n_max])

    def err(self, n: int) -> float:
        return float(self.errors[n + self.n_max])

    @classmethod
    def build(cls, point: ModelPoint, n_max: int, tol: float = DEFAULT_TOL) -> "GTable":
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        values = np.empty(2 * n_max + 1)
        errors = np.zeros(2 * n_max + 1)
        for n in range(-n_max, n_max + 1):
            if point.gamma == 0.0:
                values[n + n_max] = g_xx_closed_form(point.h, n)
            else:
                values[n + n_max], errors[n + n_max] = g_quadrature(point, n, tol)
        return cls(point, n_max, values, errors, tol)

    def extended(self, n_max: int) -> "GTable":
        """A deeper table; only the new entries are computed."""
        if n_max <= self.n_max:
            return self
        values = np.empty(2 * n_max + 1)
        errors = np.zeros(2 * n_max + 1)
        lo = n_max - self.n_max
        values[lo : lo + 2 * self.n_max + 1] = self.values
        errors[lo : lo + 2 * self.n_max + 1] = self.errors
        for n in list(range(-n_max, -self.n_max)) + list(range(self.n_max + 1, n_max + 1)):
            if self.point.gamma == 0.0:
                values[n + n_max] = g_xx_closed_form(self.point.h, n)
            else:
                values[n + n_max], errors[n + n_max] = g_quadrature(self.point, n, self.tol)
        return GTable(self.point, n_max, values, errors, self.tol)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "G", "err"])
            for n in range(-self.n_max, self.n_max + 1):
                w.writerow([n, f"{self.g(n):.17g}", f"{self.err(n):.3g}"])
