"""Concurrences, tangles, concurrence range and two-spin entanglement length.

The concurrence between spins a distance r apart is

    C_r  = 2 max{0, C'_r, C''_r},
    C'_r  = |g^xx + g^yy| - sqrt((1/4 + g^zz)^2 - M_z^2)   (antiparallel),
    C''_r = |g^xx - g^yy| + g^zz - 1/4                     (parallel).

Inside the circle h^2 + gamma^2 < 1 (gamma > 0) these expressions are a
lower bound for the pairwise entanglement; results there carry
``lower_bound_flag``.  Long-distance quantities (range, decay length)
remain valid in that regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .correlators import CorrelatorSet, correlator_set, gxx_from_table, mx2_estimate
from .gfunction import DEFAULT_TOL, GTable, g_xx_closed_form
from .model import ModelPoint, Regime

#: concurrences below this are treated as zero when closing the range
ZERO_TOL = 1e-12

#: consecutive sub-tolerance separations required before the range is closed;
#: a single one can be a zero-crossing artifact
K_CONSECUTIVE = 3

RADICAND_TOL = 1e-10


class PositivityError(RuntimeError):
    """The C' radicand went negative beyond tolerance: upstream numerics failed."""


class FitError(RuntimeError):
    pass


class UndeterminedError(RuntimeError):
    pass


class Channel(str, Enum):
    ANTIPARALLEL = "antiparallel"
    PARALLEL = "parallel"
    NONE = "none"


@dataclass
class ConcurrenceEntry:
    C: float
    Cp: float
    Cpp: float
    channel: Channel


def concurrence(cs: CorrelatorSet) -> ConcurrenceEntry:
    """C_r, both channel terms and the winning channel for one CorrelatorSet."""
    radicand = (0.25 + cs.gzz) ** 2 - cs.mz**2
    if radicand < -RADICAND_TOL:
        raise PositivityError(
            f"negative C' radicand {radicand:.3e} at (gamma={cs.point.gamma}, "
            f"h={cs.point.h}, r={cs.r})"
        )
    cp = abs(cs.gxx + cs.gyy) - math.sqrt(max(0.0, radicand))
    cpp = abs(cs.gxx - cs.gyy) + cs.gzz - 0.25
    best = max(0.0, cp, cpp)
    if best == 0.0:
        channel = Channel.NONE
    elif cp >= cpp:
        channel = Channel.ANTIPARALLEL
    else:
        channel = Channel.PARALLEL
    return ConcurrenceEntry(2.0 * best, cp, cpp, channel)


class RangeStatus(str, Enum):
    DETERMINED = "determined"
    INFINITE = "infinite"
    UNDETERMINED = "undetermined"


@dataclass
class RangeResult:
    status: RangeStatus
    value: float  # integer R, math.inf, or nan when undetermined

    def __repr__(self) -> str:
        return f"RangeResult({self.status.value}, {self.value})"


@dataclass
class ConcurrenceProfile:
    """Map r -> concurrence data at one parameter point."""

    point: ModelPoint
    entries: dict[int, ConcurrenceEntry]
    r_max: int
    range_result: RangeResult
    lower_bound_flag: bool
    flags: list[str] = field(default_factory=list)


def concurrence_profile(
    point: ModelPoint,
    r_max: int,
    tol: float = DEFAULT_TOL,
    zero_tol: float = ZERO_TOL,
    k_consecutive: int = K_CONSECUTIVE,
    stop_at_range: bool = True,
    table: GTable | None = None,
) -> ConcurrenceProfile:
    """Concurrences for r = 1..r_max, closing the range when found.

    With ``stop_at_range`` the scan stops after ``k_consecutive`` separations
    with max{C', C''} <= zero_tol; otherwise all r up to r_max are computed.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if table is None:
        table = GTable.build(point, min(r_max + 1, 32), tol)
    entries: dict[int, ConcurrenceEntry] = {}
    flags: list[str] = []
    zeros_run = 0
    closed_at = None
    for r in range(1, r_max + 1):
        if table.n_max < r + 1:
            table = table.extended(min(r_max + 1, max(2 * table.n_max, r + 1)))
        cs = correlator_set(point, r, table, mx2=0.0)
        if cs.flags:
            flags.extend(f"r={r}:{f}" for f in cs.flags)
        entry = concurrence(cs)
        entries[r] = entry
        if max(entry.Cp, entry.Cpp) <= zero_tol:
            zeros_run += 1
            if zeros_run >= k_consecutive and closed_at is None:
                closed_at = r - k_consecutive
                if stop_at_range:
                    break
        else:
            zeros_run = 0
            closed_at = None
    if closed_at is not None:
        rng = RangeResult(RangeStatus.DETERMINED, float(closed_at))
    elif entries[max(entries)].C > zero_tol:
        rng = RangeResult(RangeStatus.INFINITE, math.inf)
    else:
        rng = RangeResult(RangeStatus.UNDETERMINED, math.nan)
    return ConcurrenceProfile(
        point,
        entries,
        max(entries),
        rng,
        point.regime is Regime.BROKEN_SYM_LOWER_BOUND,
        flags,
    )


def concurrence_range(
    point: ModelPoint,
    r_budget: int,
    zero_tol: float = ZERO_TOL,
    k_consecutive: int = K_CONSECUTIVE,
    tol: float = DEFAULT_TOL,
) -> RangeResult:
    """Range R of the concurrence: C_r > 0 for all r <= R and 0 beyond."""
    if r_budget < 2:
        raise ValueError("r_budget must be >= 2")
    prof = concurrence_profile(
        point, r_budget, tol=tol, zero_tol=zero_tol, k_consecutive=k_consecutive
    )
    return prof.range_result


# ---------------------------------------------------------------------------
# closed-form laws near the factorized circle (gamma > 0)


def amplitude_a2(gamma: float) -> float:
    """A^2 = alpha^2 (gamma + 3) / (32 gamma^3), the second-order amplitude."""
    if gamma <= 0.0:
        raise ValueError("gamma must be > 0")
    alpha2 = (1.0 - gamma) / (1.0 + gamma)
    return alpha2 * (gamma + 3.0) / (32.0 * gamma**3)


def epsilon0(gamma: float, r: int) -> float:
    """Distance from h_f below which C_r is positive: alpha^(2r-1)/(4 gamma A^2).

    Large-r law; callers should treat r < 5 values with caution.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be > 0")
    if gamma == 1.0:
        return 0.0
    alpha = math.sqrt((1.0 - gamma) / (1.0 + gamma))
    return alpha ** (2 * r - 1) / (4.0 * gamma * amplitude_a2(gamma))


def second_order_cr(gamma: float, eps: float, r: int) -> float:
    """C_r to second order in eps (finite-r correction to A^2 set to zero)."""
    if gamma <= 0.0:
        raise ValueError("gamma must be > 0")
    alpha = math.sqrt((1.0 - gamma) / (1.0 + gamma))
    half = alpha ** (2 * r - 1) / (4.0 * gamma) * eps - amplitude_a2(gamma) * eps**2
    return 2.0 * half


def concurrence_at(
    point: ModelPoint, r: int, table: GTable | None = None, tol: float = DEFAULT_TOL
) -> ConcurrenceEntry:
    """Convenience: the concurrence at a single (point, r)."""
    if table is None or table.n_max < r + 1:
        table = GTable.build(point, r + 1, tol)
    return concurrence(correlator_set(point, r, table, mx2=0.0))


def epsilon0_empirical(
    gamma: float,
    r: int,
    side: str = "above",
    bracket_scale: tuple[float, float] = (0.2, 5.0),
    tol: float = 1e-13,
) -> float:
    """Zero crossing of eps -> C_r(eps) from the full numerics (bisection)."""
    e0 = epsilon0(gamma, r)

    def f(eps: float) -> float:
        point = ModelPoint.from_eps(gamma, eps, side)
        entry = concurrence_at(point, r, tol=tol)
        return max(entry.Cp, entry.Cpp)

    lo, hi = bracket_scale[0] * e0, bracket_scale[1] * e0
    if f(lo) <= 0.0 or f(hi) >= 0.0:
        raise UndeterminedError(
            f"no sign change for C_{r}(eps) in [{lo:.3e}, {hi:.3e}] at gamma={gamma}"
        )
    return brentq(f, lo, hi, xtol=1e-4 * e0, rtol=1e-10)


# ---------------------------------------------------------------------------
# isotropic (gamma = 0) specifics


def xx_range(eps: float) -> float | None:
    """Range of the concurrence of the isotropic chain as h -> 1 from below.

    The truncated concurrence series in eps is a cubic polynomial in r; the
    smallest positive real root is R.  Returns None when no such root exists.
    Asymptotically R ~ sqrt(3/2) eps^(-1/2).
    """
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    pi = math.pi
    s, s32, s2 = math.sqrt(eps), eps**1.5, eps**2
    c0 = 2.0 * math.sqrt(2.0) / pi * s + s32 / (3.0 * pi * math.sqrt(2.0))
    c1 = (
        -4.0 * eps / (pi * math.sqrt(3.0))
        + 8.0 * math.sqrt(3.0) / (3.0 * pi**2 * math.sqrt(2.0)) * s32
        + 2.0
        * (30.0 * math.sqrt(3.0) - 20.0 * pi - 5.0 * math.sqrt(3.0) * pi**2)
        / (45.0 * pi**3)
        * s2
    )
    c2 = -4.0 / (3.0 * pi * math.sqrt(2.0)) * s32
    c3 = (40.0 * pi + 8.0 * math.sqrt(3.0) * pi**2) / (45.0 * pi**3) * s2
    roots = np.roots([c3, c2, c1, c0])
    real = roots[np.abs(roots.imag) < 1e-9 * np.maximum(1.0, np.abs(roots.real))].real
    positive = sorted(x for x in real if x > 0.0)
    return positive[0] if positive else None


def xx_concurrence(h: float, r: int) -> ConcurrenceEntry:
    """Concurrence of the isotropic chain from closed-form Toeplitz entries."""
    from .correlators import toeplitz_log_det

    col = np.array([g_xx_closed_form(h, i - 1) for i in range(r)])
    row = np.array([g_xx_closed_form(h, -j - 1) for j in range(r)])
    log_abs, sign, _ = toeplitz_log_det(col, row)
    gxx = sign * math.exp(log_abs) / 4.0 if sign else 0.0
    gyy = gxx  # xy-plane symmetry
    mz = g_xx_closed_form(h, 0) / 2.0
    gr = g_xx_closed_form(h, r)
    gzz = mz**2 - gr * gr / 4.0  # G(-r) = G(r) at gamma = 0
    cs = CorrelatorSet(ModelPoint(0.0, h), r, gxx, gyy, gzz, mz, 0.0, 0.0)
    return concurrence(cs)


def _xx_sample_grid(r_budget: int) -> list[int]:
    rs = list(range(1, min(17, r_budget + 1)))
    if r_budget > 16:
        geom = np.unique(np.round(np.geomspace(17, r_budget, 36)).astype(int))
        rs.extend(int(r) for r in geom)
    return rs


def xx_two_tangle(eps: float, zero_tol: float = ZERO_TOL) -> tuple[float, float, int]:
    """tau_2 of the isotropic chain at h = 1 - eps, plus error bound and R.

    C_r varies slowly with r, so the sum 2 sum_r C_r^2 is taken over a
    monotone interpolant through sampled separations; the range itself is
    located exactly by integer bisection.
    """
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    h = 1.0 - eps
    r_est = xx_range(eps) or 8.0
    r_budget = int(1.5 * r_est) + 30
    rs, cs = [], []
    first_nonpos = None
    for r in _xx_sample_grid(r_budget):
        c = xx_concurrence(h, r).C
        if c <= zero_tol:
            first_nonpos = r
            break
        rs.append(r)
        cs.append(c)
    if not rs:
        return 0.0, 0.0, 0
    if first_nonpos is None:
        raise UndeterminedError(f"C_r still positive at r_budget={r_budget} (eps={eps})")
    # exact integer boundary of the range
    lo, hi = rs[-1], first_nonpos
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xx_concurrence(h, mid).C > zero_tol:
            lo = mid
            rs.append(mid)
            cs.append(xx_concurrence(h, mid).C)
        else:
            hi = mid
    big_r = lo
    order = np.argsort(rs)
    rs_arr = np.asarray(rs, float)[order]
    cs_arr = np.asarray(cs, float)[order]
    if len(rs_arr) >= 3:
        interp = PchipInterpolator(rs_arr, cs_arr)
        grid = np.arange(1, big_r + 1, dtype=float)
        cvals = interp(grid)
        cvals[cvals < 0.0] = 0.0
    else:
        cvals = cs_arr
    tau2 = 2.0 * float(np.sum(cvals**2))
    # interpolation error bound: resample at midpoints is overkill here; the
    # profile is near-cubic in r, bound by the largest sampling gap curvature
    gaps = np.diff(rs_arr)
    bound = float(np.max(gaps) ** 2 * np.max(np.abs(np.diff(cs_arr, 2))) if len(cs_arr) > 2 else 0.0)
    return tau2, bound, big_r


# ---------------------------------------------------------------------------
# tangles


@dataclass
class TangleReport:
    tau1: float
    tau2: float
    residual: float
    ratio: float  # nan when tau1 == 0
    truncation_r: int
    truncation_error_bound: float
    lower_bound_flag: bool = False


def tangles(
    point: ModelPoint,
    profile: ConcurrenceProfile | None = None,
    table: GTable | None = None,
    r_max: int = 80,
    tol: float = DEFAULT_TOL,
) -> TangleReport:
    """One-tangle, two-tangle, residual tangle and entanglement ratio.

    tau_1 = 1 - 4 (M_x^2 + M_z^2); M_x^2 is the long-distance plateau of
    |g^xx_r| in the symmetry-broken region (gamma > 0, h < 1), zero
    elsewhere.  tau_2 truncates the sum 2 sum C_r^2 with a geometric tail
    bound estimated from the last sampled decade of decay.
    """
    if point.gamma == 0.0:
        mz = g_xx_closed_form(point.h, 0) / 2.0
        tau1 = 1.0 - 4.0 * mz**2
        if point.h >= 1.0:
            return TangleReport(tau1, 0.0, tau1, math.nan if tau1 == 0 else 0.0, 0, 0.0)
        tau2, bound, big_r = xx_two_tangle(point.eps)
        ratio = tau2 / tau1 if tau1 > 0.0 else math.nan
        return TangleReport(tau1, tau2, tau1 - tau2, ratio, big_r, bound)

    if profile is None:
        profile = concurrence_profile(point, r_max, tol=tol, table=table)
    if table is None or table.n_max < 1:
        table = GTable.build(point, 2, tol)
    mz = table.g(0) / 2.0
    mx2, converged = mx2_estimate(point, tol=tol)
    tau1 = 1.0 - 4.0 * (mx2 + mz**2)
    cvals = [profile.entries[r].C for r in sorted(profile.entries)]
    tau2 = 2.0 * sum(c * c for c in cvals)
    if profile.range_result.status is RangeStatus.DETERMINED:
        bound = 0.0
    else:
        nz = [c for c in cvals if c > 0.0]
        if len(nz) < 5 or nz[-1] >= nz[-5]:
            raise UndeterminedError(
                f"C_r tail not decaying within r_max={profile.r_max} at "
                f"(gamma={point.gamma}, h={point.h})"
            )
        q = (nz[-1] / nz[-5]) ** 0.25
        bound = 2.0 * nz[-1] ** 2 * q**2 / (1.0 - q**2)
    ratio = tau2 / tau1 if tau1 > 0.0 else math.nan
    return TangleReport(
        tau1,
        tau2,
        tau1 - tau2,
        ratio,
        profile.r_max,
        bound,
        lower_bound_flag=profile.lower_bound_flag,
    )


# ---------------------------------------------------------------------------
# two-spin entanglement length


@dataclass
class Xi2seFit:
    xi: float
    fit_window: tuple[int, int]
    fit_residual: float
    analytic_xi: float  # 1/|ln alpha^2| for gamma > 0, nan otherwise
    monotone: bool = True


def xi2se(
    point: ModelPoint,
    profile: ConcurrenceProfile,
    zero_tol: float = ZERO_TOL,
    min_points: int = 6,
) -> Xi2seFit:
    """Decay length of C_r from the slope of ln C_r vs r.

    Window: r >= 3, C_r above 10 * zero_tol; near the factorized circle
    (h < 1) separations where the second-order suppression exceeds 20% are
    dropped so the pure exponential regime is fitted.
    """
    gamma = point.gamma
    candidates = [
        (r, c)
        for r, c in ((r, profile.entries[r].C) for r in sorted(profile.entries))
        if r >= 3 and c >= 10.0 * zero_tol
    ]
    near_circle = gamma > 0.0 and point.h < 1.0
    usable = candidates
    if near_circle:
        # drop separations where the second-order suppression bends the line;
        # relax the cut only as far as needed to keep a fittable window
        for cut in (0.1, 0.2, 0.3, 0.4, 0.5):
            usable = [
                (r, c)
                for r, c in candidates
                if epsilon0(gamma, r) > 0.0 and point.eps / epsilon0(gamma, r) <= cut
            ]
            if len(usable) >= min_points:
                break
    if len(usable) < min_points:
        raise FitError(
            f"only {len(usable)} usable separations for the xi fit at "
            f"(gamma={gamma}, h={point.h}); need >= {min_points}"
        )
    rs = np.array([r for r, _ in usable], float)
    logc = np.log([c for _, c in usable])
    monotone = bool(np.all(np.diff(logc) < 0.0))
    slope, intercept = np.polyfit(rs, logc, 1)
    if slope >= 0.0:
        raise FitError(f"non-decaying C_r in fit window at (gamma={gamma}, h={point.h})")
    resid = float(np.sqrt(np.mean((logc - (slope * rs + intercept)) ** 2)))
    alpha2 = (1.0 - gamma) / (1.0 + gamma)
    analytic = 1.0 / abs(math.log(alpha2)) if 0.0 < gamma < 1.0 else math.nan
    return Xi2seFit(-1.0 / slope, (int(rs[0]), int(rs[-1])), resid, analytic, monotone)
