"""Two-point functions of the infinite chain from Toeplitz determinants.

Entry convention (fixed by matching the factorized-point product values,
see tests/test_correlators.py): with T[i, j] = G(i - j - 1),

    g^xx_r = det T / 4            (r x r),
    g^yy_r = det T' / 4           with T'[i, j] = G(i - j + 1),
    g^zz_r = M_z^2 - G(r) G(-r) / 4,   M_z = G(0) / 2.

At the factorized point this reproduces M_z = alpha/2,
|g^xx| = gamma/(2(1+gamma)), g^yy = 0, g^zz = alpha^2/4 for every r.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, toeplitz

from .gfunction import DEFAULT_TOL, GTable
from .model import ModelPoint

#: diagonal dynamic range (in log10) beyond which a determinant is flagged
COND_FLAG_LOG10 = 12.0

#: defaults of the long-distance |g^xx_r| plateau estimator for M_x^2
MX2_R0 = 50
MX2_WINDOW = 20
MX2_DRIFT = 0.01


def toeplitz_log_det(col: np.ndarray, row: np.ndarray) -> tuple[float, int, float]:
    """Sign-log determinant of the Toeplitz matrix with given first column/row.

    Returns (log|det|, sign, diag_range_log10) where sign is in {-1, 0, +1};
    computed via pivoted LU so large matrices neither overflow nor underflow.
    """
    col = np.atleast_1d(np.asarray(col, dtype=float))
    row = np.atleast_1d(np.asarray(row, dtype=float))
    if col.shape != row.shape or col[0] != row[0]:
        raise ValueError("first column and first row must agree in size and corner")
    mat = toeplitz(col, row)
    with warnings.catch_warnings():
        # exactly singular matrices are a legitimate outcome (sign 0)
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(mat, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0.0):
        return -math.inf, 0, math.inf
    sign = 1 if (np.sum(piv != np.arange(len(piv))) % 2 == 0) else -1
    sign *= 1 if (np.sum(diag < 0.0) % 2 == 0) else -1
    absd = np.abs(diag)
    log_abs = float(np.sum(np.log(absd)))
    diag_range = float(np.log10(absd.max() / absd.min()))
    return log_abs, sign, diag_range


def _det(col: np.ndarray, row: np.ndarray) -> tuple[float, float]:
    log_abs, sign, diag_range = toeplitz_log_det(col, row)
    if sign == 0:
        return 0.0, diag_range
    return sign * math.exp(log_abs), diag_range


def gxx_from_table(table: GTable, r: int) -> tuple[float, float]:
    """g^xx_r and the determinant health metric."""
    col = np.array([table.g(i - 1) for i in range(r)])
    row = np.array([table.g(-j - 1) for j in range(r)])
    det, diag_range = _det(col, row)
    return det / 4.0, diag_range


def gyy_from_table(table: GTable, r: int) -> tuple[float, float]:
    col = np.array([table.g(i + 1) for i in range(r)])
    row = np.array([table.g(1 - j) for j in range(r)])
    det, diag_range = _det(col, row)
    return det / 4.0, diag_range


@dataclass
class CorrelatorSet:
    """Correlators and magnetizations of one (gamma, h, r)."""

    point: ModelPoint
    r: int
    gxx: float
    gyy: float
    gzz: float
    mz: float
    mx2_estimate: float
    det_log_condition: float
    flags: list[str] = field(default_factory=list)


def mx2_estimate(
    point: ModelPoint,
    table: GTable | None = None,
    r0: int = MX2_R0,
    window: int = MX2_WINDOW,
    tol: float = DEFAULT_TOL,
) -> tuple[float, bool]:
    """Spontaneous in-plane magnetization squared from the |g^xx_r| plateau.

    Returns (mx2, converged).  Zero (and converged) wherever the symmetry is
    unbroken: gamma = 0, or h >= 1.  The plateau is the average of |g^xx_r|
    over r in [r0, r0 + window); convergence is judged by the drift between
    consecutive windows.
    """
    if point.gamma == 0.0 or point.h >= 1.0:
        return 0.0, True
    depth = r0 + 2 * window + 1
    if table is None:
        table = GTable.build(point, depth, tol)
    elif table.n_max < depth:
        table = table.extended(depth)
    w1 = np.mean([abs(gxx_from_table(table, r)[0]) for r in range(r0, r0 + window)])
    w2 = np.mean(
        [abs(gxx_from_table(table, r)[0]) for r in range(r0 + window, r0 + 2 * window)]
    )
    drift = abs(w2 - w1) / max(w2, 1e-300)
    return float(w2), drift < MX2_DRIFT


def correlator_set(
    point: ModelPoint,
    r: int,
    table: GTable,
    mx2: float | None = None,
) -> CorrelatorSet:
    """Assemble the CorrelatorSet at separation r from a G table.

    ``mx2`` may be passed in (e.g. precomputed once per point); if omitted it
    is left at 0 in the unbroken regime and estimated otherwise.
    """
    if r < 1:
        raise ValueError("separation r must be >= 1")
    if table.n_max < r + 1:
        raise ValueError(f"table depth n_max={table.n_max} insufficient for r={r}")
    flags: list[str] = []
    gxx, c1 = gxx_from_table(table, r)
    gyy, c2 = gyy_from_table(table, r)
    mz = table.g(0) / 2.0
    gzz = mz**2 - table.g(r) * table.g(-r) / 4.0
    cond = max(c1, c2)
    if cond > COND_FLAG_LOG10:
        flags.append("ill_conditioned_det")
    if mx2 is None:
        mx2, converged = mx2_estimate(point, table=table)
        if not converged:
            flags.append("mx2_not_converged")
    return CorrelatorSet(point, r, gxx, gyy, gzz, mz, mx2, cond, flags)


def correlators_csv_rows(sets: list[CorrelatorSet]) -> list[list[str]]:
    rows = [["gamma", "h", "r", "gxx", "gyy", "gzz", "mz", "mx2", "flag"]]
    for cs in sets:
        rows.append(
            [
                f"{cs.point.gamma:.12g}",
                f"{cs.point.h:.12g}",
                str(cs.r),
                f"{cs.gxx:.12e}",
                f"{cs.gyy:.12e}",
                f"{cs.gzz:.12e}",
                f"{cs.mz:.12e}",
                f"{cs.mx2_estimate:.12e}",
                ";".join(cs.flags),
            ]
        )
    return rows
