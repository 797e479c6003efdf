import math

import numpy as np
import pytest
from scipy.linalg import toeplitz

from xychain.correlators import (
    correlator_set,
    gxx_from_table,
    gyy_from_table,
    mx2_estimate,
    toeplitz_log_det,
)
from xychain.gfunction import GTable
from xychain.model import ModelPoint


def test_log_det_matches_dense_determinant():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3, 5, 8):
        col = rng.standard_normal(n)
        row = rng.standard_normal(n)
        row[0] = col[0]
        log_abs, sign, _ = toeplitz_log_det(col, row)
        det = np.linalg.det(toeplitz(col, row))
        assert sign == np.sign(det)
        assert sign * math.exp(log_abs) == pytest.approx(det, rel=1e-10)


def test_log_det_singular():
    col = np.array([1.0, 1.0])
    row = np.array([1.0, 1.0])
    log_abs, sign, _ = toeplitz_log_det(col, row)
    assert sign == 0
    assert log_abs == -math.inf


def test_log_det_no_overflow():
    n = 400
    col = np.zeros(n)
    col[0] = 10.0  # det = 10^400, overflows a float but not its log
    log_abs, sign, _ = toeplitz_log_det(col, col)
    assert sign == 1
    assert log_abs == pytest.approx(n * math.log(10.0), rel=1e-12)


@pytest.mark.parametrize("gamma,h,r", [(0.5, 0.8, 1), (0.5, 0.8, 3), (0.9, 1.2, 4)])
def test_gxx_gyy_against_dense_cofactor(gamma, h, r):
    # independent oracle: assemble the r x r Toeplitz matrices explicitly
    point = ModelPoint(gamma, h)
    table = GTable.build(point, r + 1, 1e-12)
    mxx = np.array([[table.g(i - j - 1) for j in range(r)] for i in range(r)])
    myy = np.array([[table.g(i - j + 1) for j in range(r)] for i in range(r)])
    assert gxx_from_table(table, r)[0] == pytest.approx(np.linalg.det(mxx) / 4.0, rel=1e-9)
    assert gyy_from_table(table, r)[0] == pytest.approx(np.linalg.det(myy) / 4.0, rel=1e-9)


def test_factorized_point_exact_values():
    # on the circle all correlators are those of the product state
    gamma = 0.6
    point = ModelPoint(gamma, math.sqrt(1.0 - gamma**2))
    alpha = point.alpha
    table = GTable.build(point, 7, 1e-12)
    for r in (1, 2, 5):
        cs = correlator_set(point, r, table, mx2=0.0)
        want_xx = (-1.0) ** r * gamma / (2.0 * (1.0 + gamma))
        assert cs.gxx == pytest.approx(want_xx, abs=1e-10)
        assert cs.gyy == pytest.approx(0.0, abs=1e-10)
        assert cs.gzz == pytest.approx(alpha**2 / 4.0, abs=1e-10)
        assert cs.mz == pytest.approx(alpha / 2.0, abs=1e-10)


def test_gzz_definition():
    point = ModelPoint(0.3, 1.1)
    table = GTable.build(point, 4, 1e-12)
    cs = correlator_set(point, 3, table, mx2=0.0)
    mz = table.g(0) / 2.0
    assert cs.gzz == pytest.approx(mz**2 - table.g(3) * table.g(-3) / 4.0, abs=1e-14)
    assert cs.mz == pytest.approx(mz)


def test_mx2_zero_in_unbroken_regime():
    assert mx2_estimate(ModelPoint(0.0, 0.5)) == (0.0, True)
    assert mx2_estimate(ModelPoint(0.5, 1.4)) == (0.0, True)


def test_mx2_plateau_matches_large_distance_gxx():
    point = ModelPoint(0.6, 0.5)
    mx2, converged = mx2_estimate(point)
    assert converged
    table = GTable.build(point, 122, 1e-10)
    far = abs(gxx_from_table(table, 120)[0])
    assert mx2 == pytest.approx(far, rel=1e-4)
    assert 0.0 < mx2 < 0.25


def test_correlator_set_validation():
    point = ModelPoint(0.5, 0.8)
    table = GTable.build(point, 3, 1e-11)
    with pytest.raises(ValueError):
        correlator_set(point, 0, table)
    with pytest.raises(ValueError):
        correlator_set(point, 5, table)  # table too shallow


def test_staggering_sign():
    # g^xx alternates with (-1)^r near factorization
    point = ModelPoint.from_eps(0.5, 1e-3, "above")
    table = GTable.build(point, 6, 1e-12)
    for r in (1, 2, 3, 4, 5):
        gxx, _ = gxx_from_table(table, r)
        assert math.copysign(1.0, gxx) == (-1.0) ** r
