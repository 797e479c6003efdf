import math

import numpy as np
import pytest

from xychain.expansions import NEXT_ORDER, DomainError, Oracle, evaluate, residual_order


def test_mz_series_value():
    gamma = 0.5
    alpha = math.sqrt(1.0 / 3.0)
    got = evaluate(Oracle.MZ, gamma=gamma, eps=1e-3, side="above")
    assert got == pytest.approx(alpha / 2.0 + 1e-3 / (4.0 * gamma), rel=1e-14)


def test_cr_first_consistent_with_correlator_series():
    # assembling C from the four correlator series must reproduce the
    # first-order concurrence coefficient
    gamma, r = 0.5, 3
    eps = 1e-6

    def assembled(e):
        gxx = evaluate(Oracle.GXX, gamma=gamma, eps=e, r=r)
        gyy = evaluate(Oracle.GYY, gamma=gamma, eps=e, r=r)
        gzz = evaluate(Oracle.GZZ, gamma=gamma, eps=e, r=r)
        mz = evaluate(Oracle.MZ, gamma=gamma, eps=e)
        cp = abs(gxx + gyy) - math.sqrt((0.25 + gzz) ** 2 - mz**2)
        cpp = abs(gxx - gyy) + gzz - 0.25
        return 2.0 * max(0.0, cp, cpp)

    slope = assembled(eps) / eps
    want = evaluate(Oracle.CR_FIRST, gamma=gamma, eps=1.0, r=r)
    assert slope == pytest.approx(want, rel=1e-4)


def test_xx_mz_value():
    # M_z = G(0)/2 = 1/4 at h = 1/sqrt(2)
    got = evaluate(Oracle.XX_MZ, h=math.sqrt(0.5))
    assert got == pytest.approx(0.25, rel=1e-12)
    assert evaluate(Oracle.XX_MZ, h=1.2) == 0.5


def test_ratio_limits():
    assert evaluate(Oracle.RATIO, gamma=1.0) == 1.0
    assert evaluate(Oracle.RATIO, gamma=0.5) == pytest.approx(2.25 / 3.5)


def test_pfeuty_series():
    assert evaluate(Oracle.PFEUTY_C1, h=0.2) == pytest.approx(0.0050375)
    assert evaluate(Oracle.PFEUTY_C2, h=0.2) == pytest.approx(1.25e-5)


def test_gamma1_values():
    assert evaluate(Oracle.GAMMA1_TAU1, eps=0.1) == pytest.approx(0.1**4 / 32.0)
    assert evaluate(Oracle.GAMMA1_RESIDUAL, eps=0.1) == pytest.approx(0.1**6 / 64.0)


def test_epsilon0_matches_entanglement_module():
    from xychain.entanglement import epsilon0

    got = evaluate(Oracle.EPSILON0, gamma=0.4, r=6)
    assert got == epsilon0(0.4, 6)


def test_xx_r_exponent():
    assert evaluate(Oracle.XX_R_EXPONENT) == -0.5


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate(Oracle.GXX, gamma=0.0, eps=1e-3, r=1)  # isotropic excluded
    with pytest.raises(DomainError):
        evaluate(Oracle.GXX, gamma=0.5, eps=1e-3, r=1, side="below")
    with pytest.raises(DomainError):
        evaluate(Oracle.XX_GXX, gamma=0.5, eps=1e-3, r=1)
    with pytest.raises(DomainError):
        evaluate(Oracle.ONE_TANGLE, gamma=1.0, eps=1e-3)  # gamma1 oracles instead
    with pytest.raises(DomainError):
        evaluate(Oracle.R_ASYMPTOTIC, gamma=1.0, eps=1e-3)
    with pytest.raises(DomainError):
        evaluate(Oracle.GXX, gamma=0.5, eps=-1.0, r=1)


def test_next_order_table():
    assert NEXT_ORDER[Oracle.CR_FIRST] == 2.0
    assert NEXT_ORDER[Oracle.XX_CR] == 2.5
    assert NEXT_ORDER[Oracle.ONE_TANGLE] == 3.0


def test_residual_order_recovers_synthetic_exponent():
    gamma, r = 0.5, 2

    def provider(eps):
        return evaluate(Oracle.CR_FIRST, gamma=gamma, eps=eps, r=r) + 3.0 * eps**2

    slope = residual_order(
        Oracle.CR_FIRST, provider, np.logspace(-4, -2, 7), gamma=gamma, r=r
    )
    assert slope == pytest.approx(2.0, abs=1e-6)


def test_residual_order_noise_floor_returns_none():
    gamma, r = 0.5, 2

    def provider(eps):
        return evaluate(Oracle.CR_FIRST, gamma=gamma, eps=eps, r=r)  # exact

    slope = residual_order(
        Oracle.CR_FIRST, provider, np.logspace(-4, -2, 7), gamma=gamma, r=r
    )
    assert slope is None


def test_residual_order_needs_two_decades():
    with pytest.raises(ValueError):
        residual_order(
            Oracle.CR_FIRST, lambda e: 0.0, np.logspace(-3, -2.5, 5), gamma=0.5, r=1
        )
