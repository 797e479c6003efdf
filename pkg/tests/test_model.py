import math

import pytest

from xychain.model import ModelPoint, Regime


def test_alpha_endpoints():
    assert ModelPoint(0.0, 0.5).alpha == 1.0
    assert ModelPoint(1.0, 0.5).alpha == 0.0
    assert math.isclose(ModelPoint(0.5, 0.5).alpha, math.sqrt(1.0 / 3.0))


def test_factorizing_field():
    assert math.isclose(ModelPoint(0.6, 0.0).h_f, 0.8)
    assert ModelPoint(0.0, 0.3).h_f == 1.0
    assert ModelPoint(1.0, 0.3).h_f == 0.0


def test_eps_and_side():
    p = ModelPoint(0.6, 0.9)
    assert math.isclose(p.eps, 0.1)
    assert p.side == "above"
    q = ModelPoint(0.6, 0.7)
    assert math.isclose(q.eps, 0.1)
    assert q.side == "below"


def test_regime_classification():
    assert ModelPoint(0.5, 0.1).regime is Regime.BROKEN_SYM_LOWER_BOUND
    assert ModelPoint(0.5, 1.5).regime is Regime.UNBROKEN
    assert ModelPoint(0.0, 0.5).regime is Regime.UNBROKEN
    assert ModelPoint(0.6, 0.8).regime is Regime.FACTORIZED_CIRCLE
    assert ModelPoint(0.0, 1.0).regime is Regime.FACTORIZED_LINE
    assert ModelPoint(0.0, 1.7).regime is Regime.FACTORIZED_LINE


def test_from_eps_round_trip():
    for side in ("above", "below"):
        p = ModelPoint.from_eps(0.4, 1e-3, side)
        assert math.isclose(p.eps, 1e-3)
        assert p.side == side


def test_validation():
    with pytest.raises(ValueError):
        ModelPoint(-0.1, 0.5)
    with pytest.raises(ValueError):
        ModelPoint(1.1, 0.5)
    with pytest.raises(ValueError):
        ModelPoint(0.5, -0.1)
    with pytest.raises(ValueError):
        ModelPoint.from_eps(0.5, 2.0, "below")
    with pytest.raises(ValueError):
        ModelPoint.from_eps(0.5, 0.1, "sideways")


def test_immutable():
    p = ModelPoint(0.5, 0.5)
    with pytest.raises(Exception):
        p.h = 1.0
