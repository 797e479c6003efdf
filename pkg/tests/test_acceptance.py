"""Acceptance suite, run through the same registry the CLI uses.

Most criteria are asserted wholesale; the first-order concurrence law is
parametrized per (gamma, r) subcase so each tolerance check stands alone.
"""

import pytest

from xychain import acceptance

_cache = {}


def _run(name):
    if name not in _cache:
        _cache[name] = acceptance.CRITERIA[name]()
    return _cache[name]


def _assert_all(result):
    failed = [s for s in result.subresults if not s.passed]
    assert not failed, "\n" + "\n".join(f"{s.label}: {s.detail}" for s in failed)


def test_registry_complete():
    assert set(acceptance.CRITERIA) == {
        "pfeuty",
        "first-order-law",
        "ratio-limits",
        "range-asymptote",
        "xx-range-exponent",
        "divergence-crossover",
        "xi2se-identity",
        "monogamy",
        "ed-oracle",
        "residual-orders",
    }


def test_pfeuty():
    _assert_all(_run("pfeuty"))


@pytest.mark.parametrize("gamma", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("r", [1, 2, 4, 8])
def test_first_order_law(gamma, r):
    result = _run("first-order-law")
    label = f"gamma={gamma}, r={r}"
    sub = next(s for s in result.subresults if s.label == label)
    assert sub.passed, sub.detail


def test_ratio_limits():
    _assert_all(_run("ratio-limits"))


def test_range_asymptote():
    _assert_all(_run("range-asymptote"))


def test_xx_range_exponent():
    _assert_all(_run("xx-range-exponent"))


def test_divergence_crossover():
    _assert_all(_run("divergence-crossover"))


def test_xi2se_identity():
    _assert_all(_run("xi2se-identity"))


def test_monogamy():
    _assert_all(_run("monogamy"))


def test_ed_oracle():
    _assert_all(_run("ed-oracle"))


def test_residual_orders():
    _assert_all(_run("residual-orders"))
