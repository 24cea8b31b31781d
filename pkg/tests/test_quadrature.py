"""Adaptive Gauss-Kronrod integration and the golden-section maximizer."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from rsma_dense.errors import NoConvergence
from rsma_dense.model import QuadratureSpec
from rsma_dense.quadrature import golden_section_max, integrate

SPEC = QuadratureSpec()


def test_exponential_tail():
    value, err = integrate(lambda t: math.exp(-t), (0.0, math.inf), SPEC)
    assert value == pytest.approx(1.0, rel=1e-10)
    assert err < 1e-8


def test_log_identity():
    """int_0^inf (1 - e^{-sx}) e^{-s} / s ds = ln(1 + x).

    This is the exact identity that turns an expected log into an integral
    over Laplace transforms, so getting it right end-to-end is load-bearing
    for every rate computation in the package.
    """
    for x in (0.1, 1.0, 3.0, 10.0):
        value, _ = integrate(
            lambda s: -math.expm1(-s * x) * math.exp(-s) / s,
            (0.0, math.inf),
            SPEC,
        )
        assert value == pytest.approx(math.log1p(x), rel=1e-9)


def test_quartic_exponent():
    # substitution u = r^4 gives exactly 1/4
    value, _ = integrate(lambda r: r**3 * math.exp(-(r**4)), (0.0, math.inf), SPEC)
    assert value == pytest.approx(0.25, rel=1e-10)


def test_finite_interval():
    value, _ = integrate(math.sin, (0.0, math.pi), SPEC)
    assert value == pytest.approx(2.0, rel=1e-12)


def test_damped_oscillation():
    value, _ = integrate(
        lambda t: math.exp(-t) * math.cos(t), (0.0, math.inf), SPEC
    )
    assert value == pytest.approx(0.5, rel=1e-9)


@given(st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=50)
def test_exponential_family(a):
    value, _ = integrate(lambda t: math.exp(-a * t), (0.0, math.inf), SPEC)
    assert value == pytest.approx(1.0 / a, rel=1e-8)


def test_no_transform_path():
    plain = QuadratureSpec(transform="none")
    value, _ = integrate(lambda t: math.exp(-t * t), (0.0, 6.0), plain)
    assert value == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-10)


def test_budget_exhaustion_carries_partial_result():
    starved = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-250, max_subdivisions=3)
    with pytest.raises(NoConvergence) as info:
        integrate(
            lambda t: 1.0 / math.sqrt(abs(t - 0.31) + 1e-12), (0.0, 1.0), starved
        )
    assert info.value.value is not None
    assert info.value.error_estimate > 0.0


def test_integrable_singularity_converges_with_budget():
    value, _ = integrate(lambda t: 1.0 / math.sqrt(t), (1e-12, 1.0), SPEC)
    assert value == pytest.approx(2.0, rel=1e-5)


def test_golden_section_parabola():
    x, fx = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, 1e-6)
    assert x == pytest.approx(0.3, abs=1e-5)
    assert fx == pytest.approx(0.0, abs=1e-9)


def test_golden_section_monotone_hits_edge():
    x, fx = golden_section_max(lambda x: x, 0.0, 1.0, 1e-5)
    assert x > 0.999
    assert fx == pytest.approx(x)


def test_golden_section_returns_evaluated_pair():
    calls = {}

    def f(x):
        calls[x] = math.cos(x)
        return calls[x]

    x, fx = golden_section_max(f, 0.0, 2.0, 1e-4)
    assert fx == calls[x]
    assert x == pytest.approx(0.0, abs=1e-3)
