"""Interference functionals and distance-averaged kernels.

The closed forms here carry the whole analytic engine, so they get three
independent checks: frozen values from 40-digit quadrature of the Euler
integral representation, an internal series/closed-form dual route, and a
direct Monte Carlo estimate of the shot-noise Laplace transform over a
simulated point field.
"""

import math

import numpy as np
import pytest

from rsma_dense.errors import DomainError
from rsma_dense.kernels import (
    _ball_weight,
    distance_kernel,
    distance_kernel_limit,
    exclusion_exponent,
    exclusion_exponent_excess,
    exponent_growth_rate,
    interference_laplace,
    interferer_gain_mgf,
    radial_decay_integral,
)
from rsma_dense.model import FadingProfile, KernelContext, NetworkParams

CTX = KernelContext.for_network(NetworkParams())

# mpmath, 40 digits, from the Euler integral
#   L(t) = N t (1+t)^{-(N+1)} Int_0^1 (1-u)^{-1/2} (1 - u t/(1+t))^{-(N+1)} du
EXCESS_AT_1 = 1.2853981633974483  # = pi/4 + 1/2
EXCESS_AT_03 = 0.5052291775429023
H_AT_1 = 1.7853981633974483
# mpmath: quad(exp(-u - 0.7 (u/0.02)^2), [0, inf])
BALL_WEIGHT_07 = 0.020902160642088399


def _noise_ctx(lambda_b=0.01, power=5.0, noise=5.0, alpha=4.0):
    return KernelContext.for_network(
        NetworkParams(lambda_b=lambda_b, power=power, noise=noise, alpha=alpha)
    )


def test_interferer_mgf_single_stream():
    for t in (0.0, 0.5, 1.0, 7.0):
        assert interferer_gain_mgf(t, CTX) == pytest.approx(1.0 / (1.0 + t), rel=1e-14)


def test_interferer_mgf_multi_stream():
    ctx = KernelContext.for_network(
        NetworkParams(groups=3, antennas=6),
        fading=FadingProfile(4.0, 3.0),
    )
    assert interferer_gain_mgf(2.0, ctx) == pytest.approx(3.0**-3, rel=1e-14)


def test_excess_vanishes_at_zero():
    assert exclusion_exponent_excess(0.0, CTX) == 0.0


def test_excess_closed_form_frozen_points():
    assert exclusion_exponent_excess(1.0, CTX) == pytest.approx(EXCESS_AT_1, rel=1e-10)
    assert exclusion_exponent_excess(0.3, CTX) == pytest.approx(EXCESS_AT_03, rel=1e-10)


def test_excess_series_matches_closed_form():
    for t in np.logspace(-2, 2, 25):
        closed = exclusion_exponent_excess(float(t), CTX, method="closed")
        series = exclusion_exponent_excess(float(t), CTX, method="series")
        assert series == pytest.approx(closed, rel=1e-8)


def test_excess_series_matches_closed_form_multi_stream():
    ctx = KernelContext.for_network(
        NetworkParams(groups=2, antennas=5), fading=FadingProfile(4.0, 2.0)
    )
    for t in (0.05, 0.4, 1.0, 6.0):
        closed = exclusion_exponent_excess(t, ctx, method="closed")
        series = exclusion_exponent_excess(t, ctx, method="series")
        assert series == pytest.approx(closed, rel=1e-9)


def test_exponent_at_zero_is_one():
    assert exclusion_exponent(0.0, CTX) == pytest.approx(1.0, abs=1e-14)


def test_exponent_frozen_point():
    assert exclusion_exponent(1.0, CTX) == pytest.approx(H_AT_1, rel=1e-10)


def test_exponent_increasing_and_at_least_one():
    grid = [0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0]
    values = [exclusion_exponent(t, CTX) for t in grid]
    assert all(v >= 1.0 - 1e-12 for v in values)
    assert all(b > a for a, b in zip(values, values[1:]))


def test_exponent_growth_rate():
    # H(t) ~ kappa t^delta; for a single interfering stream at alpha=4 the
    # coefficient is Gamma(1/2) Gamma(3/2) = pi/2
    kappa = exponent_growth_rate(CTX)
    assert kappa == pytest.approx(math.pi / 2.0, rel=1e-12)
    t = 1e8
    assert exclusion_exponent(t, CTX) / t**0.5 == pytest.approx(kappa, rel=1e-2)


def test_radial_decay_dilute_limit():
    # as lambda_b -> 0 the r^2 shielding term drops out and the integral
    # collapses to 1/(alpha y)
    ctx = KernelContext.for_network(NetworkParams(lambda_b=1e-12))
    y = 0.7
    assert radial_decay_integral(y, 1.0, ctx) == pytest.approx(1.0 / (4.0 * y), rel=1e-4)


def test_ball_weight_frozen_point():
    assert _ball_weight(0.7, 0.02, 4.0, CTX) == pytest.approx(BALL_WEIGHT_07, rel=1e-10)


def test_ball_weight_erfc_route_matches_quadrature():
    ctx = _noise_ctx()
    for y in np.logspace(-2, 1, 12):
        closed = distance_kernel(1, float(y), ctx, method="closed")
        general = distance_kernel(1, float(y), ctx, method="quadrature")
        assert closed == pytest.approx(general, rel=1e-6)


def test_ball_weight_complements_radial_integral():
    # w = 1 - alpha y D(y) -- the integration-by-parts identity, checked
    # where the literal difference still has enough digits left
    ctx = _noise_ctx(lambda_b=0.01)
    for y in (0.5, 1.0, 2.0):
        t = ctx.params.snr * y
        h = exclusion_exponent(t, ctx)
        c = math.pi * ctx.params.lambda_b * h
        w = _ball_weight(y, c, 4.0, ctx)
        d = radial_decay_integral(y, t, ctx)
        assert w == pytest.approx(1.0 - 4.0 * y * d, rel=1e-7)


def test_ball_weight_general_alpha():
    ctx = _noise_ctx(alpha=3.3)
    for y in (0.2, 1.0, 4.0):
        t = ctx.params.snr * y
        h = exclusion_exponent(t, ctx)
        c = math.pi * ctx.params.lambda_b * h
        w = _ball_weight(y, c, 3.3, ctx)
        d = radial_decay_integral(y, t, ctx)
        assert 0.0 < w < 1.0
        assert w == pytest.approx(1.0 - 3.3 * y * d, rel=1e-6)


def test_limit_kernel_ordering():
    # the nearer user always sees the better kernel
    for t in (0.05, 0.3, 1.0, 5.0, 40.0):
        f1 = distance_kernel_limit(1, t, CTX)
        f2 = distance_kernel_limit(2, t, CTX)
        assert f1 > f2 > 0.0


def test_limit_kernel_composition():
    # F_2 = F_1 / H exactly, by construction of the two serving distances
    for t in (0.1, 0.7, 2.0, 12.0):
        h = exclusion_exponent(t, CTX)
        assert distance_kernel_limit(2, t, CTX) == pytest.approx(
            distance_kernel_limit(1, t, CTX) / h, rel=1e-13
        )


def test_limit_kernel_rejects_bad_input():
    with pytest.raises(DomainError):
        distance_kernel_limit(3, 1.0, CTX)
    with pytest.raises(DomainError):
        distance_kernel_limit(1, 0.0, CTX)


def test_finite_noise_kernel_needs_noise():
    with pytest.raises(DomainError):
        distance_kernel(1, 0.5, CTX)


def test_finite_noise_kernel_below_limit():
    # the ball weight strictly shrinks the zero-noise kernel
    ctx = _noise_ctx()
    for y in (0.1, 1.0, 3.0):
        t = ctx.params.snr * y
        assert distance_kernel(1, y, ctx) < distance_kernel_limit(1, t, ctx)


def test_finite_noise_kernel_method_guardrails():
    ctx = _noise_ctx(alpha=3.0)
    with pytest.raises(DomainError):
        distance_kernel(1, 0.5, ctx, method="closed")
    with pytest.raises(DomainError):
        distance_kernel(1, 0.5, _noise_ctx(), method="simpson")


def test_interference_laplace_endpoints():
    ctx = _noise_ctx(lambda_b=1e-4, power=5.0, noise=5.0)
    assert interference_laplace(0.0, 100.0, ctx) == 1.0
    values = [interference_laplace(z, 100.0, ctx) for z in (1e3, 1e4, 1e5)]
    assert all(1.0 > a > b for a, b in zip(values, values[1:]))


def test_interference_laplace_grows_with_exclusion():
    ctx = _noise_ctx(lambda_b=1e-4, power=5.0, noise=5.0)
    z = 5e5
    values = [interference_laplace(z, r, ctx) for r in (30.0, 60.0, 120.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_interference_laplace_requires_noise():
    with pytest.raises(DomainError):
        interference_laplace(1.0, 50.0, CTX)


def test_interference_laplace_against_simulated_field():
    """Monte Carlo oracle for the whole exclusion-exponent closed form.

    Drop Poisson fields outside the serving disk, mark each point with a
    unit-mean exponential gain, and average exp(-z I / sigma^2) directly.
    A wrong H(t) -- e.g. the excess term off by a (1+t) factor -- moves the
    analytic value by ~40%, two orders of magnitude above the MC noise.
    """
    lam, r0, alpha = 1e-4, 40.0, 4.0
    ctx = _noise_ctx(lambda_b=lam, power=5.0, noise=5.0, alpha=alpha)
    eta = ctx.params.snr  # = 1
    z = r0**alpha  # puts the exponent argument at t = eta z r0^-alpha = 1

    rng = np.random.default_rng(20260814)
    m, r_max = 20000, 600.0
    lam_count = lam * math.pi * (r_max**2 - r0**2)
    counts = rng.poisson(lam_count, size=m)
    total = int(counts.sum())
    u = rng.random(total)
    radii = np.sqrt(r0**2 + u * (r_max**2 - r0**2))
    marks = rng.exponential(1.0, total)
    contrib = z * eta * marks * radii ** (-alpha)
    idx = np.repeat(np.arange(m), counts)
    expo = np.bincount(idx, weights=contrib, minlength=m)
    x = np.exp(-expo)
    mc_mean = float(x.mean())
    mc_se = float(x.std(ddof=1) / math.sqrt(m))

    analytic = interference_laplace(z, r0, ctx)
    # the simulation truncates interferers beyond r_max; compensate the
    # reference by the exact mean of the omitted tail
    tail = z * eta * 2.0 * math.pi * lam * r_max ** (2.0 - alpha) / (alpha - 2.0)
    reference = analytic * math.exp(tail)

    assert mc_se < 0.01 * reference
    assert abs(mc_mean - reference) <= 3.0 * mc_se
