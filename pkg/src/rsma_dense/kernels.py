"""Interference functionals and distance-averaged kernels.

The analytic rates all reduce to one-dimensional integrals whose integrands
are built from three ingredients, implemented here:

* ``exclusion_exponent`` -- the factor H(t) in the Laplace transform of the
  aggregate interference seen outside an exclusion ball of radius r,
  ``E[exp(-z I / sigma^2) | r] = exp(pi * lambda_b * r^2 * (1 - H(eta z r^-alpha)))``.
* ``radial_decay_integral`` -- the serving-distance integral D(y, t) that
  carries the noise term for finite-SNR evaluations.
* ``distance_kernel`` / ``distance_kernel_limit`` -- the kernels F_1, F_2
  obtained by averaging over the near/far serving-distance distributions;
  the ``_limit`` variant is the interference-limited (zero-noise) form,
  which depends on neither the BS density nor the transmit power.

H(t) has both a closed form (a Gauss 2F1 evaluation) and a literal series;
they agree to high accuracy where the series converges, and the closed form
is the default everywhere because the series needs O(t) terms for large t.
"""

from __future__ import annotations

import math

from .errors import DomainError, NoConvergence
from .model import KernelContext
from .quadrature import integrate
from .specfun import erfcx, gamma_mgf, gauss_2f1, ln_gamma


def interferer_gain_mgf(t: float, ctx: KernelContext) -> float:
    """Laplace transform of a single interferer's channel gain at argument t."""
    return gamma_mgf(t, ctx.fading.interference_shape)


def exclusion_exponent_excess(t: float, ctx: KernelContext, method: str = "closed") -> float:
    """The part of H(t) beyond the bare interferer MGF (zero at t = 0).

    ``method='closed'`` evaluates N*t / ((1-delta)*(1+t)^(N+1)) * 2F1(N+1, 1;
    2-delta; t/(1+t)); ``method='series'`` sums the defining series with
    terms Gamma(1-delta) * t^(j+1) * E[psi^(j+1) e^(-t psi)] / Gamma(2-delta+j).
    The two routes are mutual oracles; the closed form is preferred since the
    series slows down badly once t >> 1.
    """
    if t < 0.0:
        raise DomainError(f"argument must be nonnegative, got {t}")
    if t == 0.0:
        return 0.0
    delta = ctx.params.delta
    shape = ctx.fading.interference_shape
    if method == "closed":
        x = t / (1.0 + t)
        lead = shape * t / ((1.0 - delta) * (1.0 + t) ** (shape + 1.0))
        return lead * gauss_2f1(shape + 1.0, 1.0, 2.0 - delta, x, ctx.series)
    if method == "series":
        return _excess_series(t, shape, delta, ctx)
    raise DomainError(f"unknown method {method!r}")


def _excess_series(t: float, shape: float, delta: float, ctx: KernelContext) -> float:
    # term_j = Gamma(1-delta) * t^(j+1) * gamma_weighted_moment(t, shape, j)
    #          / Gamma(2-delta+j)
    # with ratio term_j / term_{j-1} = t (shape+j) / ((1-delta+j)(1+t)) -> t/(1+t),
    # so the sum always terminates for finite t (slowly when t >> 1).
    term = t * shape * math.exp(-(shape + 1.0) * math.log1p(t)) / (1.0 - delta)
    acc = term
    for j in range(1, ctx.series.max_terms):
        term *= t * (shape + j) / ((1.0 - delta + j) * (1.0 + t))
        acc += term
        if term < ctx.series.rel_tol * acc:
            return acc
    raise NoConvergence(
        f"exclusion-exponent series stalled at t={t}", value=acc, error_estimate=term
    )


def exclusion_exponent(t: float, ctx: KernelContext, method: str = "closed") -> float:
    """H(t) = interferer MGF + excess; equals 1 at t = 0 and grows like t^delta."""
    return interferer_gain_mgf(t, ctx) + exclusion_exponent_excess(t, ctx, method)


def radial_decay_integral(y: float, t: float, ctx: KernelContext) -> float:
    """D(y, t) = integral of r^(alpha-1) * exp(-y r^alpha - pi lambda_b H(t) r^2) dr.

    Evaluated by adaptive quadrature for any alpha; the alpha = 4 kernel
    path below uses the equivalent erfc closed form instead.
    """
    if y <= 0.0:
        raise DomainError(f"y must be positive, got {y}")
    alpha = ctx.params.alpha
    c = math.pi * ctx.params.lambda_b * exclusion_exponent(t, ctx)
    value, _ = integrate(
        lambda r: r ** (alpha - 1.0) * math.exp(-y * r**alpha - c * r * r),
        (0.0, math.inf),
        ctx.quad,
    )
    return value


def _ball_weight(y: float, c: float, alpha: float, ctx: KernelContext) -> float:
    """The combination 1 - alpha*y*D(y) for exponent coefficient c, computed
    from its positive-integrand form 2c * int r exp(-c r^2 - y r^alpha) dr
    (integration by parts), which avoids the catastrophic cancellation the
    literal difference suffers when y is small."""
    if alpha == 4.0:
        # 2c int r exp(-c r^2 - y r^4) dr = c sqrt(pi)/(2 sqrt(y)) * erfcx(c/(2 sqrt(y)))
        return c * math.sqrt(math.pi) / (2.0 * math.sqrt(y)) * erfcx(c / (2.0 * math.sqrt(y)))
    # substitute u = c r^2: integral of exp(-u - y (u/c)^(alpha/2)) du
    half_alpha = alpha / 2.0
    value, _ = integrate(
        lambda u: math.exp(-u - y * (u / c) ** half_alpha), (0.0, math.inf), ctx.quad
    )
    return value


def distance_kernel(k: int, y: float, ctx: KernelContext, method: str = "auto") -> float:
    """Finite-noise distance kernel F_k(y), k = 1 (near user) or 2 (far user).

    F_1 = 2/(1+H) * (1 - alpha y D), F_2 = (2/H - 2/(1+H)) * (1 - alpha y D),
    with H evaluated at t = eta y.  ``method`` selects the weight evaluation:
    'closed' forces the alpha=4 erfc form, 'quadrature' forces the general
    route, 'auto' picks the closed form exactly when alpha == 4.
    """
    if k not in (1, 2):
        raise DomainError(f"user index must be 1 or 2, got {k}")
    if y <= 0.0:
        raise DomainError(f"y must be positive, got {y}")
    p = ctx.params
    if p.interference_limited:
        raise DomainError(
            "finite-noise kernel undefined at sigma^2 = 0; use distance_kernel_limit"
        )
    t = p.snr * y
    h = exclusion_exponent(t, ctx)
    c = math.pi * p.lambda_b * h
    if method == "auto":
        method = "closed" if p.alpha == 4.0 else "quadrature"
    if method == "closed":
        if p.alpha != 4.0:
            raise DomainError("closed-form kernel weight requires alpha = 4")
        w = _ball_weight(y, c, 4.0, ctx)
    elif method == "quadrature":
        half_alpha = p.alpha / 2.0
        w, _ = integrate(
            lambda u: math.exp(-u - y * (u / c) ** half_alpha), (0.0, math.inf), ctx.quad
        )
    else:
        raise DomainError(f"unknown method {method!r}")
    if k == 1:
        return 2.0 * w / (1.0 + h)
    return 2.0 * w / (h * (1.0 + h))


def distance_kernel_limit(k: int, t: float, ctx: KernelContext) -> float:
    """Interference-limited kernels: F_1 -> 2/(1+H(t)), F_2 -> 2/(H(1+H)).

    These depend only on (alpha, N) through H, which is what makes the
    zero-noise sum-rate invariant to BS density and transmit power.
    """
    if k not in (1, 2):
        raise DomainError(f"user index must be 1 or 2, got {k}")
    if t <= 0.0:
        raise DomainError(f"t must be positive, got {t}")
    h = exclusion_exponent(t, ctx)
    if k == 1:
        return 2.0 / (1.0 + h)
    return 2.0 / (h * (1.0 + h))


def interference_laplace(z: float, r: float, ctx: KernelContext) -> float:
    """Conditional Laplace transform E[exp(-z I/sigma^2) | serving distance r]
    = exp(pi lambda_b r^2 (1 - H(eta z r^-alpha))); requires sigma^2 > 0."""
    if z < 0.0 or r <= 0.0:
        raise DomainError("need z >= 0 and r > 0")
    p = ctx.params
    if p.interference_limited:
        raise DomainError(
            "normalized interference transform needs sigma^2 > 0; "
            "interference-limited paths work in the substituted variable directly"
        )
    if z == 0.0:
        return 1.0
    t = p.snr * z * r ** (-p.alpha)
    h = exclusion_exponent(t, ctx)
    return math.exp(math.pi * p.lambda_b * r * r * (1.0 - h))


def exponent_growth_rate(ctx: KernelContext) -> float:
    """Asymptotic coefficient kappa in H(t) ~ kappa * t^delta as t -> infinity.

    kappa = Gamma(1-delta) Gamma(N+delta) / Gamma(N); handy for choosing
    integration cutoffs and as a sanity probe of the closed form.
    """
    delta = ctx.params.delta
    shape = ctx.fading.interference_shape
    return math.exp(
        ln_gamma(1.0 - delta) + ln_gamma(shape + delta) - ln_gamma(shape)
    )
