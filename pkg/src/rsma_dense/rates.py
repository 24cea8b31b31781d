"""Average per-stream rates for the three downlink schemes, their gaps and
derivatives, and the serving-distance distributions they average over.

All rates are ensemble averages in nats/s/Hz.  In the interference-limited
case (zero noise) the integrals run over the substituted variable t and use
the density- and power-free limit kernels, so invariance to ``lambda_b`` and
``power`` is structural rather than numerical.  With finite noise the
integrals run over y with t = snr * y feeding the interference factor.

Scheme conventions (two users per group, near user 1 / far user 2):

* rate splitting: power ``1-beta`` on the jointly decoded common stream,
  ``beta/K`` per private stream; the common stream must be decodable by
  both users, hence the min rule.
* sdma: the ``beta = 1`` endpoint -- private streams only, power ``P/K`` each.
* noma: the far user's message rides the common stream at power ``1-beta``
  and the whole private budget ``beta`` goes to the near user, whose private
  decoding still sees the common stream as interference (single-stage
  receivers; this is what the scheme-comparison algebra encodes).
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable

import numpy as np

from .errors import DomainError
from .kernels import distance_kernel, distance_kernel_limit, exclusion_exponent
from .model import KernelContext, NetworkParams, RateBreakdown, SCHEMES
from .quadrature import golden_section_max, integrate
from .specfun import gamma_mgf

# ---------------------------------------------------------------------------
# Serving-distance distributions (near user = min, far user = max of two
# independent nearest-BS distances, each Rayleigh with scale 1/sqrt(2 pi lb)).
# ---------------------------------------------------------------------------


def serving_distance_pdf(k: int, r: float, lambda_b: float) -> float:
    """Density of the near (k=1) or far (k=2) serving distance at radius r."""
    _check_user(k)
    if r < 0.0 or lambda_b <= 0.0:
        raise DomainError("need r >= 0 and lambda_b > 0")
    base = math.pi * lambda_b * r * r
    if k == 1:
        return 4.0 * math.pi * lambda_b * r * math.exp(-2.0 * base)
    return 4.0 * math.pi * lambda_b * r * (math.exp(-base) - math.exp(-2.0 * base))


def serving_distance_cdf(k: int, r: float, lambda_b: float) -> float:
    _check_user(k)
    if r < 0.0 or lambda_b <= 0.0:
        raise DomainError("need r >= 0 and lambda_b > 0")
    g = -math.expm1(-math.pi * lambda_b * r * r)  # single-draw CDF
    if k == 1:
        return 1.0 - (1.0 - g) ** 2
    return g * g


def serving_distance_quantile(k: int, u: float, lambda_b: float) -> float:
    """Inverse CDF; u in [0, 1)."""
    _check_user(k)
    if not 0.0 <= u < 1.0:
        raise DomainError(f"quantile level must lie in [0, 1), got {u}")
    if k == 1:
        return math.sqrt(-math.log1p(-u) / (2.0 * math.pi * lambda_b))
    return math.sqrt(-math.log1p(-math.sqrt(u)) / (math.pi * lambda_b))


def sample_distance_pair(
    lambda_b: float, size: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Joint draw of (d1, d2) as order statistics of two independent
    nearest-BS distances; returns arrays with d1 <= d2 elementwise."""
    e = rng.exponential(size=(size, 2))
    r = np.sqrt(e / (math.pi * lambda_b))
    return r.min(axis=1), r.max(axis=1)


def _check_user(k: int) -> None:
    if k not in (1, 2):
        raise DomainError(f"user index must be 1 or 2, got {k}")


# ---------------------------------------------------------------------------
# Rate integrals
# ---------------------------------------------------------------------------


def _signal_mgf(a: float, ctx: KernelContext) -> float:
    return gamma_mgf(a, ctx.fading.signal_shape)


def _rate_integral(ctx: KernelContext, pair: Callable[[float], float], k: int) -> float:
    """Integrate pair(t) * F_k / x over (0, inf), where pair() receives the
    MGF argument scale t (equal to snr*y when noise is present)."""
    p = ctx.params
    if p.interference_limited:
        def integrand(t: float) -> float:
            return pair(t) * distance_kernel_limit(k, t, ctx) / t
    else:
        # substitute t = snr * y so the integrand keeps O(1) support at any
        # SNR; integrating in y directly turns the high-SNR case into a
        # needle the adaptive subdivision cannot find
        eta = p.snr
        def integrand(t: float) -> float:
            return pair(t) * distance_kernel(k, t / eta, ctx) / t
    value, _ = integrate(integrand, (0.0, math.inf), ctx.quad)
    return value


def _common_pair(ctx: KernelContext) -> Callable[[float], float]:
    beta = ctx.params.beta
    def pair(t: float) -> float:
        return -math.expm1(
            ctx.fading.signal_shape * -math.log1p(t * (1.0 - beta))
        ) * _signal_mgf(t * beta, ctx)
    return pair


def _private_pair(ctx: KernelContext) -> Callable[[float], float]:
    scaled = ctx.params.beta / ctx.params.users_per_group
    def pair(t: float) -> float:
        m = _signal_mgf(t * scaled, ctx)
        return (1.0 - m) * m
    return pair


def common_rate(ctx: KernelContext) -> tuple[float, float, float]:
    """(R_c, R_c1, R_c2): the common-stream rate is the minimum of the two
    users' averages, which lands on the far user since F_1 >= F_2."""
    if ctx.params.beta == 1.0:
        return 0.0, 0.0, 0.0
    pair = _common_pair(ctx)
    r1 = _rate_integral(ctx, pair, 1)
    r2 = _rate_integral(ctx, pair, 2)
    return min(r1, r2), r1, r2


def private_rates(ctx: KernelContext) -> tuple[float, float]:
    """(R_p1, R_p2) for the split power beta/K per private stream."""
    pair = _private_pair(ctx)
    return _rate_integral(ctx, pair, 1), _rate_integral(ctx, pair, 2)


def _noma_near_pair(ctx: KernelContext) -> Callable[[float], float]:
    beta = ctx.params.beta
    def pair(t: float) -> float:
        m_own = _signal_mgf(t * beta, ctx)
        return (1.0 - m_own) * _signal_mgf(t * (1.0 - beta), ctx)
    return pair


def sum_rate(ctx: KernelContext, scheme: str = "rsma") -> RateBreakdown:
    """Rate breakdown for one scheme at the context's beta."""
    scheme = scheme.lower()
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme == "rsma":
        rc, _, _ = common_rate(ctx)
        return RateBreakdown.build("rsma", rc, private_rates(ctx))
    if scheme == "sdma":
        flat = with_beta(ctx, 1.0)
        return RateBreakdown.build("sdma", 0.0, private_rates(flat))
    # noma
    if ctx.params.beta == 1.0:
        raise DomainError("the noma split requires beta < 1")
    rc, _, _ = common_rate(ctx)
    near = _rate_integral(ctx, _noma_near_pair(ctx), 1)
    return RateBreakdown.build("noma", rc, (near, 0.0))


def multicast_rate(ctx: KernelContext) -> float:
    """Read-only beta -> 0 endpoint: everything on the common stream, private
    rates vanish, and the sum rate tends to this value."""
    def pair(t: float) -> float:
        return -math.expm1(ctx.fading.signal_shape * -math.log1p(t))
    return _rate_integral(ctx, pair, 2)


def with_beta(ctx: KernelContext, beta: float) -> KernelContext:
    """Same context, different power split (fading shapes preserved)."""
    return KernelContext(
        params=replace(ctx.params, beta=beta),
        fading=ctx.fading,
        series=ctx.series,
        quad=ctx.quad,
    )


# ---------------------------------------------------------------------------
# Scheme gaps
# ---------------------------------------------------------------------------


def rate_gap(ctx: KernelContext, baseline: str) -> float:
    """Sum-rate advantage of rate splitting over ``baseline`` at the same
    beta, computed as a single combined integral (interference-limited only).

    Equals ``sum_rate(ctx, 'rsma').sum_rate - sum_rate(ctx, baseline).sum_rate``
    because the common-stage terms coincide and cancel inside the integrand.
    """
    baseline = baseline.lower()
    if baseline not in ("sdma", "noma"):
        raise DomainError(f"baseline must be 'sdma' or 'noma', got {baseline!r}")
    p = ctx.params
    if not p.interference_limited:
        raise DomainError("gap integrals are defined for the zero-noise regime")
    if baseline == "noma" and p.beta == 1.0:
        raise DomainError("the noma split requires beta < 1")
    if baseline == "sdma" and p.beta == 1.0:
        return 0.0

    common = _common_pair(ctx)
    split = _private_pair(ctx)
    flat_pair = _private_pair(with_beta(ctx, 1.0))
    noma_near = _noma_near_pair(ctx)

    def integrand(t: float) -> float:
        h = exclusion_exponent(t, ctx)
        f1 = 2.0 / (1.0 + h)
        f2 = 2.0 / (h * (1.0 + h))
        if baseline == "sdma":
            acc = common(t) * f2 + (split(t) - flat_pair(t)) * (f1 + f2)
        else:
            acc = split(t) * (f1 + f2) - noma_near(t) * f1
        return acc / t

    value, _ = integrate(integrand, (0.0, math.inf), ctx.quad)
    return value


# ---------------------------------------------------------------------------
# Derivatives in beta (diagnostics backing the monotonicity claims)
# ---------------------------------------------------------------------------


def beta_derivative_terms(ctx: KernelContext, t: float) -> tuple[float, float]:
    """Pointwise d/d(beta) of the common and private SINR factors at MGF
    argument t.

    The common term is negative for every (beta, t); the private term is
    positive exactly where (1 + t*beta/K)^zeta < 2, which covers the small-t
    region that dominates the rate integrals.
    """
    p = ctx.params
    if not 0.0 < p.beta < 1.0:
        raise DomainError("derivative terms need beta strictly inside (0, 1)")
    if t <= 0.0:
        raise DomainError(f"t must be positive, got {t}")
    z = ctx.fading.signal_shape
    beta, kk = p.beta, p.users_per_group

    a_res = 1.0 + t * beta            # residual-interference factor, common stage
    a_sig = 1.0 + t * (1.0 - beta)    # signal factor, common stage
    f_c = -z * t * (
        a_sig ** (-z - 1.0) * a_res ** (-z)
        + a_res ** (-z - 1.0) * (1.0 - a_sig ** (-z))
    )

    a_p = 1.0 + t * beta / kk
    f_p = z * (t / kk) * a_p ** (-2.0 * z - 1.0) * (2.0 - a_p**z)
    return f_c, f_p


def common_rate_beta_derivative(ctx: KernelContext) -> float:
    """d R_c / d beta via the exact derivative of the integrand (min branch)."""
    p = ctx.params

    if p.interference_limited:
        def integrand(t: float) -> float:
            return beta_derivative_terms(ctx, t)[0] * distance_kernel_limit(2, t, ctx) / t
    else:
        eta = p.snr
        def integrand(t: float) -> float:
            return beta_derivative_terms(ctx, t)[0] * distance_kernel(2, t / eta, ctx) / t

    value, _ = integrate(integrand, (0.0, math.inf), ctx.quad)
    return value


def private_sum_beta_derivative(ctx: KernelContext) -> float:
    """d (R_p1 + R_p2) / d beta via the exact integrand derivative."""
    p = ctx.params

    if p.interference_limited:
        def integrand(t: float) -> float:
            fp = beta_derivative_terms(ctx, t)[1]
            return fp * (
                distance_kernel_limit(1, t, ctx) + distance_kernel_limit(2, t, ctx)
            ) / t
    else:
        eta = p.snr
        def integrand(t: float) -> float:
            fp = beta_derivative_terms(ctx, t)[1]
            return fp * (
                distance_kernel(1, t / eta, ctx) + distance_kernel(2, t / eta, ctx)
            ) / t

    value, _ = integrate(integrand, (0.0, math.inf), ctx.quad)
    return value


# ---------------------------------------------------------------------------
# Power-split optimization
# ---------------------------------------------------------------------------


def optimal_beta(
    ctx: KernelContext, scheme: str = "rsma", tol: float = 1e-4
) -> tuple[float, float]:
    """Golden-section maximization of the scheme sum rate over beta in
    [0.01, 0.99]; returns (beta_star, rate at beta_star).

    The sum rate is unimodal in beta for the configurations this package
    targets (decreasing common rate plus increasing private sum); for sdma
    the objective is constant in beta and any point is optimal.
    """
    def objective(beta: float) -> float:
        return sum_rate(with_beta(ctx, beta), scheme).sum_rate

    return golden_section_max(objective, 0.01, 0.99, tol)
