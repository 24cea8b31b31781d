"""Area spectral efficiency, the network energy model, and the antenna-count
optimizer.

Energy efficiency trades the sum rate against an affine per-BS power draw,
so the continuous first-order condition

    Omega(M) = R'(M) * E_bs(M) - R(M) * P_circuit = 0

has a single root M~ wherever R is increasing and concave in M; the integer
answer is whichever of floor(M~)/ceil(M~) evaluates better (the
always-round-up rule can miss the optimum by one, so both are computed and
the rounded-up variant is reported alongside for reference).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import BracketError, DomainError
from .model import EnergyModel, FadingProfile, KernelContext
from .rates import sum_rate


@dataclass(frozen=True)
class EeSolution:
    """Result of the antenna-count optimization."""

    m_star: int
    m_tilde: float
    ee_at_star: float
    bracket: tuple[float, float]
    iterations: int
    m_star_ceiling: int

    def __post_init__(self):
        if self.m_star < 1:
            raise DomainError("antenna optimum must be positive")


def per_bs_power(ctx: KernelContext, model: EnergyModel, antennas: float | None = None) -> float:
    """Total power drawn by one BS: PA input + circuits + precoding + static."""
    p = ctx.params
    m = p.antennas if antennas is None else antennas
    return (
        p.power / model.pa_efficiency
        + m * model.circuit_per_antenna
        + p.users_per_group**3 * model.precoding_coeff
        + model.static
    )


def energy_density(ctx: KernelContext, model: EnergyModel) -> float:
    """Average consumed power per unit area (W/m^2): density times per-BS draw."""
    return ctx.params.lambda_b * per_bs_power(ctx, model)


def ase(ctx: KernelContext, scheme: str = "rsma") -> float:
    """Area spectral efficiency: BS density times average sum rate."""
    return ctx.params.lambda_b * sum_rate(ctx, scheme).sum_rate


def energy_efficiency(ctx: KernelContext, model: EnergyModel, scheme: str = "rsma") -> float:
    """Rate per Joule: ASE over areal power, which reduces to sum rate over
    the per-BS draw and is therefore density-free when the noise is zero."""
    return sum_rate(ctx, scheme).sum_rate / per_bs_power(ctx, model)


def _rate_at(ctx: KernelContext, m: float, scheme: str) -> float:
    """Sum rate with the antenna count extended to real m via the signal-gain
    shape m - N + 1; integer m reproduces the standard evaluation."""
    p = ctx.params
    shape = m - p.groups + 1.0
    if shape < 1.0:
        raise DomainError(f"antenna count {m} leaves no zero-forcing headroom")
    fade = FadingProfile(shape, ctx.fading.interference_shape)
    frozen = KernelContext(
        params=replace(ctx.params, antennas=max(int(math.ceil(m)), p.groups)),
        fading=fade,
        series=ctx.series,
        quad=ctx.quad,
    )
    return sum_rate(frozen, scheme).sum_rate


def ee_profile(
    ctx: KernelContext, model: EnergyModel, scheme: str = "rsma", m_max: int = 40
) -> list[tuple[int, float]]:
    """(M, EE) over the integer antenna range [K, m_max] -- the brute-force
    curve behind the optimizer and the CSV sidecar."""
    kk = ctx.params.users_per_group
    out = []
    for m in range(kk, m_max + 1):
        ctx_m = KernelContext(
            params=replace(ctx.params, antennas=m),
            fading=FadingProfile(m - ctx.params.groups + 1.0, ctx.fading.interference_shape),
            series=ctx.series,
            quad=ctx.quad,
        )
        out.append((m, energy_efficiency(ctx_m, model, scheme)))
    return out


def ee_slope_indicator(
    ctx: KernelContext, model: EnergyModel, m: float, scheme: str = "rsma", h: float = 1e-3
) -> float:
    """Omega(M) = R'(M) E_bs(M) - R(M) P_circuit, the sign of d(EE)/dM.

    R'(M) uses a central finite difference on the continuous-M rate (one-sided
    at the left edge of the admissible antenna range).
    """
    if m - h >= ctx.params.groups:
        r_plus = _rate_at(ctx, m + h, scheme)
        r_minus = _rate_at(ctx, m - h, scheme)
        r_mid = 0.5 * (r_plus + r_minus)
        slope = (r_plus - r_minus) / (2.0 * h)
    else:
        r_mid = _rate_at(ctx, m, scheme)
        slope = (_rate_at(ctx, m + h, scheme) - r_mid) / h
    return slope * per_bs_power(ctx, model, antennas=m) - r_mid * model.circuit_per_antenna


def optimize_antennas(
    ctx: KernelContext,
    model: EnergyModel,
    scheme: str = "rsma",
    m_max: int = 40,
    interval_tol: float = 1e-3,
) -> EeSolution:
    """Bisection on the EE slope indicator over [K-1, m_max], then the
    better of the two neighbouring integers (ties to the smaller).

    Raises :class:`BracketError` when the indicator does not change sign by
    ``m_max``; returns the boundary solution M* = K when even the left edge
    already has a nonpositive slope.
    """
    p = ctx.params
    kk = p.users_per_group
    if m_max < kk:
        raise DomainError(f"m_max must be at least {kk}")
    lo = max(float(kk - 1), float(p.groups))
    hi = float(m_max)
    if hi <= lo:
        raise DomainError(f"m_max={m_max} leaves no bisection interval above {lo}")

    def omega(m: float) -> float:
        return ee_slope_indicator(ctx, model, m, scheme)

    def ee_at(m_int: int) -> float:
        ctx_m = KernelContext(
            params=replace(p, antennas=m_int),
            fading=FadingProfile(m_int - p.groups + 1.0, ctx.fading.interference_shape),
            series=ctx.series,
            quad=ctx.quad,
        )
        return energy_efficiency(ctx_m, model, scheme)

    if omega(lo) <= 0.0:
        return EeSolution(
            m_star=kk,
            m_tilde=lo,
            ee_at_star=ee_at(kk),
            bracket=(lo, hi),
            iterations=0,
            m_star_ceiling=kk,
        )
    if omega(hi) >= 0.0:
        raise BracketError(
            f"EE slope has no sign change on [{lo}, {hi}]; raise m_max"
        )

    a, b = lo, hi
    iterations = 0
    while b - a > interval_tol:
        mid = 0.5 * (a + b)
        if omega(mid) > 0.0:
            a = mid
        else:
            b = mid
        iterations += 1
    m_tilde = 0.5 * (a + b)

    floor_c = max(kk, int(math.floor(m_tilde)))
    ceil_c = max(kk, int(math.ceil(m_tilde)))
    best = floor_c
    best_ee = ee_at(floor_c)
    if ceil_c != floor_c:
        ee_ceil = ee_at(ceil_c)
        if ee_ceil > best_ee:
            best, best_ee = ceil_c, ee_ceil
    return EeSolution(
        m_star=best,
        m_tilde=m_tilde,
        ee_at_star=best_ee,
        bracket=(lo, hi),
        iterations=iterations,
        m_star_ceiling=max(kk, int(math.ceil(m_tilde))),
    )
