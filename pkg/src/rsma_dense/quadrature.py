"""Adaptive Gauss-Kronrod integration and a golden-section maximizer.

One integrator backs every analytic-rate integral in the package.  Finite
intervals are handled directly; semi-infinite ones go through the rational
map y = a + t/(1-t), after which the (open) Kronrod rule never touches the
endpoints, so integrable endpoint behavior and decaying tails need no
special casing.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable

from .errors import DomainError, NoConvergence
from .model import QuadratureSpec

_DEFAULT_SPEC = QuadratureSpec()

# 15-point Kronrod extension of 7-point Gauss on [-1, 1]; positive half.
_XK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# Gauss-7 weights, aligned with the odd-indexed Kronrod nodes above.
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def _gauss_kronrod(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One G7/K15 panel: returns (Kronrod value, |Kronrod - Gauss|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fk = 0.0
    fg = 0.0
    for i, x in enumerate(_XK):
        if x == 0.0:
            v = f(mid)
            fk += _WK[i] * v
            fg += _WG[3] * v
            continue
        lo = f(mid - half * x)
        hi = f(mid + half * x)
        fk += _WK[i] * (lo + hi)
        if i % 2 == 1:
            fg += _WG[i // 2] * (lo + hi)
    return fk * half, abs(fk - fg) * half


def integrate(
    f: Callable[[float], float],
    domain: tuple[float, float],
    spec: QuadratureSpec = _DEFAULT_SPEC,
) -> tuple[float, float]:
    """Integrate ``f`` over ``domain`` = (a, b); b may be ``math.inf``.

    Returns ``(value, error_estimate)`` with the estimate no larger than
    ``max(rel_tol * |value|, abs_tol)`` on success.  When the subdivision
    budget runs out, raises :class:`NoConvergence` carrying the best value.
    """
    a, b = domain
    if not a < b:
        raise DomainError(f"empty integration domain ({a}, {b})")
    if math.isinf(b):
        if spec.transform != "rational":
            raise DomainError("semi-infinite domain requires the rational transform")
        g = _rational_wrap(f, a)
        return _adaptive(g, 0.0, 1.0, spec)
    return _adaptive(f, a, b, spec)


def _rational_wrap(f: Callable[[float], float], a: float) -> Callable[[float], float]:
    # y = a + t/(1-t) maps (0,1) -> (a, inf) with dy = dt/(1-t)^2.
    def g(t: float) -> float:
        onemt = 1.0 - t
        return f(a + t / onemt) / (onemt * onemt)

    return g


def _adaptive(
    f: Callable[[float], float], a: float, b: float, spec: QuadratureSpec
) -> tuple[float, float]:
    value, err = _gauss_kronrod(f, a, b)
    # Heap of (-error, insertion counter, left, right, value); the counter
    # makes the subdivision order deterministic when errors tie.
    heap = [(-err, 0, a, b, value)]
    counter = 1
    total = value
    total_err = err
    for _ in range(spec.max_subdivisions):
        if total_err <= max(spec.rel_tol * abs(total), spec.abs_tol):
            return total, total_err
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gauss_kronrod(f, lo, mid)
        v2, e2 = _gauss_kronrod(f, mid, hi)
        total += (v1 + v2) - val
        total_err += (e1 + e2) - (-neg_err)
        heapq.heappush(heap, (-e1, counter, lo, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2))
        counter += 2
    if total_err <= max(spec.rel_tol * abs(total), spec.abs_tol):
        return total, total_err
    raise NoConvergence(
        f"integral did not reach tolerance after {spec.max_subdivisions} subdivisions",
        value=total,
        error_estimate=total_err,
    )


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Locate the maximum of a unimodal ``f`` on [lo, hi] to within ``tol``.

    Unimodality is a documented assumption, not something this routine can
    check; on multimodal input it converges to *a* local maximum.
    """
    if lo >= hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2
