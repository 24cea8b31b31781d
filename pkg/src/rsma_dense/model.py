"""Parameter and result records shared by the analytic and simulation engines.

Everything here is an immutable value type: construct once, pass anywhere,
share across threads.  Validation happens at construction time so downstream
numeric code never has to re-check its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

#: Scheme tags accepted throughout the package.
SCHEMES = ("rsma", "noma", "sdma")

#: Default BS density used by the bundled examples: one BS per disk of
#: radius 150 m, i.e. an average spacing typical of a dense urban deployment.
DEFAULT_BS_DENSITY = 1.0 / (math.pi * 150.0**2)


@dataclass(frozen=True)
class NetworkParams:
    """Scalar parameters of one downlink network configuration.

    Rates produced from these parameters are in nats/s/Hz; densities are in
    points per square metre and powers in Watts.
    """

    lambda_b: float = DEFAULT_BS_DENSITY
    alpha: float = 4.0
    power: float = 5.0
    noise: float = 0.0
    antennas: int = 4
    groups: int = 1
    users_per_group: int = 2
    beta: float = 0.5

    def __post_init__(self):
        _check_network(self)

    @property
    def snr(self) -> float:
        """Transmit SNR P/sigma^2; infinite in the interference-limited case."""
        return math.inf if self.noise == 0.0 else self.power / self.noise

    @property
    def delta(self) -> float:
        """2/alpha, the exponent ratio that appears in every pathloss integral."""
        return 2.0 / self.alpha

    @property
    def zeta(self) -> float:
        """Gamma shape of the intended-signal channel gain, antennas - groups + 1."""
        return self.antennas - self.groups + 1

    @property
    def interference_limited(self) -> bool:
        return self.noise == 0.0


def _check_network(p: NetworkParams) -> None:
    if not p.alpha > 2.0:
        raise DomainError(f"pathloss exponent must exceed 2, got {p.alpha}")
    if p.lambda_b <= 0.0:
        raise DomainError(f"BS density must be positive, got {p.lambda_b}")
    if p.power <= 0.0:
        raise DomainError(f"transmit power must be positive, got {p.power}")
    if p.noise < 0.0:
        raise DomainError(f"noise power must be nonnegative, got {p.noise}")
    if int(p.antennas) != p.antennas or p.antennas < 1:
        raise DomainError(f"antenna count must be a positive integer, got {p.antennas}")
    if int(p.groups) != p.groups or p.groups < 1:
        raise DomainError(f"group count must be a positive integer, got {p.groups}")
    if p.antennas < p.groups:
        raise DomainError(
            f"antennas ({p.antennas}) must be >= groups ({p.groups}) "
            "so the signal-gain Gamma shape stays positive"
        )
    if p.users_per_group != 2:
        raise DomainError(
            f"only two users per group are supported, got {p.users_per_group}"
        )
    if not 0.0 < p.beta <= 1.0:
        raise DomainError(f"power splitting ratio must lie in (0, 1], got {p.beta}")


def validate(params: NetworkParams) -> NetworkParams:
    """Re-run construction-time checks on an existing record and return it."""
    _check_network(params)
    return params


@dataclass(frozen=True)
class FadingProfile:
    """Gamma shapes (unit scale) of the equivalent signal and interferer gains.

    The default follows the analytic model: signal gain ~ Gamma(M - N + 1, 1)
    and per-interferer gain ~ Gamma(N, 1).  The ``physical-zf`` preset swaps
    in the classical zero-forcing shape Gamma(M - K + 1, 1) for the signal,
    which is what an explicit ZF simulation actually produces; the two differ
    whenever N != K, and both are kept available on purpose.
    """

    signal_shape: float
    interference_shape: float

    def __post_init__(self):
        if self.signal_shape < 1.0 or self.interference_shape < 1.0:
            raise DomainError(
                "fading shapes must be >= 1, got "
                f"({self.signal_shape}, {self.interference_shape})"
            )

    @classmethod
    def for_network(cls, params: NetworkParams, preset: str = "default") -> "FadingProfile":
        if preset in ("default", "analytic"):
            return cls(params.zeta, float(params.groups))
        if preset == "physical-zf":
            return cls(
                params.antennas - params.users_per_group + 1, float(params.groups)
            )
        raise DomainError(f"unknown fading preset {preset!r}")


@dataclass(frozen=True)
class EnergyModel:
    """Constants of the affine per-BS power consumption model.

    Total per-BS draw is ``power/pa_efficiency + antennas * circuit_per_antenna
    + users_per_group**3 * precoding_coeff + static`` Watts.
    """

    pa_efficiency: float = 0.08
    circuit_per_antenna: float = 6.8
    precoding_coeff: float = 1.74
    static: float = 1.5

    def __post_init__(self):
        if not 0.0 < self.pa_efficiency <= 1.0:
            raise DomainError(
                f"PA efficiency must lie in (0, 1], got {self.pa_efficiency}"
            )
        for name in ("circuit_per_antenna", "precoding_coeff", "static"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the infinite series used by the special functions."""

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-6:
            raise DomainError(f"series rel_tol must lie in (0, 1e-6], got {self.rel_tol}")
        if self.max_terms < 100:
            raise DomainError(f"max_terms must be >= 100, got {self.max_terms}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and transform choice for the adaptive integrator."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    transform: str = "rational"

    def __post_init__(self):
        if self.rel_tol < 1e-13:
            raise DomainError(f"rel_tol must be >= 1e-13, got {self.rel_tol}")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.transform not in ("none", "rational"):
            raise DomainError(f"unknown transform {self.transform!r}")


@dataclass(frozen=True)
class KernelContext:
    """Bundle of everything the rate integrals need: parameters, fading
    shapes, and numeric policies.  Build one with :meth:`for_network` unless
    you need non-default shapes."""

    params: NetworkParams
    fading: FadingProfile
    series: SeriesControl = field(default_factory=SeriesControl)
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    @classmethod
    def for_network(
        cls,
        params: NetworkParams,
        fading: FadingProfile | None = None,
        series: SeriesControl | None = None,
        quad: QuadratureSpec | None = None,
    ) -> "KernelContext":
        return cls(
            params=params,
            fading=fading or FadingProfile.for_network(params),
            series=series or SeriesControl(),
            quad=quad or QuadratureSpec(),
        )


@dataclass(frozen=True)
class RateBreakdown:
    """Common, per-user private, and total rate for one scheme (nats/s/Hz)."""

    scheme: str
    common_rate: float
    private_rates: tuple[float, float]
    sum_rate: float

    @classmethod
    def build(
        cls, scheme: str, common_rate: float, private_rates: tuple[float, float]
    ) -> "RateBreakdown":
        if scheme not in SCHEMES:
            raise DomainError(f"unknown scheme {scheme!r}")
        parts = (common_rate, *private_rates)
        if min(parts) < -1e-9:
            raise DomainError(f"negative rate component in {parts}")
        common_rate = max(0.0, common_rate)
        private_rates = tuple(max(0.0, r) for r in private_rates)
        return cls(scheme, common_rate, private_rates, common_rate + sum(private_rates))


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo mean with its standard error and provenance."""

    mean: float
    std_error: float
    trials: int
    seed: int

    def __post_init__(self):
        if self.std_error < 0.0:
            raise DomainError("standard error cannot be negative")
        if self.trials < 1:
            raise DomainError("at least one trial is required")

    def z_score(self, reference: float) -> float:
        """Signed deviation of the estimate from ``reference`` in std errors."""
        if self.std_error == 0.0:
            return 0.0 if self.mean == reference else math.inf
        return (self.mean - reference) / self.std_error
