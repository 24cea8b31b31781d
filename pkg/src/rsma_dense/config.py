"""Strict JSON run configuration.

Every section is optional and falls back to the bundled defaults, but any
key the schema does not know is an error -- silently ignored typos in
numerical experiments are worse than crashes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError
from .model import (
    EnergyModel,
    FadingProfile,
    KernelContext,
    NetworkParams,
    QuadratureSpec,
    SCHEMES,
    SeriesControl,
)
from .montecarlo import SimWindow

_SWEEP_AXES = ("beta", "antennas", "density")


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs, already validated."""

    network: NetworkParams = field(default_factory=NetworkParams)
    fading: FadingProfile | None = None
    energy: EnergyModel = field(default_factory=EnergyModel)
    series: SeriesControl = field(default_factory=SeriesControl)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    window: SimWindow = field(default_factory=SimWindow)
    mc_mode: str = "gain"
    trials: int = 1000
    seed: int | None = None
    threads: int = 1
    schemes: tuple[str, ...] = ("rsma",)
    sweep_axis: str | None = None
    sweep_grid: tuple[float, ...] = ()
    ee_m_max: int = 40

    def context(self) -> KernelContext:
        return KernelContext.for_network(
            self.network, fading=self.fading, series=self.series, quad=self.quadrature
        )


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return config_from_mapping(data)


def config_from_mapping(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    known = {
        "network", "fading", "energy", "series", "quadrature",
        "mc", "sweep", "schemes", "ee",
    }
    _reject_unknown(data, known, "top level")

    try:
        network = NetworkParams(**_section(data, "network", {
            "lambda_b": float, "alpha": float, "power": float, "noise": float,
            "antennas": int, "groups": int, "users_per_group": int, "beta": float,
        }))
        fading = _fading(data.get("fading"), network)
        energy = EnergyModel(**_section(data, "energy", {
            "pa_efficiency": float, "circuit_per_antenna": float,
            "precoding_coeff": float, "static": float,
        }))
        series = SeriesControl(**_section(data, "series", {
            "rel_tol": float, "max_terms": int,
        }))
        quad = QuadratureSpec(**_section(data, "quadrature", {
            "rel_tol": float, "abs_tol": float,
            "max_subdivisions": int, "transform": str,
        }))
        mc = _section(data, "mc", {
            "mode": str, "trials": int, "seed": int, "threads": int,
            "window_half_side": float, "window_mode": str,
            "max_truncated_fraction": float,
        })
        window = SimWindow(
            half_side=mc.pop("window_half_side", 500.0),
            mode=mc.pop("window_mode", "center"),
            max_truncated_fraction=mc.pop("max_truncated_fraction", 0.25),
        )
        ee = _section(data, "ee", {"m_max": int})
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc

    mode = mc.get("mode", "gain")
    if mode not in ("gain", "physical"):
        raise ConfigError(f"mc.mode must be 'gain' or 'physical', got {mode!r}")
    trials = mc.get("trials", 1000)
    if trials < 1:
        raise ConfigError("mc.trials must be positive")
    threads = mc.get("threads", 1)
    if threads < 1:
        raise ConfigError("mc.threads must be positive")

    schemes = data.get("schemes", ["rsma"])
    if not isinstance(schemes, list) or not schemes:
        raise ConfigError("schemes must be a non-empty list")
    for s in schemes:
        if s not in SCHEMES:
            raise ConfigError(f"unknown scheme {s!r}; expected one of {SCHEMES}")

    sweep_axis, sweep_grid = _sweep(data.get("sweep"))

    return RunConfig(
        network=network,
        fading=fading,
        energy=energy,
        series=series,
        quadrature=quad,
        window=window,
        mc_mode=mode,
        trials=trials,
        seed=mc.get("seed"),
        threads=threads,
        schemes=tuple(schemes),
        sweep_axis=sweep_axis,
        sweep_grid=sweep_grid,
        ee_m_max=ee.get("m_max", 40),
    )


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    extra = set(mapping) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)} in {where}")


def _section(data: dict, name: str, fields: dict) -> dict:
    raw = data.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be a JSON object")
    _reject_unknown(raw, set(fields), f"section {name!r}")
    out = {}
    for key, value in raw.items():
        want = fields[key]
        if want is float and isinstance(value, (int, float)) and not isinstance(value, bool):
            out[key] = float(value)
        elif want is int and isinstance(value, int) and not isinstance(value, bool):
            out[key] = value
        elif want is str and isinstance(value, str):
            out[key] = value
        else:
            raise ConfigError(
                f"{name}.{key} must be of type {want.__name__}, got {value!r}"
            )
    return out


def _fading(raw, network: NetworkParams) -> FadingProfile | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError("section 'fading' must be a JSON object")
    if "preset" in raw:
        _reject_unknown(raw, {"preset"}, "section 'fading'")
        try:
            return FadingProfile.for_network(network, raw["preset"])
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
    _reject_unknown(raw, {"signal_shape", "interference_shape"}, "section 'fading'")
    try:
        return FadingProfile(
            float(raw.get("signal_shape", network.zeta)),
            float(raw.get("interference_shape", network.groups)),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _sweep(raw) -> tuple[str | None, tuple[float, ...]]:
    if raw is None:
        return None, ()
    if not isinstance(raw, dict):
        raise ConfigError("section 'sweep' must be a JSON object")
    _reject_unknown(raw, {"axis", "grid"}, "section 'sweep'")
    axis = raw.get("axis")
    if axis not in _SWEEP_AXES:
        raise ConfigError(f"sweep.axis must be one of {_SWEEP_AXES}, got {axis!r}")
    grid = raw.get("grid")
    if not isinstance(grid, list) or len(grid) < 1:
        raise ConfigError("sweep.grid must be a non-empty list of numbers")
    values = []
    for v in grid:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"sweep.grid entries must be numbers, got {v!r}")
        values.append(float(v))
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("sweep.grid must be strictly increasing")
    if axis == "antennas" and any(v != int(v) for v in values):
        raise ConfigError("antenna sweep grid must contain integers")
    return axis, tuple(values)
