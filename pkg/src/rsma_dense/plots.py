"""Optional figure rendering for the CLI's report paths.

Matplotlib is imported lazily with the Agg backend so headless runs (and
every code path that never asks for a figure) stay display-free.
"""

from __future__ import annotations

_AXIS_LABELS = {
    "beta": "power splitting ratio",
    "antennas": "transmit antennas per base station",
    "density": "base-station density (1/m^2)",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def plot_sweep(axis: str, grid, series: dict, png_path: str, unit: str = "nats") -> None:
    """One sum-rate curve per scheme against the swept axis."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for scheme, values in series.items():
        ax.plot(grid, values, marker="o", markersize=3, label=scheme.upper())
    ax.set_xlabel(_AXIS_LABELS.get(axis, axis))
    ax.set_ylabel(f"sum rate ({unit}/s/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def plot_ee(profile, m_star: int, png_path: str, unit: str = "nats", scale: float = 1.0) -> None:
    """Energy-efficiency curve over integer antenna counts, optimum marked."""
    plt = _pyplot()
    ms = [m for m, _ in profile]
    ees = [scale * ee for _, ee in profile]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ms, ees, marker="o", markersize=3)
    star = dict(profile).get(m_star)
    if star is not None:
        ax.plot([m_star], [scale * star], marker="*", markersize=12, color="tab:red")
        ax.annotate(f"M*={m_star}", (m_star, scale * star),
                    textcoords="offset points", xytext=(8, 4))
    ax.set_xlabel(_AXIS_LABELS["antennas"])
    ax.set_ylabel(f"energy efficiency ({unit}/joule)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
