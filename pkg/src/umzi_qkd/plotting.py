"""Render sweep results as rate-vs-distance figures.

Uses a matplotlib Figure directly (no pyplot, no GUI backend) so rendering is
safe in headless batch runs.
"""

from __future__ import annotations

from matplotlib.figure import Figure

from .analysis import SweepResult
from .keyrate import Scenario

_STYLE = {
    Scenario.IDEAL_PM: {"color": "tab:blue", "linestyle": "-", "label": "ideal (lossless PM)"},
    Scenario.VIRTUAL_SOURCE: {"color": "tab:green", "linestyle": "-", "label": "virtual source"},
    Scenario.NAIVE_EVE_ATTENUATOR: {
        "color": "tab:red",
        "linestyle": "--",
        "label": "naive (loss to Eve)",
    },
    Scenario.ACTIVE_COMPENSATION: {
        "color": "tab:orange",
        "linestyle": ":",
        "label": "active compensation",
    },
}


def render_sweep_figure(result: SweepResult, path: str) -> None:
    """Write the secure-rate-vs-distance figure for every swept scenario."""
    fig = Figure(figsize=(6.4, 4.4))
    ax = fig.add_subplot(1, 1, 1)
    for scenario in result.scenarios:
        rows = [r for r in result.series(scenario) if r.rate_clamped > 0]
        if not rows:
            continue
        ax.semilogy(
            [r.distance_km for r in rows],
            [r.rate_clamped for r in rows],
            **_STYLE[scenario],
        )
        crossing = result.max_distance_km.get(scenario)
        if crossing is not None:
            ax.axvline(crossing, color=_STYLE[scenario]["color"], linewidth=0.6, alpha=0.35)
    ax.set_xlabel("transmission distance (km)")
    ax.set_ylabel("secure key rate (bits/pulse)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, bbox_inches="tight", dpi=150)
