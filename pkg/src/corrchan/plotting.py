"""Figure rendering for the reporting CLI (headless, file output only)."""

from __future__ import annotations

from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_STYLES = {
    "entangled": dict(color="tab:blue", linestyle="-", label="entangled inputs"),
    "separable": dict(color="tab:orange", linestyle="-", label="separable inputs"),
    "baseline": dict(color="tab:gray", linestyle="--", label="polarization unused"),
}


def plot_capacity_curve(etas: Sequence[float], series: Dict[str, Sequence[float]],
                        path: str) -> None:
    """Render total capacity versus the correlation parameter to a file."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for mode in ("entangled", "separable", "baseline"):
        if mode in series:
            ax.plot(etas, series[mode], **_STYLES[mode])
    ax.set_xlabel(r"correlation parameter $\eta$")
    ax.set_ylabel(r"total information $\chi$ (bits)")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
