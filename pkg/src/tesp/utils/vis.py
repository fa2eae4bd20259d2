"""Utility functions for visualization."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib import pyplot as plt  # noqa: E402


def plot_rrn(histories: Mapping[str, Sequence[float]], output_path: Path) -> None:
    """Plot RRN against iteration on a log scale, one line per method."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for method, rrns in sorted(histories.items()):
        ax.semilogy(range(len(rrns)), [max(value, 1e-300) for value in rrns], label=method)
    ax.set_xlabel("iteration")
    ax.set_ylabel("RRN")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(output_path)
    plt.close(fig)
