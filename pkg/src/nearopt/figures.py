"""Curve rendering for sweep results: one threshold-vs-epsilon figure per direction."""

from __future__ import annotations

import re
from pathlib import Path

from matplotlib.figure import Figure

from .conditions import STATUS_FOUND, SweepTable


def safe_filename(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("_") or "direction"


def render_curves(table: SweepTable, out_dir) -> list[Path]:
    """Write `<label>.svg` per direction into `out_dir`; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for direction in sorted(table.directions, key=lambda d: d.label):
        rows = [r for r in table.column(direction.label) if r.status == STATUS_FOUND]
        fig = Figure(figsize=(6.0, 4.0))
        ax = fig.subplots()
        if rows:
            ax.plot([r.epsilon for r in rows], [r.c_star for r in rows],
                    marker="o", color="tab:blue")
        ax.set_xlabel("suboptimality coefficient epsilon")
        ax.set_ylabel("required minimum weighted sum")
        ax.set_title(direction.label)
        ax.grid(True, alpha=0.4)
        fig.tight_layout()
        path = out_dir / f"{safe_filename(direction.label)}.svg"
        fig.savefig(path, format="svg")
        paths.append(path)
    return paths
