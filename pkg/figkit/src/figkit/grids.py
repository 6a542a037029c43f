"""Snapshot grids from PGM files: rows are families, columns are epochs."""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .spec import FigureSpec, SpecError


def read_pgm(path) -> np.ndarray:
    """Parse a plain-text (P2) PGM file into a 2-D array."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    if not tokens or tokens[0] != "P2":
        raise SpecError(f"{path}: not a plain (P2) PGM file")
    width, height, _maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = np.array([int(t) for t in tokens[4 : 4 + width * height]])
    if data.size != width * height:
        raise SpecError(f"{path}: truncated pixel data")
    return data.reshape(height, width)


def plot_snapshot_grid(spec: FigureSpec) -> tuple[Path, list]:
    """Render the family-by-epoch snapshot grid at native resolution.

    Returns the output path and the list of missing (family, epoch) cells;
    missing cells are drawn as crossed-out placeholders.
    """
    if not spec.families or not spec.epochs:
        raise SpecError("snapshot-grid needs families and epochs")
    pgm_dir = Path(spec.pgm_dir)
    n_rows, n_cols = len(spec.families), len(spec.epochs)
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(2.2 * n_cols, 2.2 * n_rows), squeeze=False
    )
    missing = []
    for r, family in enumerate(spec.families):
        for c, epoch in enumerate(spec.epochs):
            ax = axes[r][c]
            ax.set_xticks([])
            ax.set_yticks([])
            path = pgm_dir / f"snap_{family}_{epoch}.pgm"
            if path.exists():
                ax.imshow(read_pgm(path), cmap="gray", vmin=0, vmax=255,
                          interpolation="nearest")
            else:
                missing.append((family, epoch))
                ax.plot([0, 1], [0, 1], color="red", linewidth=0.8)
                ax.plot([0, 1], [1, 0], color="red", linewidth=0.8)
                ax.text(0.5, 0.5, "missing", ha="center", va="center", fontsize=8)
                ax.set_xlim(0, 1)
                ax.set_ylim(0, 1)
            if c == 0:
                ax.set_ylabel(family, fontsize=8)
            if r == 0:
                ax.set_title(f"epoch {epoch}", fontsize=8)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150, metadata={"Date": None})
    plt.close(fig)
    return out, missing
