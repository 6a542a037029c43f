"""Offline figure generation from experiment outputs.

Turns the experiment CLI's CSV tables, PGM snapshots, and crossing report
into publication-style artifacts: value-vs-discount comparison curves,
snapshot grids, and hitting-time tables. All numerical content is read from
the input files; nothing is re-estimated here.
"""

from .spec import FigureSpec, SpecError
from .curves import plot_value_curves
from .grids import plot_snapshot_grid
from .tables import emit_tables

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SpecError",
    "plot_value_curves",
    "plot_snapshot_grid",
    "emit_tables",
]
