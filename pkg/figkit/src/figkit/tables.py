"""Hitting-time tables from aggregate CSV outputs."""

from __future__ import annotations

import csv
from pathlib import Path

from .spec import FigureSpec, SpecError

AGG_COLUMNS = {"family", "mean_tau", "ci95_low", "ci95_high"}
HEADER = ("family", "mean tau", "95% CI")


def emit_tables(spec: FigureSpec) -> str:
    """Format the aggregate hitting-time statistics as a fixed-width table.

    Writes the table to spec.output and returns it; an aggregate file with
    no data rows produces the header only.
    """
    rows = []
    with open(spec.aggregate_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is not None and not AGG_COLUMNS <= set(reader.fieldnames):
            raise SpecError(
                f"{spec.aggregate_csv}: expected columns {sorted(AGG_COLUMNS)}"
            )
        for row in reader:
            mean = float(row["mean_tau"])
            lo, hi = float(row["ci95_low"]), float(row["ci95_high"])
            rows.append((row["family"], f"{mean:.3f}", f"({lo:.3f}, {hi:.3f})"))
    widths = [
        max(len(HEADER[k]), *(len(r[k]) for r in rows)) if rows else len(HEADER[k])
        for k in range(3)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(HEADER, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)) for r in rows]
    text = "\n".join(lines) + "\n"
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    return text
