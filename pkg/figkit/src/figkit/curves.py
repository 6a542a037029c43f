"""Value-versus-discount comparison curves."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .spec import FigureSpec, SpecError

EXACT_COLUMNS = {"state_i", "state_j", "lambda", "value"}
MC_COLUMNS = {"family", "lambda", "mean", "ci95_low", "ci95_high"}


def _read_exact_series(path, state):
    i, j = state
    pairs = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not EXACT_COLUMNS <= set(reader.fieldnames):
            raise SpecError(f"{path}: expected columns {sorted(EXACT_COLUMNS)}")
        for row in reader:
            if int(row["state_i"]) == i and int(row["state_j"]) == j:
                pairs.append((float(row["lambda"]), float(row["value"])))
    if not pairs:
        raise SpecError(f"{path}: no rows for state {state}")
    pairs.sort()
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _read_mc_series(path):
    series = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not MC_COLUMNS <= set(reader.fieldnames):
            raise SpecError(f"{path}: expected columns {sorted(MC_COLUMNS)}")
        for row in reader:
            series.setdefault(row["family"], []).append(
                (
                    float(row["lambda"]),
                    float(row["mean"]),
                    float(row["ci95_low"]),
                    float(row["ci95_high"]),
                )
            )
    for rows in series.values():
        rows.sort()
    return series


def plot_value_curves(spec: FigureSpec) -> Path:
    """Overlay exact value curves and empirical points with 95% error bars.

    Marks the crossing discount factor when a crossing report is supplied
    and more than one family is plotted.
    """
    if len(spec.state) != 2:
        raise SpecError("value-curves needs a [i, j] state")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for family, path in sorted(spec.exact_csvs.items()):
        lams, values = _read_exact_series(path, spec.state)
        ax.plot(lams, values, label=f"{family} exact")
    if spec.mc_csv:
        for family, rows in sorted(_read_mc_series(spec.mc_csv).items()):
            lams = [r[0] for r in rows]
            means = [r[1] for r in rows]
            lower = [r[1] - r[2] for r in rows]
            upper = [r[3] - r[1] for r in rows]
            ax.errorbar(
                lams, means, yerr=[lower, upper], fmt="o", markersize=3,
                capsize=2, label=f"{family} empirical",
            )
    if spec.crossing_json and len(spec.exact_csvs) > 1:
        crossing = json.loads(Path(spec.crossing_json).read_text())
        lam_c = crossing.get("lambda_crossing")
        if lam_c is not None:
            ax.axvline(lam_c, linestyle="--", linewidth=0.8, color="gray")
            ax.annotate(
                f"crossing {lam_c:.4f}", (lam_c, ax.get_ylim()[0]),
                rotation=90, va="bottom", ha="right", fontsize=8,
            )
    if spec.scale == "log":
        ax.set_yscale("log")
    ax.set_xlabel("discount factor")
    ax.set_ylabel("value")
    ax.set_title(f"state {tuple(spec.state)}")
    ax.legend(fontsize=8)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150, metadata={"Date": None})
    plt.close(fig)
    return out
