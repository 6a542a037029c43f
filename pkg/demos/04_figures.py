"""End-to-end figure pipeline: experiment CLI outputs -> figure kit images.

Runs a small evaluate + simulate + render pass with the primary CLI, then
feeds the resulting CSV/PGM/JSON files to the figure kit (a separate
package) to produce the crossing plot, a snapshot grid, and the
hitting-time table.

Requires the optional figkit package:  pip install -e figkit/
Run:  python3 demos/04_figures.py
"""

import json
import sys
from pathlib import Path

from isingctrl.cli import main as isingctrl_main

OUT = Path(__file__).parent / "output"


def write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2))
    return str(path)


def main():
    try:
        from figkit.cli import main as figkit_main
    except ImportError:
        print("figkit is not installed; run `pip install -e figkit/` first")
        return 1
    OUT.mkdir(exist_ok=True)
    run_dir = OUT / "run"

    base = dict(
        regime="x",
        n=32,
        geometry={"stripe_widths": [3, 3], "distance": 13},
        families=["x.a1", "x.a2"],
        relaxation={"kind": "to_robust"},
        lambdas=[round(0.05 * k, 2) for k in range(1, 20)],
        replications=200,
        master_seed=11,
        output_dir=str(run_dir),
    )
    cfg = write_json(OUT / "config.json", base)
    render_cfg = write_json(
        OUT / "render.json",
        {**base, "snapshot_epochs": [0, 10, 20], "max_epochs": 200},
    )
    for command, path in (("evaluate", cfg), ("simulate", cfg), ("render", render_cfg)):
        print(f"isingctrl {command} ...")
        code = isingctrl_main([command, path])
        if code != 0:
            print(f"{command} failed with exit code {code}")
            return code

    curves = write_json(OUT / "fig_curves.json", {
        "kind": "value-curves",
        "output": str(OUT / "value_curves.png"),
        "scale": "log",
        "state": [13, 13],
        "exact_csvs": {
            "x.a1": str(run_dir / "exact_values_x_a1.csv"),
            "x.a2": str(run_dir / "exact_values_x_a2.csv"),
        },
        "mc_csv": str(run_dir / "mc_values.csv"),
        "crossing_json": str(run_dir / "crossing.json"),
    })
    grid = write_json(OUT / "fig_grid.json", {
        "kind": "snapshot-grid",
        "output": str(OUT / "snapshot_grid.png"),
        "pgm_dir": str(run_dir),
        "families": ["x.a1", "x.a2"],
        "epochs": [0, 10, 20],
    })
    table = write_json(OUT / "fig_table.json", {
        "kind": "table",
        "output": str(OUT / "hitting_table.txt"),
        "aggregate_csv": str(run_dir / "aggregate.csv"),
    })
    for spec in (curves, grid, table):
        code = figkit_main([spec])
        if code != 0:
            return code
    print(f"\nartifacts in {OUT}")
    print((OUT / "hitting_table.txt").read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
