"""Figure kit: spec validation, rendering, tables, and determinism.

All inputs are synthetic files written to tmp_path following the documented
experiment-output schemas; nothing here depends on the simulation package.
"""

import json

import pytest

from figkit import FigureSpec, SpecError, emit_tables, plot_snapshot_grid, plot_value_curves
from figkit.cli import main
from figkit.grids import read_pgm


def write_exact_csv(path, lams, values, state=(13, 13)):
    lines = ["state_i,state_j,lambda,value,provenance"]
    for lam, v in zip(lams, values):
        lines.append(f"{state[0]},{state[1]},{lam},{v},linear-solve")
        lines.append(f"2,0,{lam},{v / 2},linear-solve")  # extra state rows
    path.write_text("\n".join(lines) + "\n")


def write_mc_csv(path):
    lines = ["family,lambda,mean,variance,ci95_low,ci95_high,pgf"]
    for fam, base in (("x.a1", 0.1), ("x.a2", 0.12)):
        for lam in (0.5, 0.8, 0.9):
            m = base * lam
            lines.append(f"{fam},{lam},{m},0.01,{m - 0.02},{m + 0.02},{m * (1 - lam)}")
    path.write_text("\n".join(lines) + "\n")


def write_pgm(path, n=8, fill=0):
    rows = [" ".join(str(fill) for _ in range(n)) for _ in range(n)]
    path.write_text("\n".join(["P2", f"{n} {n}", "255"] + rows) + "\n")


@pytest.fixture
def curve_inputs(tmp_path):
    a1, a2 = tmp_path / "a1.csv", tmp_path / "a2.csv"
    lams = [0.5, 0.8, 0.9]
    write_exact_csv(a1, lams, [0.05, 0.3, 0.9])
    write_exact_csv(a2, lams, [0.04, 0.32, 0.85])
    mc = tmp_path / "mc.csv"
    write_mc_csv(mc)
    crossing = tmp_path / "crossing.json"
    crossing.write_text(json.dumps({"state": [13, 13], "lambda_crossing": 0.882353}))
    return a1, a2, mc, crossing


def test_spec_validation(tmp_path):
    with pytest.raises(SpecError):
        FigureSpec(kind="pie-chart", output=str(tmp_path / "o.png"))
    with pytest.raises(SpecError):
        FigureSpec(kind="value-curves", output=str(tmp_path / "o.png"))
    with pytest.raises(SpecError):
        FigureSpec(
            kind="value-curves",
            output=str(tmp_path / "o.png"),
            exact_csvs={"x.a1": str(tmp_path / "missing.csv")},
        )
    with pytest.raises(SpecError):
        FigureSpec.from_json(tmp_path / "nope.json")


def test_value_curves_deterministic(curve_inputs, tmp_path):
    a1, a2, mc, crossing = curve_inputs
    outs = []
    for name in ("one.png", "two.png"):
        spec = FigureSpec(
            kind="value-curves",
            output=str(tmp_path / name),
            state=[13, 13],
            exact_csvs={"x.a1": str(a1), "x.a2": str(a2)},
            mc_csv=str(mc),
            crossing_json=str(crossing),
        )
        outs.append(plot_value_curves(spec).read_bytes())
    assert outs[0] == outs[1]


def test_value_curves_log_scale_and_single_family(curve_inputs, tmp_path):
    a1, _, _, _ = curve_inputs
    spec = FigureSpec(
        kind="value-curves",
        output=str(tmp_path / "single.png"),
        scale="log",
        state=[13, 13],
        exact_csvs={"x.a1": str(a1)},
    )
    assert plot_value_curves(spec).exists()


def test_value_curves_schema_mismatch(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    spec = FigureSpec(
        kind="value-curves",
        output=str(tmp_path / "o.png"),
        state=[13, 13],
        exact_csvs={"x.a1": str(bad)},
    )
    with pytest.raises(SpecError):
        plot_value_curves(spec)


def test_pgm_parser(tmp_path):
    path = tmp_path / "s.pgm"
    write_pgm(path, n=5, fill=255)
    img = read_pgm(path)
    assert img.shape == (5, 5)
    assert img.max() == img.min() == 255


@pytest.mark.parametrize("shape", [(2, 3), (4, 3), (3, 3)])
def test_snapshot_grid_layouts(tmp_path, shape):
    n_fams, n_epochs = shape
    families = [f"fam{k}" for k in range(n_fams)]
    epochs = [50 * (k + 1) for k in range(n_epochs)]
    for fam in families:
        for epoch in epochs:
            write_pgm(tmp_path / f"snap_{fam}_{epoch}.pgm")
    spec = FigureSpec(
        kind="snapshot-grid",
        output=str(tmp_path / "grid.png"),
        pgm_dir=str(tmp_path),
        families=families,
        epochs=epochs,
    )
    out, missing = plot_snapshot_grid(spec)
    assert out.exists()
    assert missing == []


def test_snapshot_grid_missing_cell_placeholder(tmp_path):
    write_pgm(tmp_path / "snap_a_1.pgm")
    spec = FigureSpec(
        kind="snapshot-grid",
        output=str(tmp_path / "grid.png"),
        pgm_dir=str(tmp_path),
        families=["a"],
        epochs=[1, 2],
    )
    out, missing = plot_snapshot_grid(spec)
    assert out.exists()
    assert missing == [("a", 2)]


def test_emit_tables(tmp_path):
    agg = tmp_path / "aggregate.csv"
    agg.write_text(
        "family,sample_count,mean_tau,variance,ci95_low,ci95_high,resolved_fraction\n"
        "y.a1,2000,35.816,120.0,35.33,36.30,1.0\n"
        "y.a2,2000,77.587,900.0,76.27,78.90,1.0\n"
    )
    spec = FigureSpec(
        kind="table", output=str(tmp_path / "table.txt"), aggregate_csv=str(agg)
    )
    text = emit_tables(spec)
    lines = text.splitlines()
    assert lines[0].startswith("family")
    assert len(lines) == 4  # header, rule, two data rows
    assert "35.816" in lines[2] and "(76.270, 78.900)" in lines[3]


def test_emit_tables_empty_input(tmp_path):
    agg = tmp_path / "aggregate.csv"
    agg.write_text(
        "family,sample_count,mean_tau,variance,ci95_low,ci95_high,resolved_fraction\n"
    )
    spec = FigureSpec(
        kind="table", output=str(tmp_path / "table.txt"), aggregate_csv=str(agg)
    )
    lines = emit_tables(spec).splitlines()
    assert len(lines) == 2  # header and rule only


def test_cli_exit_codes(tmp_path, curve_inputs):
    a1, a2, mc, crossing = curve_inputs
    good = tmp_path / "spec.json"
    good.write_text(json.dumps({
        "kind": "value-curves",
        "output": str(tmp_path / "fig.png"),
        "state": [13, 13],
        "exact_csvs": {"x.a1": str(a1), "x.a2": str(a2)},
        "mc_csv": str(mc),
        "crossing_json": str(crossing),
    }))
    assert main([str(good)]) == 0

    write_pgm(tmp_path / "snap_a_1.pgm")
    partial = tmp_path / "grid_spec.json"
    partial.write_text(json.dumps({
        "kind": "snapshot-grid",
        "output": str(tmp_path / "grid.png"),
        "pgm_dir": str(tmp_path),
        "families": ["a"],
        "epochs": [1, 2],
    }))
    assert main([str(partial)]) == 1  # missing cell

    bad = tmp_path / "bad_spec.json"
    bad.write_text(json.dumps({"kind": "nonsense", "output": "x.png"}))
    assert main([str(bad)]) == 2
