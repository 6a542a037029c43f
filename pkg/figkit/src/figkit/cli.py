"""Command-line entry point: `figkit <figure-spec.json>`.

Exit codes: 0 success, 1 missing snapshot cells (grid still written with
placeholders), 2 spec or schema error.
"""

from __future__ import annotations

import argparse
import sys

from .curves import plot_value_curves
from .grids import plot_snapshot_grid
from .spec import FigureSpec, SpecError
from .tables import emit_tables


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figkit", description="Render figures from experiment outputs."
    )
    parser.add_argument("spec", help="JSON figure specification")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec.from_json(args.spec)
        if spec.kind == "value-curves":
            out = plot_value_curves(spec)
        elif spec.kind == "snapshot-grid":
            out, missing = plot_snapshot_grid(spec)
            if missing:
                print(f"missing cells: {missing}", file=sys.stderr)
                print(f"wrote {out} (with placeholders)")
                return 1
        else:
            emit_tables(spec)
            out = spec.output
    except SpecError as exc:
        print(f"figure spec error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
