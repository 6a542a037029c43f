"""Figure specifications loaded from JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("value-curves", "snapshot-grid", "table")
SCALES = ("linear", "log")


class SpecError(Exception):
    """The figure specification is malformed or references missing inputs."""


@dataclass
class FigureSpec:
    """What to draw and from which files.

    kind "value-curves" uses `exact_csvs` (per-family exact sweeps), an
    optional `mc_csv` (empirical means with confidence bounds), an optional
    `crossing_json`, and `state` (the [i, j] row to plot). kind
    "snapshot-grid" uses `pgm_dir`, `families`, and `epochs`. kind "table"
    uses `aggregate_csv`.
    """

    kind: str
    output: str
    scale: str = "linear"
    state: list = field(default_factory=list)
    exact_csvs: dict = field(default_factory=dict)  # family -> csv path
    mc_csv: str | None = None
    crossing_json: str | None = None
    pgm_dir: str | None = None
    families: list = field(default_factory=list)
    epochs: list = field(default_factory=list)
    aggregate_csv: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown figure kind {self.kind!r}")
        if self.scale not in SCALES:
            raise SpecError(f"unknown axis scale {self.scale!r}")
        if not self.output:
            raise SpecError("output path is required")
        required = {
            "value-curves": [p for p in self.exact_csvs.values()]
            + ([self.mc_csv] if self.mc_csv else [])
            + ([self.crossing_json] if self.crossing_json else []),
            "snapshot-grid": [self.pgm_dir] if self.pgm_dir else [],
            "table": [self.aggregate_csv] if self.aggregate_csv else [],
        }[self.kind]
        if self.kind == "value-curves" and not self.exact_csvs:
            raise SpecError("value-curves needs at least one exact series")
        if self.kind == "snapshot-grid" and not self.pgm_dir:
            raise SpecError("snapshot-grid needs a pgm_dir")
        if self.kind == "table" and not self.aggregate_csv:
            raise SpecError("table needs an aggregate_csv")
        for path in required:
            if not Path(path).exists():
                raise SpecError(f"input does not exist: {path}")

    @classmethod
    def from_json(cls, path) -> "FigureSpec":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read figure spec {path}: {exc}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise SpecError(f"bad figure spec fields: {exc}")
