"""Figure recipes: which CSVs feed which figure, and how to render it."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

FIGURE_IDS = tuple(f"fig{i}" for i in range(1, 10))

# required columns per input role
SCHEMAS = {
    "entropy": ("t", "S_lin", "S_vN"),
    "variance": ("t", "sigma2"),
    "correlation": ("t", "tau", "ReD", "ImD"),
    "husimi": ("theta", "phi", "Q"),
    "poincare": ("orbit_id", "t", "theta", "phi"),
    "sweep_eps": ("eps", "S_lin", "S_vN"),
    "fit_report": (
        "k",
        "theta",
        "phi",
        "Gamma_over_Gamma0",
        "Gamma_vN_over_Gamma0_tilde",
        "gamma_eff",
        "gamma_eff_valid",
        "lambda_sum",
        "omega",
        "sigma2_sq_over_sigma_sat_sq",
    ),
}


class RecipeError(ValueError):
    """Raised for invalid recipes or schema-violating inputs."""


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: id, input CSVs by role, output path, options."""

    figure: str
    inputs: dict
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise RecipeError(f"unknown figure id {self.figure!r}")
        if not self.inputs:
            raise RecipeError("recipe has no inputs")


def load_recipe(path: str | Path) -> FigureRecipe:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RecipeError(f"recipe {path}: invalid JSON ({exc})") from None
    try:
        return FigureRecipe(
            figure=raw["figure"],
            inputs=raw["inputs"],
            output=raw.get("output", f"{raw['figure']}.png"),
            options=raw.get("options", {}),
        )
    except KeyError as exc:
        raise RecipeError(f"recipe {path}: missing field {exc}") from None


def read_table(path: str | Path, schema: str) -> dict:
    """Read a CSV and validate it against the named schema.

    Returns a dict of column name -> list of floats. Raises RecipeError
    naming the offending column on schema mismatch, and on empty files.
    """
    required = SCHEMAS[schema]
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"{path}: file not found")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise RecipeError(f"{path}: missing column {col!r} for schema {schema!r}")
        rows = list(reader)
    if not rows:
        raise RecipeError(f"{path}: no data rows")
    table: dict = {col: [] for col in required}
    for lineno, row in enumerate(rows, start=2):
        for col in required:
            try:
                table[col].append(float(row[col]))
            except (TypeError, ValueError):
                raise RecipeError(
                    f"{path}: line {lineno}: column {col!r} is not numeric"
                ) from None
    return table
