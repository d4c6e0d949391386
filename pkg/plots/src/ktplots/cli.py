"""Command-line driver: `plots render <recipe.json>` or `plots all <dir>`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import render
from .recipes import RecipeError, load_recipe


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from simulation CSV outputs."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    one = sub.add_parser("render", help="render a single recipe")
    one.add_argument("recipe", help="path to a recipe JSON file")
    many = sub.add_parser("all", help="render every *.json recipe in a directory")
    many.add_argument("directory", help="directory of recipe JSON files")
    return parser


def _render_file(path: Path) -> None:
    recipe = load_recipe(path)
    render(recipe, base=path.parent)
    print(f"rendered {recipe.figure} -> {path.parent / recipe.output}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            _render_file(Path(args.recipe))
        else:
            paths = sorted(Path(args.directory).glob("*.json"))
            if not paths:
                print(f"no recipes found in {args.directory}", file=sys.stderr)
                return 1
            for path in paths:
                _render_file(path)
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
