"""Command-line entry point.

Subcommands:
    run <config>       single-top | classical | coupled | correlation
    sweep <config>     sweep-eps | sweep-k | weak-chaos-scan
    fit <config>       pheno-fit
    validate <config>  parse and validate only, run nothing

Exit codes: 0 success, 2 config error, 3 numerical failure.  The default
output directory can be set with the KICKEDTOPS_OUTDIR environment variable;
the config's `output` value is resolved relative to it.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .experiments import ConfigError, load_config, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_FAMILIES = {
    "run": ("single-top", "classical", "coupled", "correlation"),
    "sweep": ("sweep-eps", "sweep-k", "weak-chaos-scan"),
    "fit": ("pheno-fit",),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kickedtops",
        description="Simulations of entanglement production in coupled kicked tops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kinds in (*_FAMILIES.items(), ("validate", ())):
        p = sub.add_parser(name, help=f"{name} an experiment config")
        p.add_argument("config", help="path to an INI experiment config")
        p.add_argument("--output", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides config)")
        p.add_argument("--workers", type=int, help="sweep worker count (overrides config)")
        p.set_defaults(kinds=kinds)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"output": args.output, "seed": args.seed, "workers": args.workers}
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command != "validate" and cfg.kind not in args.kinds:
        print(
            f"config error: kind: {cfg.kind!r} is not a {args.command} experiment "
            f"(expected one of {', '.join(args.kinds)})",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    base = os.environ.get("KICKEDTOPS_OUTDIR", "")
    if base and not Path(cfg.output).is_absolute():
        cfg = type(cfg)(**{**cfg.to_dict(), "output": str(Path(base) / cfg.output)})
    if args.command == "validate":
        print(f"ok: {cfg.kind} config valid")
        return EXIT_OK
    manifest = run_experiment(cfg)
    if manifest.status != "ok":
        print(f"numerical failure: {manifest.error}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"wrote {len(manifest.checksums)} file(s) to {cfg.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
