"""``plot`` command: render one experiment figure from an evaluator CSV."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("--csv", required=True, help="experiment CSV path")
    parser.add_argument("--experiment", required=True, help="experiment name to filter on")
    parser.add_argument("--out", required=True, help="output image path (.svg or .png)")
    parser.add_argument("--x-axis", choices=["n", "log_n"], default="n")
    parser.add_argument("--series", choices=["auto", "structure", "p", "theta"], default="auto")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    spec = PlotSpec(
        csv_path=args.csv,
        experiment=args.experiment,
        out_path=args.out,
        x_axis=args.x_axis,
        series_key=args.series,
    )
    try:
        result = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    print(f"wrote {result.out_path} ({result.rows} rows)")
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
