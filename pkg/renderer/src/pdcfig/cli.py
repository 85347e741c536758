"""Command-line entry point: pdcfig MANIFEST --out DIR."""

from __future__ import annotations

import argparse
import sys

from .manifest import ManifestError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdcfig",
        description="Render pdcsim data files to publication-style figures",
    )
    parser.add_argument("manifest", help="render-manifest JSON path")
    parser.add_argument("--out", required=True, help="output image directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written, errors = render(args.manifest, args.out)
    except ManifestError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    for err in errors:
        print(f"entry {err.index} failed: {err.message}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
