"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 solver divergence,
4 gain calibration failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config, parse_config
from .errors import (
    CalibrationError,
    ConfigurationError,
    DivergedError,
    PdcsimError,
)
from .presets import PLAN_PRESETS, RUN_PRESETS, plan_preset, run_preset
from .rigorous import SolverSettings
from .runner import (
    render_handoff,
    run_sample_study,
    simulate,
    sweep_gain,
    sweep_pump_duration,
)
from .sampling import SamplePlan

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_CALIBRATION = 4
EXIT_IO = 5


def _load_run_config(args):
    if args.preset:
        data = run_preset(args.preset)
        return parse_config(data)
    if not args.config:
        raise ConfigurationError("either --config or --preset is required")
    return load_config(args.config)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"expected a comma-separated float list, got {text!r}")


def _cmd_simulate(args) -> int:
    cfg = _load_run_config(args)
    out = simulate(cfg, args.out, overwrite=args.overwrite)
    print(out)
    return EXIT_OK


def _cmd_sweep_gain(args) -> int:
    cfg = _load_run_config(args)
    out = sweep_gain(cfg, _parse_floats(args.n_values), args.out)
    print(out)
    return EXIT_OK


def _cmd_sweep_pump(args) -> int:
    cfg = _load_run_config(args)
    out = sweep_pump_duration(cfg, _parse_floats(args.taus),
                              _parse_floats(args.n_values), args.out)
    print(out)
    return EXIT_OK


def _cmd_sample(args) -> int:
    if args.preset:
        data = plan_preset(args.preset)
    elif args.plan:
        try:
            data = json.loads(Path(args.plan).read_text())
        except FileNotFoundError:
            raise ConfigurationError(f"plan file not found: {args.plan}")
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"plan file is not valid JSON: {exc}")
    else:
        raise ConfigurationError("either --plan or --preset is required")
    solver = SolverSettings(**data.pop("solver", {}))
    if "gain_ladder" in data:
        data["gain_ladder"] = tuple(data["gain_ladder"])
    try:
        plan = SamplePlan(**data, solver=solver)
    except TypeError as exc:
        raise ConfigurationError(f"invalid plan: {exc}")

    def progress(done, total, record):
        print(f"accepted {done}/{total} (draw {record.index})", flush=True)

    out = run_sample_study(plan, args.out,
                           progress=progress if args.verbose else None)
    print(out)
    return EXIT_OK


def _cmd_presets(args) -> int:
    print("run presets:")
    for name in sorted(RUN_PRESETS):
        print(f"  {name}")
    print("plan presets:")
    for name in sorted(PLAN_PRESETS):
        print(f"  {name}")
    return EXIT_OK


def _cmd_render_handoff(args) -> int:
    out = render_handoff(args.runs, args.out)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdcsim",
        description="Pulsed type-II parametric down-conversion simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("--config", help="path to a JSON run config")
        p.add_argument("--preset", help="name of a shipped preset")
        p.add_argument("--out", help="output directory (default: content hash "
                                     "under $PDCSIM_OUT_ROOT or ./runs)")

    p = sub.add_parser("simulate", help="run one configuration")
    add_run_args(p)
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep-gain", help="sweep the target photon number")
    add_run_args(p)
    p.add_argument("--n-values", required=True,
                   help="comma-separated ascending photon-number targets")
    p.set_defaults(func=_cmd_sweep_gain)

    p = sub.add_parser("sweep-pump", help="sweep pump duration x photon number")
    add_run_args(p)
    p.add_argument("--taus", required=True, help="comma-separated durations [fs]")
    p.add_argument("--n-values", required=True,
                   help="comma-separated photon-number targets")
    p.set_defaults(func=_cmd_sweep_pump)

    p = sub.add_parser("sample", help="random-waveguide ensemble study")
    p.add_argument("--plan", help="path to a JSON plan")
    p.add_argument("--preset", help="name of a shipped plan preset")
    p.add_argument("--out", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("presets", help="list shipped presets")
    p.set_defaults(func=_cmd_presets)

    p = sub.add_parser("render-handoff",
                       help="emit a render-manifest for the figure renderer")
    p.add_argument("runs", nargs="+", help="run directories")
    p.add_argument("--out", required=True, help="manifest output path")
    p.set_defaults(func=_cmd_render_handoff)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergedError as exc:
        print(f"solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except (OSError, PdcsimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
