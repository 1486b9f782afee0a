"""Command-line front end.

Subcommands: single-run, regime-scan, hysteresis, ensemble-run,
nonreciprocity.  Exit codes: 0 success, 1 config error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import replace

from . import runner, scenario as sc
from .errors import ConfigError, RydsyncError
from .thermal import Geometry

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydsync",
        description="Non-reciprocal synchronization in thermal Rydberg "
                    "vapors: simulation and analysis runner.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="scenario INI file")
        p.add_argument("--preset", choices=sorted(sc.PRESETS),
                       help="built-in scenario (config keys override it)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes for scan points")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--geometry", choices=["co", "counter"],
                       help="beam geometry override")
        return p

    add("single-run", "integrate the homogeneous model and analyze it")
    add("regime-scan", "classify regimes along the scan axis")
    p = add("hysteresis", "adiabatic forward/backward delta_c sweep")
    p.add_argument("--hold-time", type=float, default=2000.0,
                   help="hold time per grid step (1/gamma)")
    add("ensemble-run", "integrate the Doppler-broadened ensemble")
    add("nonreciprocity", "both-geometry frequency scan with eta")
    return parser


def _resolve_scenario(args) -> sc.Scenario:
    if not args.config and not args.preset:
        raise ConfigError("provide --config and/or --preset")
    scn = sc.PRESETS[args.preset]() if args.preset else None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if scn is None:
            scn = sc.parse_scenario(text)
        else:
            scn = sc.parse_scenario(_overlay(scn, text))
    if args.seed is not None:
        scn = replace(scn, seed=args.seed)
    if args.geometry is not None:
        if scn.thermal is None:
            raise ConfigError("--geometry requires a thermal scenario")
        scn = replace(scn, thermal=replace(
            scn.thermal, geometry=Geometry(args.geometry)))
    if args.out:
        scn = replace(scn, output_dir=args.out)
    return scn


def _overlay(base: sc.Scenario, text: str) -> str:
    """INI text with the file's keys laid over the preset's, per section.

    A partial config (say just [integrator]) tweaks the preset in place;
    keys not mentioned keep their preset values.
    """
    import configparser
    merged = configparser.ConfigParser()
    merged.read_string(sc.serialize_scenario(base))
    user = configparser.ConfigParser()
    try:
        user.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc
    for section in user.sections():
        if not merged.has_section(section):
            merged.add_section(section)
        for key, value in user[section].items():
            merged[section][key] = value
    buf = io.StringIO()
    merged.write(buf)
    return buf.getvalue()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scn = _resolve_scenario(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "single-run":
            files = runner.cmd_single_run(scn, out_dir=args.out)
        elif args.command == "regime-scan":
            files = runner.cmd_regime_scan(scn, out_dir=args.out,
                                           workers=args.workers)
        elif args.command == "hysteresis":
            files = runner.cmd_hysteresis(scn, out_dir=args.out,
                                          hold_time=args.hold_time)
        elif args.command == "ensemble-run":
            files = runner.cmd_ensemble_run(scn, out_dir=args.out)
        elif args.command == "nonreciprocity":
            files = runner.cmd_nonreciprocity(scn, out_dir=args.out,
                                              workers=args.workers)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RydsyncError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    for path in files:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
