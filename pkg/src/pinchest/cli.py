"""Command line front end for the Monte Carlo harness."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import harness


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON experiment config; defaults otherwise")
    parser.add_argument("--seed", type=int, help="override base_seed")
    parser.add_argument("--trials", type=int, help="override trial count")
    parser.add_argument("--out", help="override output CSV path")
    parser.add_argument("--methods", help="comma list, e.g. LS,Refined,Oracle")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes; results do not depend on this")


def _load(args) -> harness.ExperimentConfig:
    config = harness.load_config(args.config) if args.config else harness.ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.out is not None:
        overrides["out"] = args.out
    if args.methods is not None:
        overrides["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    return dataclasses.replace(config, **overrides) if overrides else config


def _finish(rows, config):
    harness.emit_csv(rows, config.out)
    for row in rows:
        print(f"{row.sweep_value!s:>10}  {row.method:<10} "
              f"nmse={row.mean_nmse:.6e}  rate={row.mean_rate:.6f}")
    print(f"wrote {config.out}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pinchest",
        description="Monte Carlo channel estimation for a pinching-antenna waveguide")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single sweep point")
    _add_common(p_run)
    p_run.add_argument("--power-dbm", type=float,
                       help="pilot power; defaults to the first configured value")

    p_power = sub.add_parser("sweep-power", help="mean NMSE/rate over pilot powers")
    _add_common(p_power)

    p_sub = sub.add_parser("sweep-subarray", help="mean NMSE/rate over subarray splits")
    _add_common(p_sub)
    p_sub.add_argument("--power-dbm", type=float,
                       help="pilot power; defaults to the largest configured value")

    args = parser.parse_args(argv)
    config = _load(args)

    if args.command == "run":
        power = args.power_dbm if args.power_dbm is not None else config.pilot_powers_dbm[0]
        single = dataclasses.replace(config, pilot_powers_dbm=(power,))
        rows, _ = harness.sweep_power(single, jobs=args.jobs)
        _finish(rows, single)
    elif args.command == "sweep-power":
        rows, _ = harness.sweep_power(config, jobs=args.jobs)
        _finish(rows, config)
    else:
        rows, _ = harness.sweep_subarray(config, power_dbm=args.power_dbm, jobs=args.jobs)
        _finish(rows, config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
