"""Command line front end.

    sense <experiment> [--config FILE] [--trials N] [--seed S]
          [--out DIR] [--workers N] [--set section.key=value ...] [--check]

Exit status: 0 on success, 2 on configuration errors, 3 when --check is
given and an acceptance check fails.
"""

import argparse
import sys
from pathlib import Path

from .config import EXPERIMENT_IDS, ConfigError, load_campaign
from .campaigns import run_campaign


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sense",
        description="Seeded Monte Carlo campaigns for the wideband sensing pipeline.",
    )
    p.add_argument("experiment", choices=EXPERIMENT_IDS, help="experiment to run")
    p.add_argument("--config", type=Path, default=None,
                   help="key = value config file (defaults are built in)")
    p.add_argument("--trials", type=int, default=None, help="override trial count")
    p.add_argument("--seed", type=int, default=None, help="override master seed")
    p.add_argument("--out", type=Path, default=None,
                   help="output directory (default sense-out/<experiment>)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: auto)")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="section.key=value", help="override a single config key")
    p.add_argument("--check", action="store_true",
                   help="evaluate the experiment's acceptance checks; exit 3 on failure")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_campaign(args.experiment, args.config, trials=args.trials,
                            master_seed=args.seed, overrides=args.overrides)
        if args.workers is not None:
            from dataclasses import replace

            cfg = replace(cfg, workers=args.workers)
        out_dir = args.out or Path("sense-out") / args.experiment
        summary, checks = run_campaign(cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 2

    for key, val in summary.items():
        print(f"{key} = {val}")
    status = 0
    if args.check:
        for name, ok, detail in checks:
            mark = "PASS" if ok else "FAIL"
            print(f"[{mark}] {name}" + (f" ({detail})" if detail else ""))
            if not ok:
                status = 3
    print(f"outputs written to {out_dir}")
    return status


if __name__ == "__main__":
    sys.exit(main())
