"""Command line entry point: ``mpcsb run|enumerate|oracle-check <config.toml>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .core import action_objective
from .harness import emit, load_config, run_experiment
from .oracles import EnumerationLimitExceeded, argmin_action, brute_force_argmin, enumerate_actions


def _overrides(cfg, args):
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.out is not None:
        changes["output"] = args.out
    if getattr(args, "horizon", None) is not None:
        changes["horizon"] = args.horizon
    if getattr(args, "workers", None) is not None:
        changes["workers"] = args.workers
    return cfg.replace(**changes) if changes else cfg


def cmd_run(args) -> int:
    cfg = _overrides(load_config(args.config), args)
    if cfg.output is None:
        print("error: no output directory (set 'output' in the config or pass --out)", file=sys.stderr)
        return 2
    result = run_experiment(cfg)
    files = emit(result, cfg.output)
    print(f"mean final regret {result.final.mean():.4f} over {cfg.trials} trials (T={cfg.horizon})")
    for name, path in files.items():
        print(f"  {name}: {path}")
    return 0


def cmd_enumerate(args) -> int:
    cfg = load_config(args.config)
    try:
        actions = enumerate_actions(cfg.instance, args.limit)
    except EnumerationLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{len(actions)} actions (d={cfg.instance.d}, caps={cfg.instance.caps.tolist()})")
    for a in actions[: args.show]:
        print(" ".join(str(int(v)) for v in a))
    if len(actions) > args.show:
        print(f"... ({len(actions) - args.show} more)")
    return 0


def cmd_oracle_check(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.instance
    rng = np.random.default_rng(cfg.seed if args.seed is None else args.seed)
    mismatches = 0
    for k in range(args.instances):
        rho = rng.uniform(-1.0, 1.0, size=spec.d) if args.signed else rng.random(spec.d)
        a = argmin_action(spec, rho)
        _, best = brute_force_argmin(spec, rho, limit=args.limit)
        got = action_objective(a, rho)
        if got != best or not spec.validate_action(a):
            mismatches += 1
            print(f"mismatch #{k}: oracle {got!r} vs enumeration {best!r} for rho={rho.tolist()}")
    report = {"instances": args.instances, "mismatches": mismatches}
    print(json.dumps(report))
    return 1 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpcsb", description="Multi-play combinatorial semi-bandit experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write regret.csv / summary.json")
    run.add_argument("config")
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--out")
    run.add_argument("--horizon", type=int)
    run.add_argument("--workers", type=int)
    run.set_defaults(func=cmd_run)

    en = sub.add_parser("enumerate", help="list the action set of the configured instance")
    en.add_argument("config")
    en.add_argument("--limit", type=int, default=100_000)
    en.add_argument("--show", type=int, default=20)
    en.set_defaults(func=cmd_enumerate)

    oc = sub.add_parser("oracle-check", help="compare the oracle with brute force on random cost vectors")
    oc.add_argument("config")
    oc.add_argument("--instances", type=int, default=1000)
    oc.add_argument("--seed", type=int)
    oc.add_argument("--limit", type=int, default=100_000)
    oc.add_argument("--signed", action="store_true", help="draw costs from [-1, 1] instead of [0, 1]")
    oc.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
