"""Command line front end.

Subcommands: generate (emit a scenario file), run (execute a scenario to
CSV), compare (run a named planner roster over one scenario), verify
(re-certify a CSV against its oracle).  Exit codes: 0 ok, 2 usage error,
3 invariant violation.
"""

import argparse
import sys
from typing import List, Optional

from .bench import read_csv, run_scenario, thread_count, verify_csv, write_csv
from .errors import InvariantViolation, UsageError
from .generate import (densify_scenario, default_planners, grid_scenario,
                       roadmap_scenario)
from .scenario import dump_scenario, load_scenario
from .stationary import DEFAULT_EPS, MOVING_ROSTER, ROSTER, STATIONARY_ROSTER


def _parse_planner_list(text: str, mode: str) -> List[dict]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("empty planner list")
    side = MOVING_ROSTER if mode == "moving" else STATIONARY_ROSTER
    specs = []
    for name in names:
        if name not in ROSTER:
            raise UsageError(f"unknown planner {name!r}")
        if name not in side:
            raise UsageError(f"planner {name!r} does not run in {mode} mode")
        spec = {"name": name}
        if name in DEFAULT_EPS:
            spec["eps1"], spec["eps2"] = DEFAULT_EPS[name]
        specs.append(spec)
    return specs


def _cmd_generate(args) -> int:
    planners = None
    if args.planners:
        planners = _parse_planner_list(args.planners, args.mode)
        for spec in planners:
            if args.eps1 is not None:
                spec["eps1"] = args.eps1
            if args.eps2 is not None:
                spec["eps2"] = args.eps2
    if args.kind == "grid":
        cfg = grid_scenario(
            args.id, args.seed, args.rows, args.cols,
            connectivity=args.connectivity, mode=args.mode,
            epochs=args.epochs, n_scenes=args.n_scenes,
            n_obstacles=args.n_obstacles,
            disjoint_epoch=args.disjoint_epoch, fraction=args.fraction,
            planners=planners, start=args.start, goal=args.goal,
            eval_delay_us=args.eval_delay_us)
    elif args.mode == "densify":
        cfg = densify_scenario(
            args.id, args.seed, args.n, args.k, sampler=args.sampler,
            epochs=args.epochs, batch_size=args.batch_size,
            schedule=not args.no_schedule, planners=planners,
            start=args.start, goal=args.goal,
            eval_delay_us=args.eval_delay_us)
    else:
        cfg = roadmap_scenario(
            args.id, args.seed, args.n, args.k, sampler=args.sampler,
            mode=args.mode, epochs=args.epochs, fraction=args.fraction,
            planners=planners, start=args.start, goal=args.goal,
            eval_delay_us=args.eval_delay_us)
    dump_scenario(cfg, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_run(args) -> int:
    cfg = load_scenario(args.scenario)
    result = run_scenario(cfg, timing=args.timing, debug=args.debug,
                          threads=thread_count())
    write_csv(args.out, result.rows)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 0


def _cmd_compare(args) -> int:
    cfg = load_scenario(args.scenario)
    cfg = dict(cfg)
    cfg["planners"] = _parse_planner_list(args.planners, cfg["mode"])
    result = run_scenario(cfg, timing=args.timing, debug=args.debug,
                          threads=thread_count())
    write_csv(args.out, result.rows)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 0


def _cmd_verify(args) -> int:
    rows = read_csv(args.csv)
    cfg = load_scenario(args.scenario) if args.scenario else None
    checked = verify_csv(rows, cfg)
    print(f"verified {checked} rows")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lazyreplan")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a scenario file")
    g.add_argument("--out", required=True)
    g.add_argument("--id", default="scenario")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=("grid", "roadmap"), default="grid")
    g.add_argument("--mode", choices=("stationary", "moving", "densify"),
                   default="stationary")
    g.add_argument("--epochs", type=int, default=6)
    g.add_argument("--rows", type=int, default=16)
    g.add_argument("--cols", type=int, default=16)
    g.add_argument("--connectivity", type=int, choices=(4, 8), default=8)
    g.add_argument("--n-scenes", type=int, default=3)
    g.add_argument("--n-obstacles", type=int, default=3)
    g.add_argument("--disjoint-epoch", type=int, default=None)
    g.add_argument("--fraction", type=float, default=None)
    g.add_argument("--n", type=int, default=200)
    g.add_argument("--k", type=int, default=8)
    g.add_argument("--sampler", choices=("halton", "uniform"),
                   default="halton")
    g.add_argument("--batch-size", type=int, default=100)
    g.add_argument("--no-schedule", action="store_true")
    g.add_argument("--planners", default=None,
                   help="comma separated planner names")
    g.add_argument("--eps1", type=float, default=None)
    g.add_argument("--eps2", type=float, default=None)
    g.add_argument("--start", type=int, default=None)
    g.add_argument("--goal", type=int, default=None)
    g.add_argument("--eval-delay-us", type=float, default=None)
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("run", help="run a scenario, write CSV")
    r.add_argument("--scenario", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--timing", action="store_true",
                   help="record wall time per query (breaks determinism)")
    r.add_argument("--debug", action="store_true",
                   help="run queue and weight-store invariant scans")
    r.set_defaults(func=_cmd_run)

    c = sub.add_parser("compare",
                       help="run a planner roster over one scenario")
    c.add_argument("--scenario", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--planners", required=True,
                   help="comma separated planner names")
    c.add_argument("--timing", action="store_true")
    c.add_argument("--debug", action="store_true")
    c.set_defaults(func=_cmd_compare)

    v = sub.add_parser("verify", help="re-certify a CSV against the oracle")
    v.add_argument("--csv", required=True)
    v.add_argument("--scenario", default=None,
                   help="scenario file, for per-planner bounds")
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
