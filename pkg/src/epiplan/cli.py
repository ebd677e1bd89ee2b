"""Command-line interface: validate, plan, run.

Exit codes: 0 success, 1 domain/planning/run failure, 2 usage or I/O
error.  Traces are written to the directory named by EPIPLAN_TRACE_DIR
(default: current directory).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import engine
from .controller import Session, run as run_loop
from .kernel import init_tree
from .language import ParseError, ground, parse_files, validate
from .planner import SearchConfig, assess, find_weak_plan
from .simworld import SimError, Simulator, load_script

__all__ = ["main", "cmd_validate", "cmd_plan", "cmd_run"]


def _load(domain_path, problem_path=None):
    try:
        return parse_files(domain_path, problem_path)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _config(args):
    return SearchConfig(
        exo_n=args.exo_n,
        exo_mode=args.exo_mode,
        max_horizon=args.max_horizon,
    )


def cmd_validate(args):
    domain, problem = _load(args.domain, args.problem)
    report = validate(domain, problem, strict_exogenous=args.strict)
    for msg in report.violations:
        print(f"error: {msg}")
    if not report.ok:
        return 1
    print(f"ok: domain '{domain.name}', problem '{problem.name}'")
    return 0


def cmd_plan(args):
    domain, problem = _load(args.domain, args.problem)
    gdom = ground(domain, problem)
    tree = init_tree(gdom)
    config = _config(args)
    plan = None
    for horizon in range(1, args.horizon + 1):
        plan = find_weak_plan(tree, horizon, config)
        if plan is not None:
            break
    if plan is None:
        print(f"no weak plan within horizon {args.horizon}")
        return 1
    quality = assess(plan)
    sys.stdout.write(plan.serialize_with_quality(quality))
    print(f"horizon={plan.horizon}")
    return 0


def cmd_run(args):
    domain, problem = _load(args.domain, args.problem)
    gdom = ground(domain, problem)
    try:
        events = load_script(args.script) if args.script else ()
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimError as exc:
        print(f"script error: {exc}", file=sys.stderr)
        return 1
    try:
        sim = Simulator(gdom, (), events)
    except SimError as exc:
        print(f"script error: {exc}", file=sys.stderr)
        return 1
    session = Session(gdom, _config(args))
    trace = run_loop(session, sim)

    trace_dir = os.environ.get("EPIPLAN_TRACE_DIR", ".")
    os.makedirs(trace_dir, exist_ok=True)
    trace_path = os.path.join(trace_dir, f"{problem.name}.trace")
    with open(trace_path, "w", encoding="utf-8") as fh:
        fh.write(trace.text())

    outcome = "goal-achieved" if trace.achieved else "unsolvable"
    qualities = [
        line for line in trace.log if line.startswith("plan{")
    ]
    print(f"outcome: {outcome}")
    print(f"final horizon: {session.psession.horizon}")
    print(f"plans found: {len(qualities)}")
    print(f"trace: {trace_path}")
    return 0 if trace.achieved else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="epiplan",
        description="Online epistemic planner with sensing and postdiction",
    )
    parser.add_argument(
        "--version", action="version",
        version=f"epiplan (engine backend: {engine.BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a domain/problem file")
    p.add_argument("domain")
    p.add_argument("problem", nargs="?", default=None)
    p.add_argument("--strict", action="store_true",
                   help="enforce the single-effect exogenous restriction")
    p.set_defaults(func=cmd_validate)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exo-n", type=int, default=4, metavar="N",
                        help="exogenous budget constant (default 4)")
    common.add_argument("--exo-mode", choices=("modulo", "division"),
                        default="modulo", help="budget rule (default modulo)")
    common.add_argument("--max-horizon", type=int, default=20,
                        help="hard horizon limit (default 20)")
    common.add_argument("--workers", type=int, default=1,
                        help="search worker processes (currently single)")

    p = sub.add_parser("plan", parents=[common],
                       help="offline weak planning")
    p.add_argument("domain")
    p.add_argument("problem", nargs="?", default=None)
    p.add_argument("--horizon", type=int, default=10,
                   help="maximum horizon to try (default 10)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", parents=[common],
                       help="closed-loop run against the simulator")
    p.add_argument("domain")
    p.add_argument("problem", nargs="?", default=None)
    p.add_argument("--script", default=None,
                   help="event script file (default: no events)")
    p.add_argument("--seedless", action="store_true",
                   help="accepted for compatibility; runs are deterministic")
    p.set_defaults(func=cmd_run)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
