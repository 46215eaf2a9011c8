"""Command line entry point: ``memflow solve | bench | topo-check``.

Exit codes: 0 ok, 2 usage or input error, 10 solved, 20 timed out,
30 a check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from memflow import bench, topology
from memflow.cnf import DimacsError, read_dimacs
from memflow.dynamics import IntegratorConfig, NoiseConfig, write_trajectory_csv
from memflow.instrumentation.eventlog import write_events

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVED = 10
EXIT_TIMEOUT = 20
EXIT_CHECK_FAILED = 30


class UsageError(Exception):
    pass


def read_config_file(path) -> dict:
    """``key=value`` lines; keys are flag names with or without dashes."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MEMFLOW_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def dynamics_flags(p):
        p.add_argument("--config", help="key=value file mirroring these flags (flags win)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--dt", type=float, default=0.05)
        p.add_argument("--t-max", type=float, default=1e4)
        p.add_argument("--theta", type=float, default=None, help="noise intensity; enables Euler-Maruyama")
        p.add_argument("--restarts", type=int, default=1)
        p.add_argument("--record-stride", type=int, default=10)

    solve = sub.add_parser("solve", help="solve one DIMACS instance")
    solve.add_argument("path")
    dynamics_flags(solve)
    solve.add_argument("--json", action="store_true", help="print the result record as JSON")
    solve.add_argument("--trace", help="write the sampled trajectory as CSV")
    solve.add_argument("--events", help="write crossing and critical events as JSON lines")

    b = sub.add_parser("bench", help="seeded scaling study over planted instances")
    dynamics_flags(b)
    b.add_argument("--sizes", type=_sizes, default=[20, 40, 80, 160])
    b.add_argument("--ratio", type=float, default=4.25)
    b.add_argument("--k", type=int, default=3)
    b.add_argument("--instances", type=int, default=25)
    b.add_argument("--out", default="results.jsonl")
    b.add_argument("--fit", action="store_true")
    b.add_argument("--slope-max", type=float, default=3.0)
    b.add_argument("--min-solve-rate", type=float, default=0.8)
    b.add_argument("--jobs", type=int, default=_default_jobs())
    b.add_argument("--no-critical", action="store_true", help="skip critical-point refinement")

    topo = sub.add_parser("topo-check", help="index sums of the built-in vector fields")
    topo.add_argument("--field", default="all")
    topo.add_argument("--sweep", type=int, default=20)
    topo.add_argument("--config")
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        file_values = read_config_file(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, raw in file_values.items():
            if key not in known or key in ("config", "path", "help"):
                raise UsageError(f"unknown config key {key!r}")
            action = known[key]
            if action.const is True:
                defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                try:
                    defaults[key] = action.type(raw)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"bad config value {key}={raw}: {exc}") from None
            else:
                defaults[key] = raw
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _integrator(args) -> IntegratorConfig:
    return IntegratorConfig(dt=args.dt, t_max=args.t_max, record_stride=args.record_stride)


def _noise(args):
    return None if args.theta is None else NoiseConfig(theta=args.theta)


def cmd_solve(args) -> int:
    try:
        formula = read_dimacs(args.path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror or exc}") from None
    except DimacsError as exc:
        raise UsageError(f"{args.path}: {exc}") from None
    config = bench.RunConfig(
        source=str(args.path),
        integrator=_integrator(args),
        noise=_noise(args),
        seed=args.seed,
        restarts=args.restarts,
        instance_id=os.path.basename(args.path),
    )
    result, outcome = bench.execute(config, formula)
    if args.trace:
        write_trajectory_csv(outcome.samples, args.trace)
    if args.events:
        write_events(list(outcome.crossings) + list(outcome.critical.visits), args.events)

    if args.json:
        record = result.to_record()
        if outcome.solved:
            record["assignment"] = bench.assignment_vline(outcome.assignment)
        print(json.dumps(record, sort_keys=True))
    else:
        print(f"c verdict {result.verdict}")
        print(f"c t_solved {result.t_solved}")
        print(f"c crossings {result.crossings_total}")
        print(f"c steps {result.steps}")
        if outcome.solved:
            print("s SATISFIABLE")
            print(bench.assignment_vline(outcome.assignment))
        else:
            print("s UNKNOWN")
    return EXIT_SOLVED if outcome.solved else EXIT_TIMEOUT


def cmd_bench(args) -> int:
    if args.fit and len(args.sizes) < 3:
        raise UsageError("--fit needs at least 3 sizes")
    if args.instances < 1:
        raise UsageError("--instances must be positive")
    configs = bench.scaling_configs(
        args.sizes,
        ratio=args.ratio,
        instances=args.instances,
        seed=args.seed,
        k=args.k,
        integrator=_integrator(args),
        noise=_noise(args),
        restarts=args.restarts,
        track_critical=not args.no_critical,
    )

    def progress(r):
        print(f"{r.instance_id} {r.verdict} t={r.t_solved} crossings={r.crossings_total}", file=sys.stderr)

    results = bench.run_many(configs, jobs=args.jobs, out=args.out, on_result=progress)
    if not args.fit:
        return EXIT_OK
    summary = bench.summarize(results, args.slope_max, args.min_solve_rate)
    for n, rate in summary.solve_rates.items():
        print(f"n={n} solve_rate={rate:.3f}")
    if summary.fit is None:
        print(f"fit failed: {summary.error}")
        return EXIT_CHECK_FAILED
    fit = summary.fit
    print("sizes " + " ".join(str(int(n)) for n in fit.sizes))
    print("medians " + " ".join(f"{m:g}" for m in fit.medians))
    print(f"slope {fit.slope:.4f} r_squared {fit.r_squared:.4f} slope_max {args.slope_max}")
    print("PASS" if summary.passed else "FAIL")
    return EXIT_OK if summary.passed else EXIT_CHECK_FAILED


def cmd_topo_check(args) -> int:
    names = list(topology.FAMILIES) if args.field == "all" else [args.field]
    for name in names:
        if name not in topology.FAMILIES:
            raise UsageError(f"unknown field {name!r}; choose from {', '.join(topology.FAMILIES)} or all")
    if args.sweep < 1:
        raise UsageError("--sweep must be positive")
    ok = True
    print(f"{'field':<12}{'parameter':>12}{'zeros':>7}{'sum':>6}{'expected':>10}  result")
    for name in names:
        for row in topology.check_family(name, args.sweep):
            ok &= row.passed
            status = "PASS" if row.passed else "FAIL"
            print(f"{row.field:<12}{row.parameter:>12.4f}{row.zero_count:>7}{row.signed_sum:>6}{row.expected:>10}  {status}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "topo-check": cmd_topo_check}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"memflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
