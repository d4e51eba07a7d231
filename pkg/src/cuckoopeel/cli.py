"""Command-line interface.

Subcommands: ``gen`` (sample a hypergraph to JSON), ``peel`` (peel and
report peeling numbers), ``rw-bench`` (bulk random-walk insertion
benchmark), ``rep`` (eviction-process runs), ``thresholds`` (peeling
threshold table), ``cont-peel`` (continuous-time peeling trajectories) and
``verify`` (acceptance checks).

Exit status: 0 on success, 1 when a verification check fails, 2 on usage
errors.  Every parameter set can also be supplied as a JSON object via
``--config PATH``; explicit flags override file values.  All seeds are
64-bit decimals and all outputs embed their full configuration.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from ._backend import backend_name
from .analysis import (
    light_heavy_profile,
    peeling_threshold,
    reference_thresholds,
    simulate_continuous_peeling,
    smallest_heavy_bounded_t0,
)
from .cuckoo import bulk_insert_experiment
from .errors import InvalidParameterError
from .eviction import POLICIES, default_round_cap, run_rep, run_rep_prime
from .hypergraph import from_json_dict, sample_hypergraph, to_json_dict
from .peeling import Peeling, peel, peeling_numbers
from .report import RunReport, emit_report
from .rng import derive_seed
from . import checks


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, step, stop = (float(x) for x in text.split(":"))
    except ValueError:
        raise InvalidParameterError(
            f"grid must look like 'start:step:stop', got {text!r}"
        ) from None
    if step <= 0 or stop < start or start < 0:
        raise InvalidParameterError(f"bad grid range {text!r}")
    return np.round(np.arange(start, stop + step / 2, step), 10)


def _seed_type(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_gen(args) -> int:
    H = sample_hypergraph(args.n, args.m, args.k, args.seed)
    _write_json(to_json_dict(H), args.out)
    return 0


def _load_or_sample(args):
    if args.infile is not None:
        with open(args.infile, "r", encoding="utf-8") as fh:
            return from_json_dict(json.load(fh))
    if args.n is None or args.m is None:
        raise InvalidParameterError("peel needs --in FILE or --n/--m/--k/--seed")
    return sample_hypergraph(args.n, args.m, args.k, args.seed)


def _cmd_peel(args) -> int:
    H = _load_or_sample(args)
    result = peel(H, seed=args.peel_seed, randomize=args.randomize)
    doc = {
        "schema": 1,
        "config": {
            "n": H.n,
            "m": H.m,
            "k": H.k,
            "seed": H.seed,
            "peel_seed": args.peel_seed,
            "randomize": args.randomize,
        },
    }
    if isinstance(result, Peeling):
        report = peeling_numbers(H, result)
        doc["peelable"] = True
        doc["total_peel"] = report.total_peel
        doc["overflow"] = report.overflow
        small = H.m <= args.edge_cutoff
        doc["edge_peel"] = [int(x) for x in report.edge_peel] if small else None
        doc["ending_paths"] = (
            [int(x) for x in report.ending_paths] if H.n <= args.edge_cutoff else None
        )
    else:
        doc["peelable"] = False
        doc["core_edges"] = int(len(result.edges))
        doc["core_vertices"] = int(np.count_nonzero(result.degrees))
    _write_json(doc, args.out)
    return 0


def _cmd_rw_bench(args) -> int:
    summary = bulk_insert_experiment(
        args.n,
        args.k,
        args.load,
        args.seed,
        use_iold=not args.no_iold,
        trials=args.trials,
        move_cap=args.move_cap,
    )
    report = RunReport(
        command="rw-bench",
        config={
            "n": args.n,
            "k": args.k,
            "load": args.load,
            "seed": args.seed,
            "trials": args.trials,
            "use_iold": not args.no_iold,
            "move_cap": summary.move_cap,
            "backend": backend_name(),
        },
        columns=[
            "n",
            "k",
            "load",
            "seed",
            "trial",
            "keys",
            "total_moves",
            "mean_moves",
            "max_moves",
            "failures",
        ],
        rows=[
            [
                args.n,
                args.k,
                args.load,
                tr.seed,
                tr.trial,
                tr.keys,
                tr.total_moves,
                tr.mean_moves,
                tr.max_moves,
                tr.failures,
            ]
            for tr in summary.trials
        ],
        aggregates={
            "mean_moves": summary.mean_moves,
            "total_failures": summary.total_failures,
        },
    )
    emit_report(report, "csv", args.csv)
    return 0


def _cmd_rep(args) -> int:
    rows = []
    for trial in range(args.trials):
        trial_seed = derive_seed(args.seed, trial)
        H = sample_hypergraph(args.n, args.m, args.k, trial_seed)
        peeling = peel(H, seed=derive_seed(trial_seed, 1), randomize=True)
        if isinstance(peeling, Peeling):
            bound = args.k * (args.m + peeling_numbers(H, peeling).total_peel)
        else:
            bound = ""
        if args.variant == "rep-prime":
            if not isinstance(peeling, Peeling):
                print(
                    f"trial {trial}: instance is not peelable, no target "
                    "orientation exists",
                    file=sys.stderr,
                )
                return 1
            run = run_rep_prime(
                H, peeling, args.policy, derive_seed(trial_seed, 2), cap=args.cap
            )
        else:
            run = run_rep(
                H,
                args.policy,
                derive_seed(trial_seed, 2),
                cap=args.cap,
                use_iold=args.use_iold,
            )
        rows.append(
            [
                args.variant,
                args.policy,
                args.n,
                args.m,
                args.k,
                trial_seed,
                trial,
                run.trace.rounds,
                run.trace.status,
                bound,
            ]
        )
    report = RunReport(
        command="rep",
        config={
            "variant": args.variant,
            "policy": args.policy,
            "n": args.n,
            "m": args.m,
            "k": args.k,
            "seed": args.seed,
            "trials": args.trials,
            "cap": args.cap if args.cap is not None else default_round_cap(args.m, args.k),
            "use_iold": args.use_iold,
            "backend": backend_name(),
        },
        columns=[
            "variant",
            "policy",
            "n",
            "m",
            "k",
            "seed",
            "trial",
            "rounds",
            "status",
            "lemma4_bound",
        ],
        rows=rows,
    )
    emit_report(report, "csv", args.csv)
    return 0


def _cmd_thresholds(args) -> int:
    print(f"{'k':>3} {'lambda*':>14} {'c_delta':>10} {'reference':>10}")
    for k in range(args.k_min, args.k_max + 1):
        res = peeling_threshold(k)
        try:
            ref = f"{reference_thresholds(k, 1)[0]:.3f}"
        except InvalidParameterError:
            ref = "-"
        print(f"{k:>3} {res.lambda_star:>14.9f} {res.c_delta:>10.6f} {ref:>10}")
    return 0


def _cmd_cont_peel(args) -> int:
    grid = _parse_grid(args.grid)
    rows = []
    profiles = []
    for i in range(args.seeds):
        run_seed = derive_seed(args.seed, i)
        traj = simulate_continuous_peeling(
            args.n, int(args.c * args.n), args.k, run_seed, grid
        )
        for t, b, h, light in zip(traj.times, traj.balls, traj.heavy, traj.light):
            rows.append([run_seed, float(t), int(b), int(h), int(light), traj.tau])
        if args.t0 is not None:
            profiles.append(
                (
                    light_heavy_profile(traj, args.t0, args.k),
                    smallest_heavy_bounded_t0(traj, args.k),
                )
            )
    if args.t0 is not None:
        ok = sum(
            1
            for prof, _ in profiles
            if prof.reached_t0 and prof.heavy_bounded_after
        )
        smallest = sorted(t for _, t in profiles)
        print(
            f"t0={args.t0}: heavy <= balls/(2k) on [t0, tau] in "
            f"{ok}/{args.seeds} seeds"
        )
        print(
            "smallest passing t0: median "
            f"{smallest[len(smallest) // 2]:.4f}, max {smallest[-1]:.4f}"
        )
    report = RunReport(
        command="cont-peel",
        config={
            "n": args.n,
            "c": args.c,
            "k": args.k,
            "seeds": args.seeds,
            "seed": args.seed,
            "grid": args.grid,
            "backend": backend_name(),
        },
        columns=["seed", "t", "B", "H", "L", "tau"],
        rows=rows,
    )
    emit_report(report, "csv", args.csv)
    return 0


def _cmd_verify(args) -> int:
    if args.quick:
        results = checks.run_quick(seed=args.seed)
    else:
        numbers = None
        if args.criteria:
            numbers = [int(x) for x in args.criteria.split(",")]
        results = checks.run_criteria(numbers, seed=args.seed)
    for res in results:
        print(res.line())
        for key, value in sorted(res.details.items()):
            print(f"         {key}: {value}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _add_config_arg(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--config",
        metavar="PATH",
        help="JSON file with parameter defaults for this subcommand",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuckoopeel",
        description="cuckoo hashing, eviction processes and hypergraph peeling",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a hypergraph and write it as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=_seed_type, default=0)
    p.add_argument("--out", metavar="PATH")
    _add_config_arg(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("peel", help="peel a hypergraph and report peeling numbers")
    p.add_argument("--in", dest="infile", metavar="PATH")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=_seed_type, default=0)
    p.add_argument("--peel-seed", type=_seed_type, default=0)
    p.add_argument("--randomize", action="store_true")
    p.add_argument("--edge-cutoff", type=int, default=10_000)
    p.add_argument("--out", metavar="PATH")
    _add_config_arg(p)
    p.set_defaults(func=_cmd_peel)

    p = sub.add_parser("rw-bench", help="bulk random-walk insertion benchmark")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--load", type=float, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=_seed_type, default=0)
    p.add_argument("--no-iold", action="store_true")
    p.add_argument("--move-cap", type=int)
    p.add_argument("--csv", metavar="PATH", required=True)
    _add_config_arg(p)
    p.set_defaults(func=_cmd_rw_bench)

    p = sub.add_parser("rep", help="eviction-process runs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--policy", choices=POLICIES, default="random")
    p.add_argument("--variant", choices=("rep", "rep-prime"), default="rep")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=_seed_type, default=0)
    p.add_argument("--cap", type=int)
    p.add_argument("--use-iold", action="store_true")
    p.add_argument("--csv", metavar="PATH", required=True)
    _add_config_arg(p)
    p.set_defaults(func=_cmd_rep)

    p = sub.add_parser("thresholds", help="print the peeling threshold table")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=12)
    _add_config_arg(p)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("cont-peel", help="continuous-time peeling trajectories")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed", type=_seed_type, default=0)
    p.add_argument("--grid", default="0:0.05:6")
    p.add_argument(
        "--t0",
        type=float,
        help="also report the light/heavy split at this time and the "
        "smallest time from which heavy <= balls/(2k) holds",
    )
    p.add_argument("--csv", metavar="PATH", required=True)
    _add_config_arg(p)
    p.set_defaults(func=_cmd_cont_peel)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="small-instance oracle suites")
    p.add_argument("--criteria", help="comma-separated criterion numbers to run")
    p.add_argument("--seed", type=_seed_type, default=checks.DEFAULT_SEED)
    _add_config_arg(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Pre-scan for --config and install file values as subcommand defaults
    (explicit flags still override; required flags are satisfied by the
    file)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        parser.error("--config needs a path")
    with open(argv[idx + 1], "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        parser.error("--config file must hold a JSON object")
    values = {key.replace("-", "_"): value for key, value in cfg.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for name, subparser in action.choices.items():
            if argv and argv[0] == name:
                for act in subparser._actions:
                    if act.dest in values:
                        act.default = values[act.dest]
                        act.required = False
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


run_cli = main


if __name__ == "__main__":
    sys.exit(main())
