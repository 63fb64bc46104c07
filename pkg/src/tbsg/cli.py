"""Command-line driver: ``tbsg {solve,gen,transform,verify,bench}``.

Exit codes: 0 success, 1 bad input or failed invariant, 2 iteration budget
exhausted.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from tbsg import bench
from tbsg.algorithms import ALGORITHMS, solve
from tbsg.game import default_eps, validate_game
from tbsg.generate import GenSpec, generate
from tbsg.io import GameFormatError, fmt, format_game, read_game
from tbsg.transform import UnsupportedInstanceError, format_map, to_binary
from tbsg.verify import CHECKS, run_checks

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _int_list(text):
    return [int(t) for t in text.split(",") if t]


def _float_list(text):
    return [float(t) for t in text.split(",") if t]


def _range(text):
    lo, _, hi = text.partition(",")
    return (int(lo), int(hi or lo))


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path, *, check_rows=True):
    g = read_game(path, check_rows=check_rows)
    problems = validate_game(g) if check_rows else []
    if problems:
        raise GameFormatError("invalid game: " + "; ".join(problems))
    return g


def cmd_solve(args) -> int:
    g = _load(args.input)
    if args.start == "random":
        start = g.random_strategy(np.random.default_rng(args.seed))
    else:
        start = g.default_strategy()
    rep = solve(g, args.algorithm, start=start, max_iters=args.max_iters, eps=args.eps)
    status = "limit" if not rep.converged else ("certified" if rep.certified else "uncertified")
    lines = [
        f"algorithm {rep.algorithm}",
        f"status {status}",
        f"iterations {rep.iterations}",
        "strategy " + " ".join(str(a) for a in rep.equilibrium),
        "value " + " ".join(fmt(x) for x in rep.value),
    ]
    _write(args.output, "\n".join(lines) + "\n")
    if args.trace:
        _write(args.trace, rep.trace_csv())
    if not rep.converged:
        print(f"error: iteration limit {args.max_iters} reached", file=sys.stderr)
        return EXIT_BUDGET
    if not rep.certified:
        print("error: result failed equilibrium certification", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GenSpec(num_states=args.states, actions_per_state=args.actions,
                   gamma=args.gamma, seed=args.seed, deterministic=args.deterministic,
                   player2_empty=args.mdp, reward_range=tuple(args.reward_range))
    _write(args.output, format_game(generate(spec)))
    return EXIT_OK


def cmd_transform(args) -> int:
    g = _load(args.input)
    tg = to_binary(g)
    _write(args.output, format_game(tg.game))
    map_path = args.map
    if map_path is None and args.output not in (None, "-"):
        map_path = args.output + ".map"
    if map_path is not None:
        _write(map_path, format_map(tg))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.input is not None:
        g = read_game(args.input, check_rows=False)
    else:
        g = generate(GenSpec(num_states=args.states, gamma=args.gamma, seed=args.seed))
    checks = args.check or CHECKS
    results = run_checks(g, checks, seed=args.seed, eps=args.eps)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"error: failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_bench(args) -> int:
    cells = bench.sweep_cells(args.sizes, args.gammas, range(args.seeds), args.algorithms,
                              actions_per_state=args.actions, max_iters=args.max_iters,
                              timing=not args.no_timing,
                              random_start=args.start == "random")
    rows = bench.run_sweep(cells, jobs=args.jobs)
    _write(args.output, bench.rows_to_csv(rows))
    bad = [r for r in rows if r["status"] != "ok" or not r["certified"]]
    if bad:
        print(f"warning: {len(bad)} of {len(rows)} runs not certified", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tbsg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--eps", type=_positive_float, default=default_eps(),
                       help="base tolerance (default: $TBSG_EPS or 1e-9)")

    p = sub.add_parser("solve", help="compute an equilibrium")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="simplex")
    p.add_argument("--max-iters", type=_positive_int, default=100_000)
    p.add_argument("--trace", help="write the per-iteration CSV trace here")
    p.add_argument("--start", choices=("default", "random"), default="default")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a random game")
    p.add_argument("--states", type=_positive_int, required=True)
    p.add_argument("--actions", type=_range, default=(2, 3),
                   help="actions per state, 'lo,hi' (default 2,3)")
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--mdp", action="store_true", help="give Player 2 no states")
    p.add_argument("--reward-range", type=float, nargs=2, default=(-1.0, 1.0))
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("transform", help="rewrite a game with two actions per state")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--map", help="sidecar mapping file (default: <output>.map)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run the invariant suite on a small game")
    p.add_argument("--input", help="game file; a random game is generated if omitted")
    p.add_argument("--states", type=_positive_int, default=4)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="append", choices=CHECKS)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="iteration counts over a sweep of random games")
    p.add_argument("--sizes", type=_int_list, default=[2, 4, 6])
    p.add_argument("--gammas", type=_float_list, default=[0.5, 0.7, 0.9])
    p.add_argument("--seeds", type=_positive_int, default=5)
    p.add_argument("--algorithms", type=lambda t: t.split(","), default=list(ALGORITHMS))
    p.add_argument("--actions", type=_range, default=(2, 3))
    p.add_argument("--max-iters", type=_positive_int, default=100_000)
    p.add_argument("--start", choices=("default", "random"), default="default",
                   help="random: start each run from a strategy seeded by its seed")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="write 0 for wall_ns so output is reproducible")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = parser.parse_args(argv)
    if getattr(args, "algorithms", None):
        unknown = set(args.algorithms) - set(ALGORITHMS)
        if unknown:
            print(f"error: unknown algorithms {sorted(unknown)}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (GameFormatError, UnsupportedInstanceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
