"""Iteration-count sweeps against the theoretical rates."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from tbsg.algorithms import ALGORITHMS, solve
from tbsg.game import Game
from tbsg.generate import GenSpec, generate
from tbsg.monitor import geometric_parameter

COLUMNS = ("l", "m", "gamma", "seed", "algorithm", "iterations", "wall_ns",
           "certified", "bound", "alg_bound", "ratio", "M", "status")
BUDGET_FACTOR = 10.0


def rate_bound(g: Game) -> float:
    """``(m l / (1-gamma)) log(l / (1-gamma))``."""
    l, m, gamma = g.num_states, g.num_actions, g.gamma
    return m * l / (1 - gamma) * math.log(l / (1 - gamma))


def algorithm_bound(g: Game, algorithm: str) -> float:
    """Rate for ``algorithm``; strategy iteration drops the factor ``l``."""
    if algorithm == "strategy":
        return rate_bound(g) / g.num_states
    return rate_bound(g)


@dataclass(frozen=True)
class Cell:
    num_states: int
    gamma: float
    seed: int
    algorithm: str
    actions_per_state: tuple[int, int] = (2, 3)
    max_iters: int = 100_000
    timing: bool = True
    random_start: bool = False


def run_cell(cell: Cell) -> dict:
    g = generate(GenSpec(num_states=cell.num_states, gamma=cell.gamma, seed=cell.seed,
                         actions_per_state=cell.actions_per_state))
    row = {"l": g.num_states, "m": g.num_actions, "gamma": cell.gamma,
           "seed": cell.seed, "algorithm": cell.algorithm,
           "bound": rate_bound(g), "alg_bound": algorithm_bound(g, cell.algorithm),
           "M": geometric_parameter(g, cell.algorithm)}
    start = None
    if cell.random_start:
        start = g.random_strategy(np.random.default_rng(cell.seed))
    t0 = time.perf_counter_ns()
    try:
        rep = solve(g, cell.algorithm, start=start, max_iters=cell.max_iters)
    except Exception as exc:  # one bad cell must not abort the sweep
        row.update(iterations=-1, wall_ns=0, certified=False, ratio=math.nan,
                   status=f"error: {type(exc).__name__}: {exc}")
        return row
    wall = time.perf_counter_ns() - t0
    row.update(iterations=rep.iterations, wall_ns=wall if cell.timing else 0,
               certified=rep.certified, ratio=rep.iterations / row["alg_bound"],
               status="ok" if rep.converged else "limit")
    return row


def sweep_cells(sizes, gammas, seeds, algorithms=ALGORITHMS, *,
                actions_per_state=(2, 3), max_iters=100_000, timing=True,
                random_start=False) -> list[Cell]:
    return [Cell(l, gamma, seed, alg, tuple(actions_per_state), max_iters, timing,
                 random_start)
            for l, gamma, seed, alg in itertools.product(sizes, gammas, seeds, algorithms)]


def run_sweep(cells, jobs: int = 1) -> list[dict]:
    """Rows in ``cells`` order whatever the completion order."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_cell, cells))
    return [run_cell(c) for c in cells]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        out = dict(row)
        for key in ("gamma", "bound", "alg_bound", "ratio"):
            out[key] = format(float(out[key]), ".17g")
        out["certified"] = "true" if out["certified"] else "false"
        writer.writerow(out)
    return buf.getvalue()
