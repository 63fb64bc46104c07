"""Self-check suite run by ``tbsg verify`` on a single small game."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tbsg.algorithms import ALGORITHMS, solve
from tbsg.game import Game, Player, flux_of, modified_reward, validate_game, value_of
from tbsg.mdp import best_response, is_equilibrium
from tbsg.monitor import contraction_monitor
from tbsg.oracle import brute_force_equilibrium
from tbsg.transform import pull_back_strategy, structure_violations, to_binary

CHECKS = ("validate", "flux", "signs", "oracle", "contraction", "transform")
IDENTITY_TOL = 1e-8
VALUE_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def flux_defects(g: Game, pi, pi_prime) -> dict[str, float]:
    """Defects of the four flux/value identities for one pair of strategies.

    Each entry is a relative error, except ``flux_range`` which is how far the
    on-strategy flux strays outside ``[1, l/(1-gamma)]`` (0 when inside).
    """
    horizon = g.num_states / (1.0 - g.gamma)
    scale = 1.0 + horizon * np.abs(g.reward).max()
    x, v = flux_of(g, pi), value_of(g, pi)
    x2, v2 = flux_of(g, pi_prime), value_of(g, pi_prime)
    on = x[pi]
    rc = modified_reward(g, pi, v)
    return {
        "flux_sum": float(abs(x.sum() - horizon) / horizon),
        "flux_range": float(max(0.0, 1.0 - on.min(), on.max() - horizon)),
        "value_flux": float(abs(v.sum() - x @ g.reward) / scale),
        "difference": float(abs((v2 - v).sum() - x2 @ rc) / scale),
    }


def _check_flux(g, rng, samples=50):
    worst = dict.fromkeys(("flux_sum", "flux_range", "value_flux", "difference"), 0.0)
    for _ in range(samples):
        d = flux_defects(g, g.random_strategy(rng), g.random_strategy(rng))
        for k in worst:
            worst[k] = max(worst[k], d[k])
    ok = max(worst.values()) <= IDENTITY_TOL
    return ok, " ".join(f"{k}={v:.2g}" for k, v in worst.items())


def _check_signs(g, rng, eps):
    tol = g.tolerance(eps)
    for _ in range(10):
        start = g.random_strategy(rng)
        for player in Player:
            res = best_response(g, start, player, warm_start=start, eps=eps)
            rc = modified_reward(g, res.strategy, res.value)
            mask = g.action_mask(player)
            if not mask.any():
                continue
            worst = rc[mask].max() if player == Player.ONE else -rc[mask].min()
            if worst > tol:
                return False, f"best response for player {int(player)} leaves rc {worst:.3g}"
    for alg in ALGORITHMS:
        rep = solve(g, alg, eps=eps)
        check = is_equilibrium(g, rep.equilibrium, eps=eps)
        if not check:
            return False, f"{alg}: action {check.action} has rc {check.reduced_cost:.3g}"
    return True, "best responses and all solver outputs satisfy the sign conditions"


def _check_oracle(g, truth, eps):
    worst = 0.0
    for alg in ALGORITHMS:
        rep = solve(g, alg, eps=eps)
        worst = max(worst, float(np.abs(rep.value - truth.value).max()))
    return worst <= VALUE_TOL, f"max |v - v_oracle| = {worst:.2g}"


def _check_contraction(g, truth, eps):
    notes = []
    for alg in ALGORITHMS:
        res = contraction_monitor(g, solve(g, alg, eps=eps), truth.value, eps=eps)
        notes.extend(f"{alg}: {msg}" for msg in res.violations)
    return not notes, "; ".join(notes[:3]) or "monotone, contracting, geometric properties hold"


def _check_transform(g, truth, eps):
    tg = to_binary(g)
    problems = structure_violations(tg)
    rep = solve(tg.game, "simplex", eps=eps)
    if tg.is_dummy[rep.equilibrium].any():
        problems.append("equilibrium uses a dummy action")
    err = float(np.abs(rep.value[:g.num_states] - tg.scale_c * truth.value).max())
    if err > VALUE_TOL:
        problems.append(f"root values off the scaled original values by {err:.2g}")
    if not is_equilibrium(g, pull_back_strategy(tg, rep.equilibrium), eps=eps):
        problems.append("pulled-back strategy is not an equilibrium")
    detail = "; ".join(problems) or (
        f"{tg.game.num_states} states, p={tg.p}, scaled-value error {err:.2g}")
    return not problems, detail


def run_checks(g: Game, checks=CHECKS, *, seed: int = 0,
               eps: float | None = None) -> list[CheckResult]:
    """Run the named checks; later checks are skipped if the game is malformed.

    Exceptions raised inside a check (for example an oversized instance or an
    unsupported transformation) are reported as that check's failure.
    """
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}")
    results = []
    problems = validate_game(g)
    if "validate" in checks or problems:
        results.append(CheckResult("validate", not problems,
                                   "; ".join(problems) or "game is well formed"))
    if problems:
        return results

    rng = np.random.default_rng(seed)
    truth = None
    for name in CHECKS[1:]:
        if name not in checks:
            continue
        try:
            if name in ("oracle", "contraction", "transform") and truth is None:
                truth = brute_force_equilibrium(g)
            if name == "flux":
                ok, detail = _check_flux(g, rng)
            elif name == "signs":
                ok, detail = _check_signs(g, rng, eps)
            elif name == "oracle":
                ok, detail = _check_oracle(g, truth, eps)
            elif name == "contraction":
                ok, detail = _check_contraction(g, truth, eps)
            else:
                ok, detail = _check_transform(g, truth, eps)
        except ValueError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail))
    return results
