"""Line-oriented text format for games.

::

    tbsg 1
    states 2
    actions 3
    gamma 0.9
    owners 1 2
    action 0 state 0 reward 1.0 next 0:0.5 1:0.5
    action 1 state 0 reward 0.0 next 1:1
    action 2 state 1 reward -1 next 0:1

``#`` starts a comment. Floats are written with 17 significant digits so a
parse/serialize round trip is lossless.
"""

from __future__ import annotations

import numpy as np

from tbsg.game import Game

PARSE_ROW_TOL = 1e-9


class GameFormatError(ValueError):
    """Malformed game text; ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def _number(tok: str, kind, lineno: int, what: str):
    try:
        return kind(tok)
    except ValueError:
        raise GameFormatError(f"{what}: cannot parse {tok!r}", lineno) from None


def _header(lines, key: str, lineno_hint: int | None):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise GameFormatError(f"missing '{key}' line", lineno_hint) from None
    if toks[0] != key:
        raise GameFormatError(f"expected '{key}', found {toks[0]!r}", lineno)
    return lineno, toks[1:]


def parse_game(text: str, *, check_rows: bool = True) -> Game:
    """Parse game text.

    With ``check_rows=False`` the row-sum test is skipped so the caller can
    report it through :func:`tbsg.game.validate_game` instead.

    Raises:
        GameFormatError: on any syntax or consistency problem, naming the line.
    """
    lines = _tokens(text)
    lineno, rest = _header(lines, "tbsg", 1)
    if rest != ["1"]:
        raise GameFormatError(f"unsupported format version {' '.join(rest)!r}", lineno)

    lineno, rest = _header(lines, "states", lineno + 1)
    if len(rest) != 1:
        raise GameFormatError("'states' takes one integer", lineno)
    l = _number(rest[0], int, lineno, "states")
    if l < 1:
        raise GameFormatError("'states' must be positive", lineno)

    lineno, rest = _header(lines, "actions", lineno + 1)
    if len(rest) != 1:
        raise GameFormatError("'actions' takes one integer", lineno)
    m = _number(rest[0], int, lineno, "actions")
    if m < 1:
        raise GameFormatError("'actions' must be positive", lineno)

    lineno, rest = _header(lines, "gamma", lineno + 1)
    if len(rest) != 1:
        raise GameFormatError("'gamma' takes one float", lineno)
    gamma = _number(rest[0], float, lineno, "gamma")
    if not 0.0 < gamma < 1.0:
        raise GameFormatError(f"gamma {gamma!r} outside (0, 1)", lineno)

    lineno, rest = _header(lines, "owners", lineno + 1)
    if len(rest) != l:
        raise GameFormatError(f"'owners' needs {l} tags, got {len(rest)}", lineno)
    owner = []
    for tok in rest:
        if tok not in ("1", "2"):
            raise GameFormatError(f"owner tag {tok!r} is not 1 or 2", lineno)
        owner.append(int(tok))

    action_state = np.full(m, -1, dtype=np.int64)
    transition = np.zeros((m, l))
    reward = np.zeros(m)
    seen = set()
    for lineno, toks in lines:
        if toks[0] != "action":
            raise GameFormatError(f"unknown key {toks[0]!r}", lineno)
        if len(toks) < 8 or toks[2] != "state" or toks[4] != "reward" or toks[6] != "next":
            raise GameFormatError(
                "expected 'action <id> state <sid> reward <r> next <sid>:<p> ...'",
                lineno)
        a = _number(toks[1], int, lineno, "action id")
        if not 0 <= a < m:
            raise GameFormatError(f"action id {a} outside 0..{m - 1}", lineno)
        if a in seen:
            raise GameFormatError(f"duplicate action id {a}", lineno)
        seen.add(a)
        s = _number(toks[3], int, lineno, "state id")
        if not 0 <= s < l:
            raise GameFormatError(f"state id {s} outside 0..{l - 1}", lineno)
        action_state[a] = s
        reward[a] = _number(toks[5], float, lineno, "reward")
        for item in toks[7:]:
            target, sep, prob = item.partition(":")
            if not sep:
                raise GameFormatError(f"transition entry {item!r} lacks ':'", lineno)
            t = _number(target, int, lineno, "transition target")
            if not 0 <= t < l:
                raise GameFormatError(f"transition target {t} outside 0..{l - 1}", lineno)
            p = _number(prob, float, lineno, "probability")
            if p < 0.0:
                raise GameFormatError(f"negative probability {p!r}", lineno)
            transition[a, t] += p
        if check_rows and abs(transition[a].sum() - 1.0) > PARSE_ROW_TOL:
            raise GameFormatError(
                f"action {a}: probabilities sum to {fmt(transition[a].sum())}", lineno)
    if len(seen) != m:
        missing = sorted(set(range(m)) - seen)
        raise GameFormatError(f"missing action lines for ids {missing}")
    return Game(owner=owner, action_state=action_state, transition=transition,
                reward=reward, gamma=gamma)


def format_game(g: Game) -> str:
    out = [
        "tbsg 1",
        f"states {g.num_states}",
        f"actions {g.num_actions}",
        f"gamma {fmt(g.gamma)}",
        "owners " + " ".join(str(int(o)) for o in g.owner),
    ]
    for a in range(g.num_actions):
        row = g.transition[a]
        nxt = " ".join(f"{t}:{fmt(row[t])}" for t in np.flatnonzero(row))
        out.append(f"action {a} state {g.action_state[a]} "
                   f"reward {fmt(g.reward[a])} next {nxt}")
    return "\n".join(out) + "\n"


def read_game(path, *, check_rows: bool = True) -> Game:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read(), check_rows=check_rows)


def write_game(g: Game, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_game(g))
