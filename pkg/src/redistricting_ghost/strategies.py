"""Player strategies.

Kinds (these names are also the CLI flags and service JSON values):

  ghost-minority   B picks a target q and raises the score every turn:
                   repair a tied district in the maximizing Q (type a),
                   else open a new district in Q (type b), else deepen a
                   Q district short of m+1 bricks (type c). Guarantees q
                   districts whenever n >= 2q(m+1).
  crack-majority   A spreads bricks as thin as possible, filling columns,
                   with a repair move that keeps the first c columns free
                   of apples. Denies q districts whenever the supply is
                   below the per-column requirement q(m+1) + (j-q)c.
  mirror           second mover pairs up districts and answers every move
                   with the opposite color in the paired district; only
                   sound for even j with an evenly split pool.
  random           uniform over legal moves, from a seeded stream.
  first-legal      lowest-numbered legal move (baseline).

All index ties anywhere resolve to the lowest district index, which keeps
every strategy here (except random) a deterministic function of the
state, so replays and fixed-strategy solving are reproducible.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .core import Color, GameError, GameState, Move, Player, legal_moves
from .metrics import column_bound, f_threshold
from .scoring import select_q


class StrategyError(GameError):
    code = "INVALID_STRATEGY"


GHOST_MINORITY = "ghost-minority"
CRACK_MAJORITY = "crack-majority"
MIRROR = "mirror"
RANDOM = "random"
FIRST_LEGAL = "first-legal"

KINDS = (GHOST_MINORITY, CRACK_MAJORITY, MIRROR, RANDOM, FIRST_LEGAL)


def default_q(config) -> int:
    """Largest q with n >= 2q(m+1): the biggest target the score argument
    can guarantee. 0 when even one district cannot be forced."""
    return min(config.j, config.n // (2 * (config.m + 1)))


def _lowest_open(state: GameState) -> int:
    for i in range(state.config.j):
        if state.district_open(i):
            return i
    raise StrategyError("no open district: game is over")


def ghost_minority_move(state: GameState, q: int) -> Move:
    """One move of the minority strategy toward target q.

    Once no bricks remain the apples are placed in a fixed but irrelevant
    order. Once the score is pinned at q(m+1) (or when q is 0, or no
    eligible q-subset exists) surplus bricks chase an extra district
    greedily: stack the open district closest to m+1 bricks.
    """
    if state.to_move is not Player.B:
        raise StrategyError("ghost-minority plays B, but it is A's turn")
    if state.bricks_remaining == 0:
        return Move(_lowest_open(state), Color.APPLE)

    m = state.config.m
    witness = select_q(state, q) if q >= 1 else None
    if witness is not None:
        chosen = [(i, state.districts[i]) for i in witness]
        tied = [i for i, d in chosen if d.is_tied and not d.is_empty]
        if tied:  # type a
            return Move(tied[0], Color.BRICK)
        empty = [i for i, d in chosen if d.is_empty]
        if empty:  # type b
            return Move(empty[0], Color.BRICK)
        # Strictly below m+1: a brick must raise the score, and a district
        # at m+1 bricks is already score-capped.
        below = [i for i, d in chosen if d.bricks < m + 1]
        if below:  # type c
            return Move(below[0], Color.BRICK)

    # Surplus: target secured (or unreachable); stack the leader.
    candidates = [
        i
        for i in state.open_districts()
        if state.districts[i].bricks < m + 1
    ]
    if candidates:
        best = max(candidates, key=lambda i: (state.districts[i].bricks, -i))
        return Move(best, Color.BRICK)
    return Move(_lowest_open(state), Color.BRICK)


def crack_parameters(config, selection: str = "smallest") -> tuple[int, int]:
    """(q, c) for the cracking majority: the smallest q it can still deny
    (n < f(q)), capped at j when the supply beats every threshold, and the
    column count c for that q.

    `selection="largest"` keeps the alternative reading (largest
    qualifying q) around for comparison; f is increasing, so it picks
    q = j whenever any q qualifies, which is why "smallest" is the
    default.
    """
    candidates = [
        q
        for q in range(1, config.j + 1)
        if config.n < f_threshold(config.j, config.m, q)
    ]
    if selection == "smallest":
        q = candidates[0] if candidates else config.j
    elif selection == "largest":
        q = candidates[-1] if candidates else config.j
    else:
        raise ValueError(f"selection must be smallest or largest, got {selection!r}")
    return q, column_bound(config.j, config.m, q)


def crack_type_a_district(state: GameState, c: int) -> int | None:
    """The open district with open spaces < 2(c - bricks), if any.

    While the majority has bricks to answer with, at most one district can
    satisfy this at a time.
    """
    for i in state.open_districts():
        if state.open_spaces(i) < 2 * (c - state.districts[i].bricks):
            return i
    return None


def crack_majority_move(state: GameState) -> Move:
    """One move of the cracking majority."""
    if state.to_move is not Player.A:
        raise StrategyError("crack-majority plays A, but it is B's turn")
    if state.bricks_remaining == 0:
        return Move(_lowest_open(state), Color.APPLE)
    _, c = crack_parameters(state.config)
    repair = crack_type_a_district(state, c)
    if repair is not None:  # type a
        return Move(repair, Color.BRICK)
    # type b: least-bricked open district, lowest index among ties
    target = min(
        state.open_districts(), key=lambda i: (state.districts[i].bricks, i)
    )
    return Move(target, Color.BRICK)


def default_pairing(j: int) -> tuple[int, ...]:
    """The i <-> i + j/2 pairing."""
    if j % 2 != 0:
        raise StrategyError(f"mirroring requires an even district count, got j={j}")
    half = j // 2
    return tuple((i + half) % j for i in range(j))


def _validate_pairing(pairing: tuple[int, ...], j: int) -> None:
    if len(pairing) != j or sorted(pairing) != list(range(j)):
        raise StrategyError("pairing must be a permutation of the districts")
    for i, partner in enumerate(pairing):
        if partner == i or pairing[partner] != i:
            raise StrategyError("pairing must be a fixed-point-free involution")


def mirror_move(
    state: GameState, pairing: tuple[int, ...], last_opponent_move: Move
) -> Move:
    """Opposite color into the district paired with the opponent's last
    target. Legal by induction when j is even and the pools are split
    evenly (n = v/2)."""
    if state.config.j % 2 != 0:
        raise StrategyError(
            f"mirroring requires an even district count, got j={state.config.j}"
        )
    if state.config.n * 2 != state.config.v:
        raise StrategyError(
            f"mirroring requires an evenly split pool, got n={state.config.n} of v={state.config.v}"
        )
    _validate_pairing(pairing, state.config.j)
    if last_opponent_move is None:
        raise StrategyError("mirroring is a second-mover strategy; there is no move to answer")
    return Move(pairing[last_opponent_move.district], last_opponent_move.color.opposite)


def random_move(state: GameState, rng: _random.Random) -> Move:
    """Uniform over legal moves, consuming the stream deterministically."""
    moves = legal_moves(state)
    if not moves:
        raise StrategyError("no legal moves: game is over")
    return moves[rng.randrange(len(moves))]


def first_legal_move(state: GameState) -> Move:
    moves = legal_moves(state)
    if not moves:
        raise StrategyError("no legal moves: game is over")
    return moves[0]


@dataclass(frozen=True)
class StrategySpec:
    """Which strategy plays one side, plus its parameters."""

    kind: str
    side: Player
    target_q: int | None = None  # ghost-minority only
    seed: int | None = None      # random only

    def spec_string(self) -> str:
        """Canonical string form, e.g. "ghost-minority:q=2" or "random:seed=7"."""
        if self.kind == GHOST_MINORITY and self.target_q is not None:
            return f"{self.kind}:q={self.target_q}"
        if self.kind == RANDOM:
            return f"{self.kind}:seed={self.seed}"
        return self.kind


def parse_spec_string(text: str, side: Player) -> StrategySpec:
    """Parse "kind" or "kind:key=value,..." into a StrategySpec."""
    kind, _, params = text.partition(":")
    kind = kind.strip()
    target_q = None
    seed = None
    if params:
        for item in params.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            try:
                number = int(value)
            except ValueError:
                raise StrategyError(f"bad strategy parameter {item!r} in {text!r}")
            if key == "q":
                target_q = number
            elif key == "seed":
                seed = number
            else:
                raise StrategyError(f"unknown strategy parameter {key!r} in {text!r}")
    return StrategySpec(kind=kind, side=side, target_q=target_q, seed=seed)


class Strategy:
    """A built strategy: a move chooser bound to one side of one game."""

    kind: str
    deterministic = True
    needs_last_move = False

    def __init__(self, spec: StrategySpec):
        self.spec = spec
        self.kind = spec.kind

    def choose(self, state: GameState, last_move: Move | None = None) -> Move:
        raise NotImplementedError


class GhostMinorityStrategy(Strategy):
    def __init__(self, spec: StrategySpec, q: int):
        super().__init__(spec)
        self.q = q

    def choose(self, state, last_move=None):
        return ghost_minority_move(state, self.q)


class CrackMajorityStrategy(Strategy):
    def choose(self, state, last_move=None):
        return crack_majority_move(state)


class MirrorStrategy(Strategy):
    needs_last_move = True

    def __init__(self, spec: StrategySpec, pairing: tuple[int, ...]):
        super().__init__(spec)
        self.pairing = pairing

    def choose(self, state, last_move=None):
        return mirror_move(state, self.pairing, last_move)


class RandomStrategy(Strategy):
    deterministic = False

    def __init__(self, spec: StrategySpec):
        super().__init__(spec)
        self.rng = _random.Random(spec.seed)

    def choose(self, state, last_move=None):
        return random_move(state, self.rng)


class FirstLegalStrategy(Strategy):
    def choose(self, state, last_move=None):
        return first_legal_move(state)


def build_strategy(spec: StrategySpec, config) -> Strategy:
    """Validate a spec against a game instance and build the chooser."""
    config.validate()
    if spec.kind == GHOST_MINORITY:
        if spec.side is not Player.B:
            raise StrategyError("ghost-minority is a strategy for B")
        q = spec.target_q if spec.target_q is not None else default_q(config)
        if not 0 <= q <= config.j:
            raise StrategyError(f"target q must be in [0, {config.j}], got {q}")
        return GhostMinorityStrategy(spec, q)
    if spec.kind == CRACK_MAJORITY:
        if spec.side is not Player.A:
            raise StrategyError("crack-majority is a strategy for A")
        return CrackMajorityStrategy(spec)
    if spec.kind == MIRROR:
        if spec.side is not Player.A:
            raise StrategyError(
                "mirror is a second-mover strategy; B moves first, so only A can mirror"
            )
        if config.j % 2 != 0:
            raise StrategyError(
                f"mirroring requires an even district count, got j={config.j}"
            )
        if config.n * 2 != config.v:
            raise StrategyError(
                f"mirroring requires an evenly split pool, got n={config.n} of v={config.v}"
            )
        return MirrorStrategy(spec, default_pairing(config.j))
    if spec.kind == RANDOM:
        if spec.seed is None:
            raise StrategyError("random strategy requires a seed")
        return RandomStrategy(spec)
    if spec.kind == FIRST_LEGAL:
        return FirstLegalStrategy(spec)
    raise StrategyError(f"unknown strategy kind {spec.kind!r}; known: {', '.join(KINDS)}")


@dataclass
class RoundLedger:
    """Brick accounting against a fixed reference target q.

    b: B's score-increasing moves. h: A's score-increasing brick moves
    ("helping"). w: brick moves, by either side, that did not increase the
    score. Score-increasing moves necessarily play a brick, so
    b + h + w always equals the bricks placed so far.
    """

    b: int = 0
    h: int = 0
    w: int = 0

    def record(self, mover: Player, move: Move, score_increased: bool) -> None:
        if move.color is not Color.BRICK:
            return
        if score_increased:
            if mover is Player.B:
                self.b += 1
            else:
                self.h += 1
        else:
            self.w += 1
