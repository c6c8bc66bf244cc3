"""Rules of Redistricting Ghost.

Two players, A and B, take turns placing voters into districts, with B
moving first. Every voter is either a brick (a B supporter) or an apple
(an A supporter), and on each turn a player may place *either* color into
any district that still has room, as long as that color's pool is not
exhausted. A district of capacity 2m+1 is won by B iff it ends up with at
least m+1 bricks; capacities are odd, so finished districts are never
tied.

States are immutable values: every transition builds a new state, so
states can be shared between threads, memoized, and kept around for
replay or undo without copying.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Player(str, Enum):
    """The two parties. B (bricks) is conventionally the minority."""

    A = "A"
    B = "B"

    @property
    def opponent(self) -> "Player":
        return Player.A if self is Player.B else Player.B


class Color(str, Enum):
    BRICK = "brick"
    APPLE = "apple"

    @property
    def opposite(self) -> "Color":
        return Color.APPLE if self is Color.BRICK else Color.BRICK


class GameError(Exception):
    """Base class for rule and usage violations."""

    code = "GAME_ERROR"


class ConfigError(GameError):
    code = "INVALID_CONFIG"


class MoveError(GameError):
    code = "ILLEGAL_MOVE"


class NoSuchDistrictError(MoveError):
    code = "BAD_DISTRICT"


class DistrictFullError(MoveError):
    code = "DISTRICT_FULL"


class PoolExhaustedError(MoveError):
    code = "POOL_EXHAUSTED"


class NotTerminalError(GameError):
    code = "NOT_TERMINAL"


@dataclass(frozen=True)
class GameConfig:
    """One game instance: j districts of capacity 2m+1 and n bricks total."""

    j: int
    m: int
    n: int

    @property
    def capacity(self) -> int:
        return 2 * self.m + 1

    @property
    def v(self) -> int:
        """Total number of voters (= number of moves in a full game)."""
        return self.j * self.capacity

    @property
    def apple_total(self) -> int:
        return self.v - self.n

    @property
    def b_is_minority(self) -> bool:
        return self.n < self.apple_total

    def validate(self) -> None:
        if self.j < 1:
            raise ConfigError(f"district count j must be >= 1, got {self.j}")
        if self.m < 0:
            raise ConfigError(f"size parameter m must be >= 0, got {self.m}")
        if not 0 <= self.n <= self.v:
            raise ConfigError(
                f"brick count n must be in [0, {self.v}] for j={self.j}, m={self.m}; got {self.n}"
            )


@dataclass(frozen=True)
class DistrictState:
    """Voters placed so far in one district."""

    bricks: int = 0
    apples: int = 0

    @property
    def total(self) -> int:
        return self.bricks + self.apples

    @property
    def is_empty(self) -> bool:
        return self.total == 0

    @property
    def is_tied(self) -> bool:
        return self.bricks == self.apples

    @property
    def leader(self) -> Player | None:
        """Party currently ahead, or None when tied."""
        if self.bricks > self.apples:
            return Player.B
        if self.apples > self.bricks:
            return Player.A
        return None


@dataclass(frozen=True)
class Move:
    """Placement of one voter of `color` into district `district`."""

    district: int
    color: Color

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.district, 0 if self.color is Color.BRICK else 1)


@dataclass(frozen=True)
class Outcome:
    """Final district split. Only defined on terminal states."""

    b_districts_won: int
    a_districts_won: int


@dataclass(frozen=True)
class GameState:
    """A position: per-district counts, remaining pools, and move count.

    The side to move is determined by parity (B moves first), and the
    state is terminal exactly when all v voters have been placed.
    """

    config: GameConfig
    districts: tuple[DistrictState, ...]
    bricks_remaining: int
    apples_remaining: int
    move_count: int

    @property
    def to_move(self) -> Player:
        return Player.B if self.move_count % 2 == 0 else Player.A

    @property
    def is_terminal(self) -> bool:
        return self.move_count == self.config.v

    def pool(self, color: Color) -> int:
        return self.bricks_remaining if color is Color.BRICK else self.apples_remaining

    def district_open(self, index: int) -> bool:
        return self.districts[index].total < self.config.capacity

    def open_spaces(self, index: int) -> int:
        return self.config.capacity - self.districts[index].total

    def open_districts(self) -> list[int]:
        return [i for i in range(self.config.j) if self.district_open(i)]


def new_game(config: GameConfig) -> GameState:
    """Fresh game: all districts empty, full pools, B to move."""
    config.validate()
    return GameState(
        config=config,
        districts=tuple(DistrictState() for _ in range(config.j)),
        bricks_remaining=config.n,
        apples_remaining=config.apple_total,
        move_count=0,
    )


def legal_moves(state: GameState) -> list[Move]:
    """All legal placements: open districts x colors with a non-empty pool.

    Ordered by (district, brick-before-apple); empty on terminal states.
    """
    if state.is_terminal:
        return []
    colors = [c for c in (Color.BRICK, Color.APPLE) if state.pool(c) > 0]
    return [
        Move(i, c)
        for i in range(state.config.j)
        if state.district_open(i)
        for c in colors
    ]


def apply_move(state: GameState, move: Move) -> GameState:
    """Pure transition: returns the successor state, original untouched."""
    if not 0 <= move.district < state.config.j:
        raise NoSuchDistrictError(
            f"district {move.district} out of range [0, {state.config.j})"
        )
    if not state.district_open(move.district):
        raise DistrictFullError(f"district {move.district} is full")
    if state.pool(move.color) <= 0:
        raise PoolExhaustedError(f"no {move.color.value}s remain to be placed")

    d = state.districts[move.district]
    if move.color is Color.BRICK:
        d = DistrictState(d.bricks + 1, d.apples)
        bricks, apples = state.bricks_remaining - 1, state.apples_remaining
    else:
        d = DistrictState(d.bricks, d.apples + 1)
        bricks, apples = state.bricks_remaining, state.apples_remaining - 1
    districts = (
        state.districts[: move.district] + (d,) + state.districts[move.district + 1 :]
    )
    return GameState(
        config=state.config,
        districts=districts,
        bricks_remaining=bricks,
        apples_remaining=apples,
        move_count=state.move_count + 1,
    )


def b_wins_district(district: DistrictState, m: int) -> bool:
    return district.bricks >= m + 1


def outcome(state: GameState) -> Outcome:
    """District split on a finished game."""
    if not state.is_terminal:
        raise NotTerminalError(
            f"outcome undefined before move {state.config.v}; at move {state.move_count}"
        )
    q = sum(1 for d in state.districts if b_wins_district(d, state.config.m))
    return Outcome(b_districts_won=q, a_districts_won=state.config.j - q)
