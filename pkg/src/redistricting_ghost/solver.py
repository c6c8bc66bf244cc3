"""Exact game values by memoized minimax.

In the abstract game the districts are interchangeable and so are the
voters within a party, so positions are canonicalized to a sorted
multiset of (bricks, apples) pairs; for a fixed game instance that
multiset alone determines the pools, the move parity, and the side to
move, and two positions with the same multiset have the same value.
Children are generated per distinct district composition rather than per
index, which collapses the branching factor accordingly.

Pruning uses integer bounds derived from the position: B already owns the
districts holding m+1 bricks, and can at best add the districts whose
remaining room and the remaining brick supply still admit m+1 bricks.
The transposition table stores exact values and fail-high/fail-low bounds
(standard fail-soft alpha-beta); `prune=False` switches to a plain full
minimax, which the tests use to cross-check.

Fixed-strategy solving (one side plays a published strategy, the other is
solved exactly) memoizes on the raw district tuple instead: the published
strategies break ties by district index, so positions that only differ by
a relabeling are *not* interchangeable for them.

The table behaves as one logical map with idempotent entries, so
concurrent get-or-insert (and the duplicated subtree evaluation it can
cause) is harmless; this implementation is single-threaded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Color,
    GameConfig,
    GameError,
    GameState,
    Move,
    NotTerminalError,
    Player,
    apply_move,
    legal_moves,
    new_game,
    outcome,
)
from .strategies import Strategy, StrategySpec, build_strategy

DEFAULT_NODE_LIMIT = 10_000_000
DEFAULT_TABLE_LIMIT = 4_000_000

_EXACT, _LOWER, _UPPER = 0, -1, 1


class BudgetExceededError(GameError):
    code = "BUDGET_EXCEEDED"

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


@dataclass(frozen=True)
class GameValue:
    """Solved value: districts B wins under the solved play regime."""

    value: int
    principal_move: Move | None
    nodes_expanded: int
    table_size: int


def _static_bounds(
    districts: tuple[tuple[int, int], ...], m1: int, cap: int, bricks_remaining: int
) -> tuple[int, int]:
    """Sound [low, high] on B's final districts from any play onward."""
    won = 0
    deficits = []
    for b, a in districts:
        if b >= m1:
            won += 1
        else:
            need = m1 - b
            if need <= cap - b - a:
                deficits.append(need)
    deficits.sort()
    supply = bricks_remaining
    winnable = 0
    for need in deficits:
        if need > supply:
            break
        supply -= need
        winnable += 1
    return won, won + winnable


class Solver:
    """Optimal-vs-optimal search for one game instance, with a reusable
    transposition table across `solve`, `position_value`, and `best_move`
    calls."""

    def __init__(
        self,
        config: GameConfig,
        prune: bool = True,
        node_limit: int = DEFAULT_NODE_LIMIT,
        table_limit: int = DEFAULT_TABLE_LIMIT,
    ):
        config.validate()
        self.config = config
        self.prune = prune
        self.node_limit = node_limit
        self.table_limit = table_limit
        self.nodes_expanded = 0
        self._memo: dict[tuple, tuple[int, int]] = {}

    # -- public API ---------------------------------------------------

    def solve(self) -> GameValue:
        root = new_game(self.config)
        value = self.position_value(root)
        return GameValue(
            value=value,
            principal_move=self.best_move(root),
            nodes_expanded=self.nodes_expanded,
            table_size=len(self._memo),
        )

    def position_value(self, state: GameState) -> int:
        return self._search(self._canonical(state), -1, self.config.j + 1)

    def best_move(self, state: GameState) -> Move:
        """A move achieving the minimax value; lowest (district, color
        with brick first) among ties."""
        moves = legal_moves(state)
        if not moves:
            raise NotTerminalError("no move to pick: game is over")
        maximize = state.to_move is Player.B
        best_value = None
        best = None
        for move in moves:
            value = self.position_value(apply_move(state, move))
            if (
                best_value is None
                or (maximize and value > best_value)
                or (not maximize and value < best_value)
            ):
                best_value, best = value, move
        return best

    # -- internals ------------------------------------------------------

    def _canonical(self, state: GameState) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((d.bricks, d.apples) for d in state.districts))

    def _search(self, districts: tuple, alpha: int, beta: int) -> int:
        cfg = self.config
        m1 = cfg.m + 1
        placed = 0
        wins = 0
        bricks_placed = 0
        for b, a in districts:
            placed += b + a
            bricks_placed += b
            if b >= m1:
                wins += 1
        if placed == cfg.v:
            return wins

        entry = self._memo.get(districts)
        if entry is not None:
            value, flag = entry
            if flag == _EXACT:
                return value
            if flag == _LOWER:
                if value >= beta:
                    return value
                if value > alpha:
                    alpha = value
            else:
                if value <= alpha:
                    return value
                if value < beta:
                    beta = value

        self.nodes_expanded += 1
        if self.nodes_expanded > self.node_limit:
            raise BudgetExceededError(
                f"node limit {self.node_limit} exceeded", self.nodes_expanded
            )

        bricks_remaining = cfg.n - bricks_placed
        if self.prune:
            low, high = _static_bounds(districts, m1, cfg.capacity, bricks_remaining)
            if low == high:
                self._store(districts, low, _EXACT)
                return low
            if low >= beta:
                return low
            if high <= alpha:
                return high

        apples_remaining = (cfg.v - placed) - bricks_remaining
        b_to_move = placed % 2 == 0
        children = self._children(
            districts, bricks_remaining, apples_remaining, b_to_move
        )

        alpha0, beta0 = alpha, beta
        if b_to_move:
            best = -1
            for child in children:
                value = self._search(child, alpha, beta)
                if value > best:
                    best = value
                    if value > alpha:
                        alpha = value
                        if self.prune and alpha >= beta:
                            break
        else:
            best = cfg.j + 1
            for child in children:
                value = self._search(child, alpha, beta)
                if value < best:
                    best = value
                    if value < beta:
                        beta = value
                        if self.prune and beta <= alpha:
                            break

        if not self.prune or alpha0 < best < beta0:
            flag = _EXACT
        elif best <= alpha0:
            flag = _UPPER
        else:
            flag = _LOWER
        self._store(districts, best, flag)
        return best

    def _store(self, districts: tuple, value: int, flag: int) -> None:
        if len(self._memo) >= self.table_limit and districts not in self._memo:
            raise BudgetExceededError(
                f"table limit {self.table_limit} exceeded", self.nodes_expanded
            )
        self._memo[districts] = (value, flag)

    def _children(
        self,
        districts: tuple,
        bricks_remaining: int,
        apples_remaining: int,
        b_to_move: bool,
    ) -> list[tuple]:
        cfg = self.config
        cap = cfg.capacity
        out = []
        seen = set()
        for pos, comp in enumerate(districts):
            if comp in seen:
                continue
            seen.add(comp)
            b, a = comp
            if b + a >= cap:
                continue
            rest = districts[:pos] + districts[pos + 1 :]
            if bricks_remaining > 0:
                child = tuple(sorted(rest + ((b + 1, a),)))
                # B extends its strongest threat first; A cracks low first.
                key = (0, -b) if b_to_move else (1, b)
                out.append((key, child))
            if apples_remaining > 0:
                child = tuple(sorted(rest + ((b, a + 1),)))
                key = (1, b) if b_to_move else (0, -b)
                out.append((key, child))
        out.sort(key=lambda item: item[0])
        return [child for _, child in out]


class FixedSolver:
    """Optimal play for one side against a fixed deterministic strategy.

    Only the free side branches; the fixed side's replies are forced, so
    values are memoized at free-to-move positions keyed on the raw
    district tuple (the published strategies are index-sensitive, which
    rules out canonical sorting here). Pruning is local branch-and-bound
    on the static district bounds, so every stored value is exact.
    """

    def __init__(
        self,
        config: GameConfig,
        fixed_side: Player,
        spec: StrategySpec,
        node_limit: int = DEFAULT_NODE_LIMIT,
        table_limit: int = DEFAULT_TABLE_LIMIT,
    ):
        config.validate()
        spec = StrategySpec(
            kind=spec.kind, side=fixed_side, target_q=spec.target_q, seed=spec.seed
        )
        strategy = build_strategy(spec, config)
        if not strategy.deterministic:
            raise ValueError(
                f"fixed strategy must be deterministic; {spec.kind!r} is not"
            )
        self.config = config
        self.fixed_side = fixed_side
        self.free_side = fixed_side.opponent
        self.strategy: Strategy = strategy
        self.node_limit = node_limit
        self.table_limit = table_limit
        self.nodes_expanded = 0
        self._memo: dict[tuple, int] = {}

    def solve(self) -> GameValue:
        root = new_game(self.config)
        value = self._value(root, None)
        if root.to_move is self.fixed_side:
            principal = self.strategy.choose(root, None)
        else:
            principal = self.best_free_move(root, None, value)
        return GameValue(
            value=value,
            principal_move=principal,
            nodes_expanded=self.nodes_expanded,
            table_size=len(self._memo),
        )

    def _advance_forced(
        self, state: GameState, last_move: Move | None
    ) -> tuple[GameState, Move | None]:
        while not state.is_terminal and state.to_move is self.fixed_side:
            move = self.strategy.choose(state, last_move)
            state = apply_move(state, move)
            last_move = move
        return state, last_move

    def _bounds(self, state: GameState) -> tuple[int, int]:
        return _static_bounds(
            tuple((d.bricks, d.apples) for d in state.districts),
            state.config.m + 1,
            state.config.capacity,
            state.bricks_remaining,
        )

    def _value(self, state: GameState, last_move: Move | None) -> int:
        state, last_move = self._advance_forced(state, last_move)
        if state.is_terminal:
            return outcome(state).b_districts_won

        key = tuple((d.bricks, d.apples) for d in state.districts)
        hit = self._memo.get(key)
        if hit is not None:
            return hit

        self.nodes_expanded += 1
        if self.nodes_expanded > self.node_limit:
            raise BudgetExceededError(
                f"node limit {self.node_limit} exceeded", self.nodes_expanded
            )

        low, high = self._bounds(state)
        maximize = self.free_side is Player.B
        best = None
        for move in self._ordered_moves(state):
            child = apply_move(state, move)
            if best is not None:
                c_low, c_high = self._bounds(child)
                if maximize and c_high <= best:
                    continue
                if not maximize and c_low >= best:
                    continue
            value = self._value(child, move)
            if best is None or (maximize and value > best) or (
                not maximize and value < best
            ):
                best = value
            if best == (high if maximize else low):
                break

        if len(self._memo) >= self.table_limit:
            raise BudgetExceededError(
                f"table limit {self.table_limit} exceeded", self.nodes_expanded
            )
        self._memo[key] = best
        return best

    def best_free_move(
        self, state: GameState, last_move: Move | None, target: int
    ) -> Move:
        """First move in (district, brick-first) order achieving `target`."""
        for move in legal_moves(state):
            if self._value(apply_move(state, move), move) == target:
                return move
        raise GameError("no move achieves the solved value (internal error)")

    def _ordered_moves(self, state: GameState) -> list[Move]:
        moves = legal_moves(state)
        if self.free_side is Player.B:
            moves.sort(
                key=lambda mv: (
                    mv.color is not Color.BRICK,
                    -state.districts[mv.district].bricks,
                    mv.district,
                )
            )
        else:
            moves.sort(
                key=lambda mv: (
                    mv.color is not Color.APPLE,
                    -state.districts[mv.district].bricks,
                    mv.district,
                )
            )
        return moves


def solve(
    config: GameConfig,
    prune: bool = True,
    node_limit: int = DEFAULT_NODE_LIMIT,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> GameValue:
    """Exact optimal-vs-optimal value: B maximizes final districts, A
    minimizes."""
    return Solver(
        config, prune=prune, node_limit=node_limit, table_limit=table_limit
    ).solve()


def solve_with_fixed(
    config: GameConfig,
    fixed_side: Player,
    spec: StrategySpec,
    node_limit: int = DEFAULT_NODE_LIMIT,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> GameValue:
    """Exact value with `fixed_side` pinned to a deterministic strategy and
    the other side solved; rejects non-deterministic strategies."""
    return FixedSolver(
        config, fixed_side, spec, node_limit=node_limit, table_limit=table_limit
    ).solve()


def best_move(
    state: GameState,
    node_limit: int = DEFAULT_NODE_LIMIT,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> Move:
    """A move from `state` achieving the optimal-vs-optimal value."""
    return Solver(
        state.config, node_limit=node_limit, table_limit=table_limit
    ).best_move(state)
