"""Solver tests: pointwise examples, an independent brute-force oracle,
canonicalization and pruning soundness, and the bound sweeps at toy
scale (the full desk-scale sweeps live in the acceptance suite)."""

import random

import pytest

from redistricting_ghost.core import (
    Color,
    GameConfig,
    Move,
    NotTerminalError,
    Player,
    apply_move,
    legal_moves,
    new_game,
    outcome,
)
from redistricting_ghost.metrics import f_threshold
from redistricting_ghost.solver import (
    BudgetExceededError,
    FixedSolver,
    Solver,
    best_move,
    solve,
    solve_with_fixed,
)
from redistricting_ghost.strategies import StrategySpec, default_q

from conftest import random_playout


def brute_value(state, count_apples=False):
    """Plain minimax straight off the rules; the first mover maximizes
    brick districts (or apple districts with count_apples)."""
    memo = {}

    def terminal_value(s):
        m1 = s.config.m + 1
        if count_apples:
            return sum(1 for d in s.districts if d.apples >= m1)
        return sum(1 for d in s.districts if d.bricks >= m1)

    def val(s):
        if s.is_terminal:
            return terminal_value(s)
        key = s.districts
        if key in memo:
            return memo[key]
        values = [val(apply_move(s, mv)) for mv in legal_moves(s)]
        first_mover = s.to_move is Player.B
        result = max(values) if first_mover else min(values)
        memo[key] = result
        return result

    return val(state)


class TestSolveExamples:
    def test_even_split(self):
        assert solve(GameConfig(2, 1, 3)).value == 1

    def test_trivial_game(self):
        result = solve(GameConfig(1, 0, 1))
        assert result.value == 1
        assert result.principal_move == Move(0, Color.BRICK)

    def test_two_tiny_districts(self):
        assert solve(GameConfig(2, 0, 1)).value == 1

    def test_matches_brute_force(self):
        for j in (1, 2, 3):
            for m in (0, 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    assert solve(config).value == brute_value(new_game(config)), config

    def test_color_relabeling_identity(self):
        """Letting the first mover pursue apple districts instead is the
        same game with the pools relabeled."""
        for j in (1, 2):
            for m in (0, 1):
                v = j * (2 * m + 1)
                for n in range(0, v + 1):
                    flipped = brute_value(
                        new_game(GameConfig(j, m, n)), count_apples=True
                    )
                    assert flipped == solve(GameConfig(j, m, v - n)).value

    def test_first_mover_advantage_breaks_naive_antisymmetry(self):
        """value(n) + value(v-n) can fall short of j: with j=2, m=1 the
        second mover can burn the opener's supply on both sides."""
        assert solve(GameConfig(2, 1, 2)).value == 0
        assert solve(GameConfig(2, 1, 4)).value == 1


class TestSolveWithFixed:
    def test_ghost_fixed_keeps_guarantee(self):
        value = solve_with_fixed(
            GameConfig(2, 1, 4),
            Player.B,
            StrategySpec("ghost-minority", Player.B, target_q=1),
        ).value
        assert value >= 1

    def test_crack_fixed_denies_below_threshold(self):
        config = GameConfig(2, 1, 1)
        assert config.n < f_threshold(2, 1, 1)
        value = solve_with_fixed(
            config, Player.A, StrategySpec("crack-majority", Player.A)
        ).value
        assert value == 0

    def test_mirror_fixed_splits(self):
        value = solve_with_fixed(
            GameConfig(2, 1, 3), Player.A, StrategySpec("mirror", Player.A)
        ).value
        assert value == 1

    def test_mirror_fixed_splits_four_districts(self):
        # mirroring pins even the optimal opener to exactly half
        value = solve_with_fixed(
            GameConfig(4, 1, 6), Player.A, StrategySpec("mirror", Player.A)
        ).value
        assert value == 2

    def test_ghost_guarantee_beyond_acceptance_envelope(self):
        for n, q in [(4, 1), (8, 2), (12, 3)]:
            value = solve_with_fixed(
                GameConfig(5, 1, n),
                Player.B,
                StrategySpec("ghost-minority", Player.B, target_q=q),
            ).value
            assert value >= q

    def test_fixed_side_never_below_free_optimum(self):
        """Pinning one side can only help the free side."""
        for config in (GameConfig(2, 1, 3), GameConfig(3, 1, 4), GameConfig(2, 2, 5)):
            optimal = solve(config).value
            vs_fixed_a = solve_with_fixed(
                config, Player.A, StrategySpec("first-legal", Player.A)
            ).value
            vs_fixed_b = solve_with_fixed(
                config, Player.B, StrategySpec("first-legal", Player.B)
            ).value
            assert vs_fixed_a >= optimal
            assert vs_fixed_b <= optimal

    def test_nondeterministic_rejected(self):
        with pytest.raises(ValueError, match="deterministic"):
            solve_with_fixed(
                GameConfig(2, 1, 3),
                Player.A,
                StrategySpec("random", Player.A, seed=1),
            )


class TestBestMove:
    def test_only_winning_move(self):
        assert best_move(new_game(GameConfig(1, 0, 1))) == Move(0, Color.BRICK)

    def test_terminal_rejected(self):
        state = new_game(GameConfig(1, 0, 1))
        state = apply_move(state, Move(0, Color.BRICK))
        with pytest.raises(NotTerminalError):
            best_move(state)

    def test_achieves_the_value(self):
        config = GameConfig(2, 1, 3)
        state = new_game(config)
        solver = Solver(config)
        move = solver.best_move(state)
        assert solver.position_value(apply_move(state, move)) == solver.solve().value


class TestCanonicalization:
    def test_value_invariant_under_permutation(self):
        rng = random.Random(11)
        for _ in range(40):
            j = rng.randint(2, 4)
            m = rng.randint(0, 1)
            config = GameConfig(j, m, rng.randint(0, j * (2 * m + 1)))
            stop = rng.randint(0, config.v)
            state = random_playout(config, rng.randint(0, 999), stop_after=stop)[-1]
            if state.is_terminal:
                continue
            solver = Solver(config)
            base = solver.position_value(state)
            perm = list(range(j))
            rng.shuffle(perm)
            shuffled = state.__class__(
                config=config,
                districts=tuple(state.districts[i] for i in perm),
                bricks_remaining=state.bricks_remaining,
                apples_remaining=state.apples_remaining,
                move_count=state.move_count,
            )
            assert solver.position_value(shuffled) == base


class TestPruningAndBudget:
    def test_pruned_equals_unpruned(self):
        rng = random.Random(5)
        for _ in range(12):
            j = rng.randint(1, 3)
            m = rng.randint(0, 1)
            config = GameConfig(j, m, rng.randint(0, j * (2 * m + 1)))
            assert (
                Solver(config, prune=True).solve().value
                == Solver(config, prune=False).solve().value
            )

    def test_pruned_equals_unpruned_at_desk_scale(self):
        for n in (6, 10, 14):
            config = GameConfig(4, 2, n)
            assert (
                Solver(config, prune=True).solve().value
                == Solver(config, prune=False).solve().value
            )

    def test_node_budget_enforced(self):
        with pytest.raises(BudgetExceededError) as info:
            solve(GameConfig(4, 2, 10), node_limit=50)
        assert info.value.nodes > 50 - 1

    def test_table_budget_enforced(self):
        with pytest.raises(BudgetExceededError):
            solve(GameConfig(4, 2, 10), table_limit=10)

    def test_fixed_budget_enforced(self):
        with pytest.raises(BudgetExceededError):
            solve_with_fixed(
                GameConfig(4, 2, 12),
                Player.B,
                StrategySpec("ghost-minority", Player.B, target_q=2),
                node_limit=5,
            )


class TestToyBoundSweeps:
    """The j <= 3, m <= 1 slice; acceptance runs the full desk scale."""

    def test_even_split_values(self):
        for m in (0, 1):
            config = GameConfig(2, m, 2 * m + 1)
            assert solve(config).value == 1

    def test_guarantee_sweep(self):
        for j in (1, 2, 3):
            for m in (0, 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    value = solve(config).value
                    assert value >= default_q(config)

    def test_denial_sweep(self):
        for j in (1, 2, 3):
            for m in (0, 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    value = solve(config).value
                    for q in range(1, j + 1):
                        if n < f_threshold(j, m, q):
                            assert value < q

    def test_monotone_in_supply(self):
        for j in (1, 2, 3):
            for m in (0, 1):
                values = [
                    solve(GameConfig(j, m, n)).value
                    for n in range(0, j * (2 * m + 1) + 1)
                ]
                assert values == sorted(values)


class TestFixedSolverInternals:
    def test_principal_move_forced_side(self):
        result = solve_with_fixed(
            GameConfig(2, 1, 4),
            Player.B,
            StrategySpec("ghost-minority", Player.B, target_q=1),
        )
        # ghost opens with a brick into the first Q district
        assert result.principal_move == Move(0, Color.BRICK)

    def test_fixed_vs_simulated_consistency(self):
        """The solver's line against a fixed strategy is a real game: the
        value matches replaying optimal free moves through the rules."""
        config = GameConfig(3, 1, 5)
        spec = StrategySpec("ghost-minority", Player.B, target_q=1)
        solver = FixedSolver(config, Player.B, spec)
        value = solver.solve().value
        state = new_game(config)
        last = None
        while not state.is_terminal:
            if state.to_move is Player.B:
                move = solver.strategy.choose(state, last)
            else:
                move = solver.best_free_move(state, last, value)
            state = apply_move(state, move)
            last = move
        assert outcome(state).b_districts_won == value
