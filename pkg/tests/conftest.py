"""Shared helpers: direct state construction, exhaustive state
enumeration for small instances, and seeded playouts."""

from __future__ import annotations

import random
from itertools import product

import pytest

from redistricting_ghost.core import (
    DistrictState,
    GameConfig,
    GameState,
    apply_move,
    legal_moves,
    new_game,
)


def make_state(j: int, m: int, n: int, districts) -> GameState:
    """Build a consistent GameState from (bricks, apples) pairs."""
    config = GameConfig(j=j, m=m, n=n)
    config.validate()
    ds = tuple(DistrictState(b, a) for b, a in districts)
    bricks_placed = sum(d.bricks for d in ds)
    apples_placed = sum(d.apples for d in ds)
    assert bricks_placed <= n and apples_placed <= config.apple_total
    assert all(d.total <= config.capacity for d in ds)
    return GameState(
        config=config,
        districts=ds,
        bricks_remaining=n - bricks_placed,
        apples_remaining=config.apple_total - apples_placed,
        move_count=bricks_placed + apples_placed,
    )


def enumerate_states(config: GameConfig):
    """Every reachable state of an instance.

    Both players may place both colors, so any composition respecting the
    capacities and pools is reachable by some legal order.
    """
    cap = config.capacity
    compositions = [
        (b, a) for b in range(cap + 1) for a in range(cap + 1 - b)
    ]
    for combo in product(compositions, repeat=config.j):
        bricks = sum(b for b, _ in combo)
        apples = sum(a for _, a in combo)
        if bricks <= config.n and apples <= config.apple_total:
            yield make_state(config.j, config.m, config.n, combo)


def random_playout(config: GameConfig, seed: int, stop_after: int | None = None):
    """States along one uniformly random game, including the start."""
    rng = random.Random(seed)
    state = new_game(config)
    states = [state]
    while not state.is_terminal:
        if stop_after is not None and state.move_count >= stop_after:
            break
        moves = legal_moves(state)
        state = apply_move(state, moves[rng.randrange(len(moves))])
        states.append(state)
    return states


@pytest.fixture
def fig_config() -> GameConfig:
    """The j=4, m=5, n=19 showcase instance."""
    return GameConfig(j=4, m=5, n=19)
