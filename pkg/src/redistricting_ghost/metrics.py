"""Fairness measures and bound formulas.

Proportional representation p, the packed map that achieves it, wasted
votes and the efficiency gap, the headline brick threshold f(q) for
denying the minority q districts, the 2q(m+1) supply that guarantees q,
and the column count c the cracking majority can always fill. f(q) is
loose by additive constants at very small m; the sharp requirement is
the per-column count q(m+1) + (j-q)c(q).

All fractional quantities are kept as exact rationals; flooring happens
only where a formula floors (c). Note that jn/v = n/(2m+1) has an odd
denominator, so the proportional share can never land on a half-integer
and the choice of round-half convention is unobservable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DistrictState,
    GameConfig,
    GameState,
    NotTerminalError,
    b_wins_district,
)


def proportional_p(config: GameConfig) -> int:
    """round(jn/v) with round-half-up; the minority's proportional seats."""
    # floor(x + 1/2) in integers: (2jn + v) // (2v)
    return (2 * config.j * config.n + config.v) // (2 * config.v)


def p_range(p: int, config: GameConfig) -> tuple[int, int]:
    """Closed interval of brick counts n whose proportional share is p,
    clamped to the valid pool range [0, v]."""
    low = p + (2 * p - 1) * config.m
    high = p + (2 * p + 1) * config.m
    return (max(low, 0), min(high, config.v))


def packed_map(config: GameConfig) -> GameState:
    """Deterministic terminal allocation achieving proportionality: fill
    whole districts with bricks, then at most one mixed district, then
    whole districts with apples."""
    config.validate()
    cap = config.capacity
    full, rest = divmod(config.n, cap)
    districts = [DistrictState(bricks=cap) for _ in range(full)]
    if rest:
        districts.append(DistrictState(bricks=rest, apples=cap - rest))
    districts.extend(
        DistrictState(apples=cap) for _ in range(config.j - len(districts))
    )
    return GameState(
        config=config,
        districts=tuple(districts),
        bricks_remaining=0,
        apples_remaining=0,
        move_count=config.v,
    )


def wasted_votes(state: GameState) -> tuple[int, int]:
    """(wasted_A, wasted_B) on a finished game.

    In each district the winner needed only m+1 voters, so it wastes
    everything beyond that, and the loser wastes everything. Per district
    exactly m votes are wasted, hence wasted_A + wasted_B = v*m/(2m+1).
    """
    if not state.is_terminal:
        raise NotTerminalError("wasted votes are defined on finished games only")
    m = state.config.m
    wasted_a = wasted_b = 0
    for d in state.districts:
        if b_wins_district(d, m):
            wasted_b += d.bricks - (m + 1)
            wasted_a += d.apples
        else:
            wasted_a += d.apples - (m + 1)
            wasted_b += d.bricks
    return wasted_a, wasted_b


def useful_votes(state: GameState) -> tuple[int, int]:
    """(useful_A, useful_B): m+1 per district won."""
    if not state.is_terminal:
        raise NotTerminalError("useful votes are defined on finished games only")
    m = state.config.m
    q = sum(1 for d in state.districts if b_wins_district(d, m))
    return (state.config.j - q) * (m + 1), q * (m + 1)


def efficiency_gap(state: GameState) -> Fraction:
    """|wasted_A - wasted_B| / v, exact."""
    wasted_a, wasted_b = wasted_votes(state)
    return Fraction(abs(wasted_a - wasted_b), state.config.v)


@dataclass(frozen=True)
class FairnessReport:
    """Fairness summary of a finished game."""

    p: int
    p_range: tuple[int, int]
    efficiency_gap: Fraction
    wasted_a: int
    wasted_b: int
    useful_a: int
    useful_b: int


def fairness_report(state: GameState) -> FairnessReport:
    p = proportional_p(state.config)
    wasted_a, wasted_b = wasted_votes(state)
    useful_a, useful_b = useful_votes(state)
    return FairnessReport(
        p=p,
        p_range=p_range(p, state.config),
        efficiency_gap=Fraction(abs(wasted_a - wasted_b), state.config.v),
        wasted_a=wasted_a,
        wasted_b=wasted_b,
        useful_a=useful_a,
        useful_b=useful_b,
    )


def f_threshold(j: int, m: int, q: int) -> Fraction:
    """Minimum brick supply below which B cannot win q districts:
    2q(1 - q/(j+q))(m+1) - 1, kept exact. Strictly increasing in q."""
    return 2 * q * (1 - Fraction(q, j + q)) * (m + 1) - 1


def n_guarantee(m: int, q: int) -> int:
    """Brick supply 2q(m+1) above which B can always win q districts."""
    return 2 * q * (m + 1)


def column_bound(j: int, m: int, q: int) -> int:
    """Columns the cracking majority can always fill:
    floor(q(m+1)/(j+q) - 1/(j+q)), clamped to [0, m+1]."""
    c = (q * (m + 1) - 1) // (j + q)
    return max(0, min(c, m + 1))


@dataclass(frozen=True)
class BoundRow:
    """Bound values for one target q."""

    q: int
    f: Fraction            # exact threshold below which q is unreachable
    n_upper: int           # 2q(m+1), supply that guarantees q
    c: int                 # guaranteed full columns for the majority
    f_display: Fraction    # 2jqm/(j+q), the plotted large-m form
    n_upper_display: int   # 2qm, the plotted large-m form


@dataclass(frozen=True)
class BoundCurves:
    config: GameConfig
    rows: tuple[BoundRow, ...]


def bound_curves(config: GameConfig) -> BoundCurves:
    """Exact and display bound values for q = 1..j."""
    config.validate()
    j, m = config.j, config.m
    rows = tuple(
        BoundRow(
            q=q,
            f=f_threshold(j, m, q),
            n_upper=n_guarantee(m, q),
            c=column_bound(j, m, q),
            f_display=Fraction(2 * j * q * m, j + q),
            n_upper_display=2 * q * m,
        )
        for q in range(1, j + 1)
    )
    return BoundCurves(config=config, rows=rows)


@dataclass(frozen=True)
class BreakpointRow:
    """The situation at the smallest n whose proportional share is p.

    `guarantee_holds`: that n is already enough supply to guarantee p-1
    districts. `crack_margin` = f(p) - n: positive means the supply is
    still below the f threshold, so cracking denies the p-th district.
    """

    p: int
    m: int
    n_break: int
    guarantee_holds: bool
    crack_margin: Fraction
    crack_blocks_p: bool


def breakpoint_rows(j: int, ps, ms) -> list[BreakpointRow]:
    rows = []
    for p in ps:
        for m in ms:
            n_break = p + (2 * p - 1) * m
            margin = f_threshold(j, m, p) - n_break
            rows.append(
                BreakpointRow(
                    p=p,
                    m=m,
                    n_break=n_break,
                    guarantee_holds=n_break >= n_guarantee(m, p - 1),
                    crack_margin=margin,
                    crack_blocks_p=margin > 0,
                )
            )
    return rows
