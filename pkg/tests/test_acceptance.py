"""Acceptance suite: every headline guarantee at desk scale, plus the
showcase numbers, with one printed pass/fail line per criterion.

The denial criterion is asserted against the headline threshold formula
f(q). Its optimal-vs-optimal half is clean at desk scale, but the
fixed-crack half genuinely fails on two small instances (see the failure
message); the sharp per-column count the strategy's own accounting
establishes is asserted separately below and is clean everywhere.
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from redistricting_ghost.core import GameConfig, Player, outcome
from redistricting_ghost.experiments import parse_replay, simulate, verify_replay
from redistricting_ghost.metrics import (
    breakpoint_rows,
    column_bound,
    f_threshold,
    n_guarantee,
    packed_map,
    proportional_p,
    wasted_votes,
)
from redistricting_ghost.scoring import district_score, game_score, is_eligible
from redistricting_ghost.solver import Solver, solve_with_fixed
from redistricting_ghost.strategies import StrategySpec
from redistricting_ghost.experiments import emit_bounds

from conftest import enumerate_states

DATA_DIR = Path(__file__).parent / "data"

DESK_J, DESK_M = 4, 2

_solve_cache: dict[tuple, int] = {}


def solved_value(j: int, m: int, n: int) -> int:
    key = (j, m, n)
    if key not in _solve_cache:
        _solve_cache[key] = Solver(GameConfig(j, m, n)).solve().value
    return _solve_cache[key]


def check_waste_identity(state):
    """Every terminal state an acceptance run produces must satisfy the
    total-waste identity."""
    config = state.config
    wasted_a, wasted_b = wasted_votes(state)
    assert wasted_a + wasted_b == config.v * config.m // (2 * config.m + 1)


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}")
        raise
    print(f"ACCEPTANCE PASS: {name}")


def test_even_split_exact():
    with criterion("even-split games solve to exactly j/2"):
        started = time.monotonic()
        for j in (2, 4):
            for m in (0, 1, 2):
                config = GameConfig(j, m, j * (2 * m + 1) // 2)
                assert solved_value(j, m, config.n) == j // 2, config
        assert time.monotonic() - started < 60


def test_supply_guarantee_suite():
    with criterion("supply 2q(m+1) guarantees q districts (optimal and ghost-fixed)"):
        started = time.monotonic()
        violations = []
        for j in range(1, DESK_J + 1):
            for m in range(0, DESK_M + 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    value = solved_value(j, m, n)
                    for q in range(1, j + 1):
                        if n < n_guarantee(m, q):
                            continue
                        if value < q:
                            violations.append(("optimal", j, m, n, q, value))
                        fixed = solve_with_fixed(
                            config,
                            Player.B,
                            StrategySpec("ghost-minority", Player.B, target_q=q),
                        ).value
                        if fixed < q:
                            violations.append(("ghost-fixed", j, m, n, q, fixed))
        assert not violations, violations
        assert time.monotonic() - started < 300


def test_supply_denial_suite():
    with criterion("supply below f(q) denies q districts (optimal and crack-fixed)"):
        started = time.monotonic()
        violations = []
        for j in range(1, DESK_J + 1):
            for m in range(0, DESK_M + 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    denied = [
                        q for q in range(1, j + 1) if n < f_threshold(j, m, q)
                    ]
                    if not denied:
                        continue
                    value = solved_value(j, m, n)
                    crack_value = solve_with_fixed(
                        config, Player.A, StrategySpec("crack-majority", Player.A)
                    ).value
                    for q in denied:
                        if value >= q:
                            violations.append(("optimal", j, m, n, q, value))
                        if crack_value >= q:
                            violations.append(("crack-fixed", j, m, n, q, crack_value))
        assert time.monotonic() - started < 300
        assert not violations, (
            "the stated threshold f(q) is violated at desk scale: the cracking "
            "majority's forced brick plays hand the minority a co-located pair "
            f"on these instances: {violations}; the exact per-column count "
            "q(m+1) + (j-q)c(q) from the strategy's own accounting is clean "
            "(see the next test and the decisions ledger)"
        )


def test_denial_by_exact_column_count():
    """The sharp form of the denial bound: against the cracking majority,
    winning q districts requires n >= q(m+1) + (j-q)c(q). Clean at desk
    scale on both the optimal and crack-fixed regimes."""
    violations = []
    for j in range(1, DESK_J + 1):
        for m in range(0, DESK_M + 1):
            for n in range(0, j * (2 * m + 1) + 1):
                config = GameConfig(j, m, n)
                denied = [
                    q
                    for q in range(1, j + 1)
                    if n < q * (m + 1) + (j - q) * column_bound(j, m, q)
                ]
                if not denied:
                    continue
                crack_value = solve_with_fixed(
                    config, Player.A, StrategySpec("crack-majority", Player.A)
                ).value
                for q in denied:
                    if solved_value(j, m, n) >= q:
                        violations.append(("optimal", j, m, n, q))
                    if crack_value >= q:
                        violations.append(("crack-fixed", j, m, n, q))
    assert not violations, violations


def test_caption_values_and_stored_transcript():
    with criterion("showcase numbers: c=2, f(3)=142/5, stored 33-brick game"):
        assert column_bound(7, 6, 3) == 2
        f3 = f_threshold(7, 6, 3)
        assert f3 == Fraction(142, 5)
        assert int(f3) == 28  # the threshold is quoted rounded-down elsewhere
        text = (DATA_DIR / "crack_showcase.replay").read_text()
        replay = parse_replay(text)
        assert replay.header.config == GameConfig(7, 6, 33)
        state = verify_replay(replay)
        check_waste_identity(state)
        assert outcome(state).b_districts_won == 3
        full_columns = min(d.bricks for d in state.districts)
        assert full_columns >= 2


def test_mirror_property():
    with criterion("mirroring forces an even split in 100 seeded games"):
        for config in (GameConfig(2, 1, 3), GameConfig(4, 1, 6)):
            for seed in range(50):
                replay = simulate(
                    config,
                    StrategySpec("random", Player.B, seed=seed),
                    StrategySpec("mirror", Player.A),
                )
                state = verify_replay(replay)
                check_waste_identity(state)
                assert replay.footer.q == config.j // 2, (config, seed)


def test_packed_map_proportionality():
    with criterion("packed maps hit the proportional share exactly (j<=6, m<=4)"):
        for j in range(1, 7):
            for m in range(0, 5):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    state = packed_map(config)
                    check_waste_identity(state)
                    assert (
                        outcome(state).b_districts_won == proportional_p(config)
                    ), config


def test_maximizing_set_structure_exhaustive():
    with criterion("maximizing-set structure holds on every reachable small-game state"):
        for j in (1, 2, 3):
            for m in (0, 1):
                for n in range(0, j * (2 * m + 1) + 1):
                    config = GameConfig(j, m, n)
                    for state in enumerate_states(config):
                        for q in range(1, j + 1):
                            report = game_score(state, q, all_witnesses=True)
                            if not report.maximizing_sets:
                                continue
                            stats = set()
                            for subset in report.maximizing_sets:
                                scores = [
                                    district_score(state.districts[i], m)
                                    for i in subset
                                ]
                                u = min(scores)
                                stats.add(
                                    (
                                        u,
                                        scores.count(u),
                                        sum(
                                            1
                                            for i in subset
                                            if state.districts[i].is_empty
                                        ),
                                    )
                                )
                                for i in range(j):
                                    if i in subset:
                                        continue
                                    d = state.districts[i]
                                    assert (
                                        not is_eligible(d)
                                        or district_score(d, m) <= u
                                    ), (state, q, subset, i)
                            # same u, same count at u, same empty count
                            assert len(stats) == 1, (state, q, stats)


def test_breakpoint_checks():
    with criterion("breakpoint supply guarantees p-1; j=10 margin signs"):
        rows = breakpoint_rows(10, ps=range(1, 6), ms=(10, 100, 1000))
        for row in rows:
            assert row.n_break >= n_guarantee(row.m, row.p - 1), row
            # at these sizes the crack margin is positive exactly for p <= 2
            assert row.crack_blocks_p == (row.p <= 2), row


def test_bound_curve_emission():
    with criterion("emitted curves: denial below guarantee, gap grows with q"):
        table = emit_bounds(10, 100)
        gaps = []
        for row in table.curve_rows:
            assert row.f_display < row.n_upper_display, row
            assert row.f < row.n_upper, row
            gaps.append(row.n_upper_display - row.f_display)
        assert gaps == sorted(gaps)
        assert all(second > first for first, second in zip(gaps, gaps[1:]))


def test_replay_roundtrip():
    with criterion("50 seeded games round-trip through the replay format"):
        jobs = []
        for seed in range(20):
            jobs.append(
                (GameConfig(3, 1, 5), f"random:seed={seed}", f"random:seed={seed + 1}")
            )
        for seed in range(15):
            jobs.append(
                (GameConfig(4, 2, 12), "ghost-minority:q=2", f"random:seed={seed}")
            )
        for seed in range(15):
            jobs.append(
                (GameConfig(4, 1, 6), f"random:seed={seed}", "crack-majority")
            )
        assert len(jobs) == 50
        for config, b_spec, a_spec in jobs:
            replay = simulate(config, b_spec, a_spec)
            parsed = parse_replay(replay.serialize())
            assert parsed == replay
            state = verify_replay(parsed)
            check_waste_identity(state)
            again = simulate(config, b_spec, a_spec)
            assert again.footer == replay.footer
            assert again.moves == replay.moves
