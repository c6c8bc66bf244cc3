"""Progress scoring for the minority side.

Fix a target district count q. B's progress is measured over sets Q of
exactly q districts in which B is ahead or tied (empty districts count as
tied): a district is worth m+1 once it holds at least m+1 bricks, zero
once it holds at least m+1 apples, and its brick count otherwise. The
game score is the largest total over any eligible Q, or zero when no
eligible q-subset exists. The quantity u is the smallest district score
inside a maximizing Q; it is the same for every maximizing Q, as is the
number of districts at u and the number of empty districts, which is what
lets the minority strategy key off a single canonical witness.

The production witness is found greedily (sort eligible districts by
score, prefer untied, then lowest index, and take a prefix); additivity
makes the greedy choice exact, and a brute-force enumeration is kept here
both as the debug path and as the oracle the tests compare against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import DistrictState, GameState


def district_score(district: DistrictState, m: int) -> int:
    """m+1 once won, 0 once lost, else the brick count."""
    if district.bricks >= m + 1:
        return m + 1
    if district.apples >= m + 1:
        return 0
    return district.bricks


def is_eligible(district: DistrictState) -> bool:
    """B ahead or tied; only such districts may enter a Q."""
    return district.bricks >= district.apples


@dataclass(frozen=True)
class ScoreReport:
    """Result of maximizing the score over q-subsets.

    `maximizing_sets` holds the canonical witness, or every maximizing set
    when requested (exponential in the worst case, so only tests and the
    debug path ask for that). Counts refer to the canonical witness;
    `tied_in_q` counts non-empty tied districts, the kind the minority
    strategy must repair.
    """

    target_q: int
    total_score: int
    maximizing_sets: tuple[tuple[int, ...], ...]
    min_score_u: int | None
    tied_in_q: int
    empty_in_q: int
    empty_total_z: int


def select_q(state: GameState, q: int) -> tuple[int, ...] | None:
    """Canonical maximizing Q: fewest non-empty tied districts, then the
    lexicographically smallest index set. None when no eligible q-subset
    exists."""
    if not 1 <= q <= state.config.j:
        raise ValueError(f"q must be in [1, {state.config.j}], got {q}")
    m = state.config.m
    eligible = [
        (i, d) for i, d in enumerate(state.districts) if is_eligible(d)
    ]
    if len(eligible) < q:
        return None
    eligible.sort(
        key=lambda item: (
            -district_score(item[1], m),
            item[1].is_tied and not item[1].is_empty,
            item[0],
        )
    )
    return tuple(sorted(i for i, _ in eligible[:q]))


def game_score(state: GameState, q: int, all_witnesses: bool = False) -> ScoreReport:
    """Maximum score over eligible q-subsets, with witness bookkeeping.

    With `all_witnesses` the report enumerates every maximizing set by
    brute force instead of returning just the canonical one.
    """
    m = state.config.m
    z = sum(1 for d in state.districts if d.is_empty)
    witness = select_q(state, q)
    if witness is None:
        return ScoreReport(q, 0, (), None, 0, 0, z)

    chosen = [state.districts[i] for i in witness]
    scores = [district_score(d, m) for d in chosen]
    total = sum(scores)
    if all_witnesses:
        sets = tuple(_enumerate_maximizing(state, q, total))
    else:
        sets = (witness,)
    return ScoreReport(
        target_q=q,
        total_score=total,
        maximizing_sets=sets,
        min_score_u=min(scores),
        tied_in_q=sum(1 for d in chosen if d.is_tied and not d.is_empty),
        empty_in_q=sum(1 for d in chosen if d.is_empty),
        empty_total_z=z,
    )


def _enumerate_maximizing(state: GameState, q: int, total: int):
    """All eligible q-subsets achieving `total`, in index order."""
    m = state.config.m
    eligible = [i for i, d in enumerate(state.districts) if is_eligible(d)]
    for subset in combinations(eligible, q):
        if sum(district_score(state.districts[i], m) for i in subset) == total:
            yield subset
