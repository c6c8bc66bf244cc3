"""Simulations, bound sweeps, plot tables, and the replay format.

Replay files are line-delimited text: one ``cfg`` header line, one ``mv``
line per move, and, for finished games, one ``out`` footer line::

    cfg j=2 m=1 n=3 b=first-legal a=mirror ver=0.1.0
    mv i=0 p=B d=0 c=brick
    ...
    mv i=5 p=A d=1 c=apple
    out q=1 E=0/1 p=1 b=0 h=0 w=3

The footer's b/h/w ledger is measured against a reference target: the B
side's target when B plays ghost-minority, else the largest guaranteed
target for the instance (default_q). Exact rationals are rendered
``num/den``; CSV emitters add a float twin column for plotting.

Re-applying the ``mv`` lines from the header's instance reproduces the
footer exactly, which is what ``verify_replay`` checks.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .core import (
    Color,
    GameConfig,
    GameError,
    GameState,
    Move,
    Player,
    apply_move,
    new_game,
    outcome,
)
from .metrics import (
    bound_curves,
    efficiency_gap,
    f_threshold,
    proportional_p,
)
from .scoring import game_score
from .solver import BudgetExceededError, Solver
from .strategies import (
    GHOST_MINORITY,
    RoundLedger,
    StrategySpec,
    build_strategy,
    default_q,
    parse_spec_string,
)


class ReplayError(GameError):
    code = "BAD_REPLAY"


class ReplayVerifyError(ReplayError):
    code = "REPLAY_MISMATCH"


@dataclass(frozen=True)
class ReplayHeader:
    config: GameConfig
    b_spec: str
    a_spec: str
    version: str = __version__
    extras: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ReplayMove:
    index: int
    player: Player
    district: int
    color: Color


@dataclass(frozen=True)
class ReplayFooter:
    q: int
    efficiency_gap: Fraction
    p: int
    b: int
    h: int
    w: int


@dataclass(frozen=True)
class Replay:
    header: ReplayHeader
    moves: tuple[ReplayMove, ...]
    footer: ReplayFooter | None

    def serialize(self) -> str:
        lines = [header_line(self.header)]
        lines.extend(move_line(mv) for mv in self.moves)
        if self.footer is not None:
            lines.append(footer_line(self.footer))
        return "\n".join(lines) + "\n"


def move_line(mv: ReplayMove) -> str:
    return f"mv i={mv.index} p={mv.player.value} d={mv.district} c={mv.color.value}"


def footer_line(footer: ReplayFooter) -> str:
    gap = footer.efficiency_gap
    return (
        f"out q={footer.q} E={gap.numerator}/{gap.denominator} p={footer.p}"
        f" b={footer.b} h={footer.h} w={footer.w}"
    )


def header_line(header: ReplayHeader) -> str:
    cfg = header.config
    parts = [
        f"cfg j={cfg.j} m={cfg.m} n={cfg.n}",
        f"b={header.b_spec}",
        f"a={header.a_spec}",
        f"ver={header.version}",
    ]
    parts.extend(f"{key}={value}" for key, value in header.extras)
    return " ".join(parts)


def _parse_fields(tokens: list[str], line_no: int) -> dict[str, str]:
    fields = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ReplayError(f"line {line_no}: malformed field {token!r}")
        fields[key] = value
    return fields


def parse_replay(text: str) -> Replay:
    header = None
    moves: list[ReplayMove] = []
    footer = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, *tokens = line.split()
        fields = _parse_fields(tokens, line_no)
        try:
            if kind == "cfg":
                known = {"j", "m", "n", "b", "a", "ver"}
                header = ReplayHeader(
                    config=GameConfig(
                        j=int(fields["j"]), m=int(fields["m"]), n=int(fields["n"])
                    ),
                    b_spec=fields["b"],
                    a_spec=fields["a"],
                    version=fields.get("ver", "?"),
                    extras=tuple(
                        (k, v) for k, v in fields.items() if k not in known
                    ),
                )
            elif kind == "mv":
                moves.append(
                    ReplayMove(
                        index=int(fields["i"]),
                        player=Player(fields["p"]),
                        district=int(fields["d"]),
                        color=Color(fields["c"]),
                    )
                )
            elif kind == "out":
                num, _, den = fields["E"].partition("/")
                footer = ReplayFooter(
                    q=int(fields["q"]),
                    efficiency_gap=Fraction(int(num), int(den or "1")),
                    p=int(fields["p"]),
                    b=int(fields["b"]),
                    h=int(fields["h"]),
                    w=int(fields["w"]),
                )
            else:
                raise ReplayError(f"line {line_no}: unknown record {kind!r}")
        except (KeyError, ValueError) as exc:
            raise ReplayError(f"line {line_no}: {exc}") from exc
    if header is None:
        raise ReplayError("replay has no cfg header line")
    return Replay(header=header, moves=tuple(moves), footer=footer)


def ledger_reference_q(config: GameConfig, b_spec: str) -> int:
    """Reference target for the b/h/w ledger: the ghost target when B
    plays ghost-minority, else default_q."""
    if b_spec.startswith(GHOST_MINORITY):
        spec = parse_spec_string(b_spec, Player.B)
        if spec.target_q is not None:
            return spec.target_q
    return default_q(config)


def _score_total(state: GameState, q_ref: int) -> int:
    if q_ref < 1:
        return 0
    return game_score(state, q_ref).total_score


def compute_ledger(
    config: GameConfig, moves, q_ref: int
) -> tuple[GameState, RoundLedger]:
    """Re-apply recorded moves, accumulating the brick ledger."""
    state = new_game(config)
    ledger = RoundLedger()
    score = _score_total(state, q_ref)
    for mv in moves:
        if mv.player is not state.to_move:
            raise ReplayVerifyError(
                f"move {mv.index}: recorded mover {mv.player.value} but "
                f"{state.to_move.value} is to move"
            )
        if mv.index != state.move_count:
            raise ReplayVerifyError(
                f"move index {mv.index} out of order (expected {state.move_count})"
            )
        state = apply_move(state, Move(mv.district, Color(mv.color)))
        new_score = _score_total(state, q_ref)
        ledger.record(mv.player, Move(mv.district, mv.color), new_score > score)
        score = new_score
    return state, ledger


def footer_for(state: GameState, ledger: RoundLedger) -> ReplayFooter:
    return ReplayFooter(
        q=outcome(state).b_districts_won,
        efficiency_gap=efficiency_gap(state),
        p=proportional_p(state.config),
        b=ledger.b,
        h=ledger.h,
        w=ledger.w,
    )


def verify_replay(replay: Replay) -> GameState:
    """Re-apply the move list through the rules and check the footer.

    Returns the final state; raises ReplayVerifyError on any mismatch.
    """
    config = replay.header.config
    q_ref = ledger_reference_q(config, replay.header.b_spec)
    state, ledger = compute_ledger(config, replay.moves, q_ref)
    if replay.footer is not None:
        if not state.is_terminal:
            raise ReplayVerifyError(
                f"footer present but only {state.move_count} of {config.v} moves recorded"
            )
        recomputed = footer_for(state, ledger)
        if recomputed != replay.footer:
            raise ReplayVerifyError(
                f"footer mismatch: recorded {replay.footer}, recomputed {recomputed}"
            )
    return state


def simulate(
    config: GameConfig,
    b_spec: StrategySpec | str,
    a_spec: StrategySpec | str,
) -> Replay:
    """Play a full game between two strategies and record it."""
    config.validate()
    if isinstance(b_spec, str):
        b_spec = parse_spec_string(b_spec, Player.B)
    if isinstance(a_spec, str):
        a_spec = parse_spec_string(a_spec, Player.A)
    if b_spec.side is not Player.B or a_spec.side is not Player.A:
        raise GameError("b_spec must play B and a_spec must play A")
    b_strategy = build_strategy(b_spec, config)
    a_strategy = build_strategy(a_spec, config)

    q_ref = ledger_reference_q(config, b_spec.spec_string())
    state = new_game(config)
    ledger = RoundLedger()
    score = _score_total(state, q_ref)
    moves: list[ReplayMove] = []
    last_move: Move | None = None
    while not state.is_terminal:
        mover = state.to_move
        strategy = b_strategy if mover is Player.B else a_strategy
        move = strategy.choose(state, last_move)
        state = apply_move(state, move)
        new_score = _score_total(state, q_ref)
        ledger.record(mover, move, new_score > score)
        score = new_score
        moves.append(
            ReplayMove(
                index=state.move_count - 1,
                player=mover,
                district=move.district,
                color=move.color,
            )
        )
        last_move = move

    header = ReplayHeader(
        config=config,
        b_spec=b_spec.spec_string(),
        a_spec=a_spec.spec_string(),
    )
    return Replay(header=header, moves=tuple(moves), footer=footer_for(state, ledger))


# -- bound sweep --------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    j: int
    m: int
    n: int
    value: int
    p: int
    even_split_ok: bool | None  # value == j/2 at an even split (None: n != v/2 or odd j)
    guarantee_q: int            # largest q guaranteed by supply (0: none)
    guarantee_ok: bool | None   # value >= guarantee_q
    denial_q: int | None        # smallest q denied by supply (None: none denied)
    denial_ok: bool | None      # value < denial_q

    @property
    def consistent(self) -> bool:
        return all(
            ok is not False
            for ok in (self.even_split_ok, self.guarantee_ok, self.denial_ok)
        )


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)
    budget_marker: str | None = None

    @property
    def all_consistent(self) -> bool:
        return all(row.consistent for row in self.rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(
            "j,m,n,value,p,even_split_ok,guarantee_q,guarantee_ok,denial_q,denial_ok\n"
        )
        for r in self.rows:
            out.write(
                f"{r.j},{r.m},{r.n},{r.value},{r.p},{_cell(r.even_split_ok)},"
                f"{r.guarantee_q},{_cell(r.guarantee_ok)},"
                f"{_cell(r.denial_q)},{_cell(r.denial_ok)}\n"
            )
        if self.budget_marker:
            out.write(f"# {self.budget_marker}\n")
        return out.getvalue()


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def smallest_denied_q(config: GameConfig) -> int | None:
    """Smallest q in [1, j] with n < f(q), or None when the supply clears
    every threshold."""
    for q in range(1, config.j + 1):
        if config.n < f_threshold(config.j, config.m, q):
            return q
    return None


def sweep(j_max: int, m_max: int, node_limit=None) -> SweepResult:
    """Solve every instance with j <= j_max, m <= m_max and check it
    against the guarantee, denial, and even-split bounds. Rows are
    ordered by (j, m, n); a budget abort leaves a marker on the partial
    table."""
    result = SweepResult()
    kwargs = {} if node_limit is None else {"node_limit": node_limit}
    for j in range(1, j_max + 1):
        for m in range(0, m_max + 1):
            solver = None
            for n in range(0, j * (2 * m + 1) + 1):
                config = GameConfig(j=j, m=m, n=n)
                try:
                    value = Solver(config, **kwargs).solve().value
                except BudgetExceededError as exc:
                    result.budget_marker = (
                        f"budget-exceeded j={j} m={m} n={n} nodes={exc.nodes}"
                    )
                    return result
                p = proportional_p(config)
                even_split = None
                if j % 2 == 0 and 2 * n == config.v:
                    even_split = value == j // 2
                q_guaranteed = default_q(config)
                q_denied = smallest_denied_q(config)
                result.rows.append(
                    SweepRow(
                        j=j,
                        m=m,
                        n=n,
                        value=value,
                        p=p,
                        even_split_ok=even_split,
                        guarantee_q=q_guaranteed,
                        guarantee_ok=(value >= q_guaranteed) if q_guaranteed > 0 else None,
                        denial_q=q_denied,
                        denial_ok=(value < q_denied) if q_denied is not None else None,
                    )
                )
    return result


# -- bound curve emission -------------------------------------------------


@dataclass(frozen=True)
class BoundsTable:
    """Fig-style plot data: bound curves per q plus the proportional-share
    staircase over the minority half of the supply range."""

    j: int
    m: int
    curve_rows: tuple
    staircase: tuple[tuple[int, int], ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(
            "section,q,n,f_exact,f_float,f_fig_form,f_fig_float,"
            "n_upper,n_upper_fig_form,c,p\n"
        )
        for r in self.curve_rows:
            out.write(
                f"bound,{r.q},,{_frac(r.f)},{float(r.f)},{_frac(r.f_display)},"
                f"{float(r.f_display)},{r.n_upper},{r.n_upper_display},{r.c},\n"
            )
        for n, p in self.staircase:
            out.write(f"staircase,,{n},,,,,,,,{p}\n")
        return out.getvalue()


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def emit_bounds(j: int, m: int) -> BoundsTable:
    """Bound curves for q = 1..floor(j/2) and the p staircase for
    n = 0..v/2."""
    config = GameConfig(j=j, m=m, n=0)
    config.validate()
    rows = bound_curves(config).rows[: max(j // 2, 1)]
    staircase = tuple(
        (n, proportional_p(GameConfig(j=j, m=m, n=n)))
        for n in range(0, config.v // 2 + 1)
    )
    return BoundsTable(j=j, m=m, curve_rows=tuple(rows), staircase=staircase)
