"""JSON-over-HTTP play service.

Endpoints::

    POST   /games                 create a session, engine opens if it is B
    GET    /games/{id}            current snapshot
    POST   /games/{id}/moves      human move; engine replies once
    GET    /games/{id}/hint       suggested move for the human
    GET    /games/{id}/replay     replay document (text)
    DELETE /games/{id}
    GET    /health

Snapshots carry everything the UI needs (districts with per-placement
player/color, pools, legal-move mask, score and fairness panels, and the
display block with the row sort and cross-play outlines), so clients stay
logic-free. Every error is ``{"error": {"code", "message"}}`` with a
machine-readable code.

Sessions live in memory; with a journal directory each session is also
appended to a replay file as it progresses and is rehydrated from it on
restart (engine randomness is replayed move by move, so rehydration is
exact). Concurrent sessions are independent; requests within one session
serialize on a per-session lock.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .core import (
    Color,
    ConfigError,
    GameConfig,
    GameError,
    GameState,
    Move,
    MoveError,
    Player,
    apply_move,
    legal_moves,
    new_game,
    outcome,
)
from .experiments import (
    Replay,
    ReplayHeader,
    ReplayMove,
    ReplayVerifyError,
    compute_ledger,
    footer_for,
    footer_line,
    header_line,
    ledger_reference_q,
    move_line,
    parse_replay,
)
from .metrics import efficiency_gap, f_threshold, n_guarantee, proportional_p
from .scoring import game_score
from .solver import BudgetExceededError, Solver
from .strategies import (
    CRACK_MAJORITY,
    GHOST_MINORITY,
    Strategy,
    StrategyError,
    StrategySpec,
    build_strategy,
    crack_parameters,
    default_q,
)

HUMAN_SPEC = "human"

# Exact hints are only attempted inside this envelope, and fall back to
# the strategy answer rather than keep a request waiting.
DESK_LIMITS = ((6, 3), (4, 5))  # (max j, max m) alternatives
HINT_NODE_LIMIT = 300_000


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class EngineModel(BaseModel):
    kind: str
    q: int | None = None
    seed: int | None = None


class CreateGameModel(BaseModel):
    j: int
    m: int
    n: int
    human_side: str
    engine: EngineModel
    score_q: int | None = None


class MoveModel(BaseModel):
    district: int
    color: str


@dataclass
class Session:
    id: str
    config: GameConfig
    human_side: Player
    engine_spec: StrategySpec
    engine: Strategy
    score_q: int
    state: GameState
    moves: list[ReplayMove] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    lock: threading.RLock = field(default_factory=threading.RLock)
    journaled_moves: int = 0
    journaled_footer: bool = False

    @property
    def engine_side(self) -> Player:
        return self.human_side.opponent

    @property
    def last_move(self) -> Move | None:
        if not self.moves:
            return None
        last = self.moves[-1]
        return Move(last.district, last.color)

    def record(self, mover: Player, move: Move) -> None:
        self.moves.append(
            ReplayMove(
                index=self.state.move_count,
                player=mover,
                district=move.district,
                color=move.color,
            )
        )
        self.state = apply_move(self.state, move)
        self.updated_at = time.time()

    def replay(self) -> Replay:
        b_spec, a_spec = (
            (HUMAN_SPEC, self.engine_spec.spec_string())
            if self.human_side is Player.B
            else (self.engine_spec.spec_string(), HUMAN_SPEC)
        )
        footer = None
        if self.state.is_terminal:
            q_ref = ledger_reference_q(self.config, b_spec)
            final, ledger = compute_ledger(self.config, self.moves, q_ref)
            footer = footer_for(final, ledger)
        header = ReplayHeader(
            config=self.config,
            b_spec=b_spec,
            a_spec=a_spec,
            extras=(("sq", str(self.score_q)),),
        )
        return Replay(header=header, moves=tuple(self.moves), footer=footer)


def default_score_q(config: GameConfig, human_side: Player) -> int:
    """Score panel target: the human's guaranteed target when they play B,
    else the engine majority's denial target."""
    if human_side is Player.B:
        return default_q(config)
    return crack_parameters(config)[0]


def _within_desk_limits(config: GameConfig) -> bool:
    return any(config.j <= j and config.m <= m for j, m in DESK_LIMITS)


class SessionStore:
    def __init__(self, journal_dir: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.RLock()
        self.journal_dir = Path(journal_dir) if journal_dir else None
        if self.journal_dir:
            self.journal_dir.mkdir(parents=True, exist_ok=True)
            self._rehydrate()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
        if self.journal_dir:
            header = session.replay().header
            self._journal_path(session.id).write_text(header_line(header) + "\n")
            self.journal(session)

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "NOT_FOUND", f"no session {session_id!r}")
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise ApiError(404, "NOT_FOUND", f"no session {session_id!r}")
        if self.journal_dir:
            self._journal_path(session_id).unlink(missing_ok=True)

    def journal(self, session: Session) -> None:
        """Append any not-yet-journaled moves (and the footer, once the
        game ends) to the session's journal file."""
        if not self.journal_dir:
            return
        lines = [move_line(mv) for mv in session.moves[session.journaled_moves :]]
        session.journaled_moves = len(session.moves)
        if session.state.is_terminal and not session.journaled_footer:
            footer = session.replay().footer
            if footer is not None:
                lines.append(footer_line(footer))
            session.journaled_footer = True
        if lines:
            with self._journal_path(session.id).open("a") as handle:
                handle.write("\n".join(lines) + "\n")

    def _journal_path(self, session_id: str) -> Path:
        return self.journal_dir / f"{session_id}.replay"

    def _rehydrate(self) -> None:
        for path in sorted(self.journal_dir.glob("*.replay")):
            try:
                session = _session_from_replay(path.stem, parse_replay(path.read_text()))
            except (GameError, ApiError, OSError, ValueError):
                continue  # skip unreadable journals rather than failing startup
            with self._lock:
                self._sessions[session.id] = session
            self.journal(session)  # top up a footer lost to a crash


def _session_from_replay(session_id: str, replay: Replay) -> Session:
    if replay.header.b_spec == HUMAN_SPEC:
        human_side, engine_text = Player.B, replay.header.a_spec
    elif replay.header.a_spec == HUMAN_SPEC:
        human_side, engine_text = Player.A, replay.header.b_spec
    else:
        raise ReplayVerifyError("journal has no human side")
    config = replay.header.config
    config.validate()
    engine_spec = _engine_spec(engine_text, human_side.opponent)
    engine = build_strategy(engine_spec, config)
    extras = dict(replay.header.extras)
    score_q = int(extras.get("sq", default_score_q(config, human_side)))
    score_q = min(max(score_q, 0), config.j)
    session = Session(
        id=session_id,
        config=config,
        human_side=human_side,
        engine_spec=engine_spec,
        engine=engine,
        score_q=score_q,
        state=new_game(config),
    )
    # Replay the log, re-deriving engine choices so a seeded engine's
    # stream is advanced exactly as it was live.
    last: Move | None = None
    for mv in replay.moves:
        move = Move(mv.district, mv.color)
        if mv.player is session.engine_side:
            chosen = engine.choose(session.state, last)
            if chosen != move:
                raise ReplayVerifyError(
                    f"journaled engine move {move} diverges from {chosen}"
                )
        session.record(mv.player, move)
        last = move
    session.journaled_moves = len(session.moves)
    session.journaled_footer = replay.footer is not None
    return session


def _engine_spec(text_or_model, side: Player) -> StrategySpec:
    from .strategies import parse_spec_string

    if isinstance(text_or_model, EngineModel):
        return StrategySpec(
            kind=text_or_model.kind,
            side=side,
            target_q=text_or_model.q,
            seed=text_or_model.seed,
        )
    return parse_spec_string(text_or_model, side)


def snapshot(session: Session) -> dict:
    """Full board snapshot; all numbers are integers, E is "num/den"."""
    state = session.state
    config = session.config
    m = config.m

    placed: list[list[dict]] = [[] for _ in range(config.j)]
    for mv in session.moves:
        placed[mv.district].append(
            {"i": mv.index, "player": mv.player.value, "color": mv.color.value}
        )
    outlines = [
        {"i": mv.index, "outline": "green" if mv.player is Player.A else "red"}
        for mv in session.moves
        if (mv.player is Player.A) == (mv.color is Color.BRICK)
    ]
    row_order = sorted(
        range(config.j),
        key=lambda i: (
            -state.districts[i].bricks,
            config.capacity - state.districts[i].total,
            i,
        ),
    )

    report = game_score(state, session.score_q) if session.score_q >= 1 else None
    score_block = {
        "q": session.score_q,
        "total": report.total_score if report else 0,
        "u": report.min_score_u if report else None,
        "witness": list(report.maximizing_sets[0])
        if report and report.maximizing_sets
        else None,
    }
    bounds_block = None
    if session.score_q >= 1:
        f = f_threshold(config.j, m, session.score_q)
        bounds_block = {
            "q": session.score_q,
            "f": f"{f.numerator}/{f.denominator}",
            "n_guarantee": n_guarantee(m, session.score_q),
        }

    terminal = state.is_terminal
    gap = efficiency_gap(state) if terminal else None
    final = outcome(state) if terminal else None
    return {
        "config": {
            "j": config.j,
            "m": config.m,
            "n": config.n,
            "v": config.v,
            "capacity": config.capacity,
            "b_is_minority": config.b_is_minority,
        },
        "districts": [
            {"bricks": d.bricks, "apples": d.apples, "placed": placed[i]}
            for i, d in enumerate(state.districts)
        ],
        "pools": {
            "bricks": state.bricks_remaining,
            "apples": state.apples_remaining,
        },
        "to_move": None if terminal else state.to_move.value,
        "move_count": state.move_count,
        "terminal": terminal,
        "outcome": (
            {
                "b_districts": final.b_districts_won,
                "a_districts": final.a_districts_won,
            }
            if final
            else None
        ),
        "score": score_block,
        "fairness": {
            "p": proportional_p(config),
            "E": f"{gap.numerator}/{gap.denominator}" if gap is not None else None,
        },
        "bounds": bounds_block,
        "legal_moves": [
            {"district": mv.district, "color": mv.color.value}
            for mv in legal_moves(state)
        ],
        "display": {"row_order": row_order, "outlines": outlines},
        "human_side": session.human_side.value,
        "engine": session.engine_spec.spec_string(),
    }


def _engine_reply(session: Session) -> None:
    state = session.state
    if not state.is_terminal and state.to_move is session.engine_side:
        move = session.engine.choose(state, session.last_move)
        session.record(session.engine_side, move)


def create_app(journal_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="Redistricting Ghost", version="0.1.0")
    store = SessionStore(journal_dir=journal_dir)
    app.state.store = store

    try:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )
    except ImportError:  # pragma: no cover
        pass

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.get("/health")
    def health():
        return {"ok": True}

    @app.post("/games")
    def create_game(body: CreateGameModel):
        try:
            human_side = Player(body.human_side)
        except ValueError:
            raise ApiError(400, "INVALID_CONFIG", "human_side must be A or B")
        config = GameConfig(j=body.j, m=body.m, n=body.n)
        engine_spec = _engine_spec(body.engine, human_side.opponent)
        try:
            config.validate()
            engine = build_strategy(engine_spec, config)
        except ConfigError as exc:
            raise ApiError(400, "INVALID_CONFIG", str(exc))
        except StrategyError as exc:
            raise ApiError(400, "INVALID_STRATEGY", str(exc))
        score_q = (
            body.score_q
            if body.score_q is not None
            else default_score_q(config, human_side)
        )
        if not 0 <= score_q <= config.j:
            raise ApiError(
                400, "INVALID_CONFIG", f"score_q must be in [0, {config.j}]"
            )
        session = Session(
            id=uuid.uuid4().hex[:12],
            config=config,
            human_side=human_side,
            engine_spec=engine_spec,
            engine=engine,
            score_q=score_q,
            state=new_game(config),
        )
        with session.lock:
            _engine_reply(session)  # engine opens when it plays B
            store.add(session)
            return {"id": session.id, "snapshot": snapshot(session)}

    @app.get("/games/{session_id}")
    def get_game(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return snapshot(session)

    @app.post("/games/{session_id}/moves")
    def post_move(session_id: str, body: MoveModel):
        session = store.get(session_id)
        with session.lock:
            state = session.state
            if state.is_terminal:
                raise ApiError(409, "GAME_OVER", "the game is already finished")
            if state.to_move is not session.human_side:
                raise ApiError(409, "NOT_YOUR_TURN", "it is the engine's turn")
            try:
                color = Color(body.color)
            except ValueError:
                raise ApiError(400, "BAD_COLOR", "color must be brick or apple")
            move = Move(body.district, color)
            try:
                apply_move(state, move)  # validate before committing
            except MoveError as exc:
                raise ApiError(409, exc.code, str(exc))
            session.record(session.human_side, move)
            _engine_reply(session)
            store.journal(session)
            return snapshot(session)

    @app.get("/games/{session_id}/hint")
    def get_hint(session_id: str):
        session = store.get(session_id)
        with session.lock:
            state = session.state
            if state.is_terminal:
                raise ApiError(409, "GAME_OVER", "the game is already finished")
            if state.to_move is not session.human_side:
                raise ApiError(409, "NOT_YOUR_TURN", "it is the engine's turn")
            if _within_desk_limits(session.config):
                try:
                    move = Solver(
                        session.config, node_limit=HINT_NODE_LIMIT
                    ).best_move(state)
                    return {
                        "district": move.district,
                        "color": move.color.value,
                        "tag": "exact",
                    }
                except BudgetExceededError:
                    pass
            if session.human_side is Player.B:
                spec = StrategySpec(
                    kind=GHOST_MINORITY, side=Player.B, target_q=session.score_q
                )
            else:
                spec = StrategySpec(kind=CRACK_MAJORITY, side=Player.A)
            strategy = build_strategy(spec, session.config)
            move = strategy.choose(state, session.last_move)
            return {
                "district": move.district,
                "color": move.color.value,
                "tag": f"strategy:{spec.kind}",
            }

    @app.get("/games/{session_id}/replay")
    def get_replay(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return PlainTextResponse(session.replay().serialize())

    @app.delete("/games/{session_id}", status_code=204)
    def delete_game(session_id: str):
        store.delete(session_id)

    return app
