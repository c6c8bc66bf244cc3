"""Redistricting Ghost: game rules, strategies, metrics, exact solver,
simulation tooling, and a playable HTTP service."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    Color,
    ConfigError,
    DistrictState,
    GameConfig,
    GameError,
    GameState,
    Move,
    MoveError,
    Outcome,
    Player,
    apply_move,
    legal_moves,
    new_game,
    outcome,
)
from .metrics import (  # noqa: F401
    BoundCurves,
    FairnessReport,
    bound_curves,
    efficiency_gap,
    fairness_report,
    packed_map,
    proportional_p,
    p_range,
)
from .scoring import ScoreReport, district_score, game_score, select_q  # noqa: F401
from .solver import (  # noqa: F401
    BudgetExceededError,
    GameValue,
    Solver,
    best_move,
    solve,
    solve_with_fixed,
)
from .strategies import (  # noqa: F401
    RoundLedger,
    StrategySpec,
    build_strategy,
    crack_majority_move,
    crack_parameters,
    default_q,
    ghost_minority_move,
    mirror_move,
)
