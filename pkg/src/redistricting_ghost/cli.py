"""Command-line front end.

Subcommands::

    simulate  play two strategies against each other, emit a replay
    solve     exact value (optionally with one side pinned to a strategy)
    sweep     solve every small instance and check it against the bounds
    bounds    emit bound-curve and staircase CSV for plotting
    replay    summarize (and optionally verify) a replay file
    serve     run the interactive play service

`sweep` exits nonzero if any solved instance contradicts a bound, which
is what makes it usable as a regression gate.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import GameConfig, GameError, Player, apply_move, new_game
from .experiments import (
    emit_bounds,
    parse_replay,
    simulate,
    sweep,
    verify_replay,
)
from .solver import FixedSolver, Solver
from .strategies import StrategySpec, parse_spec_string


def _config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--j", type=int, required=True, help="district count")
    parser.add_argument("--m", type=int, required=True, help="district capacity is 2m+1")
    parser.add_argument("--n", type=int, required=True, help="total bricks")


def _apply_overrides(spec: StrategySpec, q: int | None, seed: int | None) -> StrategySpec:
    return StrategySpec(
        kind=spec.kind,
        side=spec.side,
        target_q=spec.target_q if spec.target_q is not None else q,
        seed=spec.seed if spec.seed is not None else seed,
    )


def _cmd_simulate(args) -> int:
    config = GameConfig(j=args.j, m=args.m, n=args.n)
    b_spec = _apply_overrides(
        parse_spec_string(args.b_strategy, Player.B), args.q, args.seed
    )
    a_spec = _apply_overrides(
        parse_spec_string(args.a_strategy, Player.A), None, args.seed
    )
    replay = simulate(config, b_spec, a_spec)
    text = replay.serialize()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    footer = replay.footer
    print(
        f"q={footer.q} p={footer.p} E={footer.efficiency_gap}"
        f" b={footer.b} h={footer.h} w={footer.w}",
        file=sys.stderr,
    )
    return 0


def _principal_variation(config: GameConfig, fixed_side, fixed_spec) -> list[dict]:
    """Best play from the start, as a list of move dicts."""
    moves = []
    if fixed_side is None:
        solver = Solver(config)
        state = new_game(config)
        while not state.is_terminal:
            move = solver.best_move(state)
            moves.append({"district": move.district, "color": move.color.value})
            state = apply_move(state, move)
    else:
        solver = FixedSolver(config, fixed_side, fixed_spec)
        value = solver.solve().value
        state = new_game(config)
        last = None
        while not state.is_terminal:
            if state.to_move is fixed_side:
                move = solver.strategy.choose(state, last)
            else:
                move = solver.best_free_move(state, last, value)
            moves.append({"district": move.district, "color": move.color.value})
            state = apply_move(state, move)
            last = move
    return moves


def _cmd_solve(args) -> int:
    config = GameConfig(j=args.j, m=args.m, n=args.n)
    if args.fixed:
        if not args.fixed_side:
            print("--fixed requires --fixed-side", file=sys.stderr)
            return 2
        side = Player(args.fixed_side)
        spec = parse_spec_string(args.fixed, side)
        result = FixedSolver(config, side, spec).solve()
        pv = _principal_variation(config, side, spec)
    else:
        result = Solver(config).solve()
        pv = _principal_variation(config, None, None)
    print(
        json.dumps(
            {
                "value": result.value,
                "principal_variation": pv,
                "nodes_expanded": result.nodes_expanded,
                "table_size": result.table_size,
            }
        )
    )
    return 0


def _cmd_sweep(args) -> int:
    result = sweep(args.j_max, args.m_max)
    text = result.to_csv()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if result.budget_marker:
        print(f"aborted: {result.budget_marker}", file=sys.stderr)
        return 3
    if not result.all_consistent:
        bad = [row for row in result.rows if not row.consistent]
        print(f"BOUND VIOLATIONS in {len(bad)} rows", file=sys.stderr)
        for row in bad[:20]:
            print(f"  {row}", file=sys.stderr)
        return 1
    print(f"{len(result.rows)} instances consistent", file=sys.stderr)
    return 0


def _cmd_bounds(args) -> int:
    table = emit_bounds(args.j, args.m)
    text = table.to_csv()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_replay(args) -> int:
    with open(args.infile) as handle:
        replay = parse_replay(handle.read())
    header = replay.header
    print(
        f"j={header.config.j} m={header.config.m} n={header.config.n}"
        f" b={header.b_spec} a={header.a_spec} moves={len(replay.moves)}"
        f" footer={'yes' if replay.footer else 'no'}"
    )
    if args.verify:
        state = verify_replay(replay)
        print(f"verified: {state.move_count} moves legal, footer consistent")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(journal_dir=args.journal_dir)
    if args.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui_dir, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rghost",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="play two strategies and emit a replay")
    _config_args(p)
    p.add_argument("--b-strategy", required=True, help='e.g. "ghost-minority:q=2"')
    p.add_argument("--a-strategy", required=True, help='e.g. "crack-majority"')
    p.add_argument("--q", type=int, default=None, help="ghost-minority target override")
    p.add_argument("--seed", type=int, default=None, help="seed for random strategies")
    p.add_argument("--out", default=None, help="replay output file (default stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("solve", help="exact game value as JSON")
    _config_args(p)
    p.add_argument("--fixed-side", choices=["A", "B"], default=None)
    p.add_argument("--fixed", default=None, help="strategy pinned to --fixed-side")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="solve all small instances, check bounds")
    p.add_argument("--j-max", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--out", default=None, help="CSV output file (default stdout)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bounds", help="bound curves + staircase CSV")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--m", type=int, default=100, help="display size parameter")
    p.add_argument("--out", default=None, help="CSV output file (default stdout)")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("replay", help="summarize / verify a replay file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="run the play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--journal-dir", default=None)
    p.add_argument("--ui-dir", default=None, help="static dir for the web UI")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
