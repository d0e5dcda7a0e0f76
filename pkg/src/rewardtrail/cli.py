"""Command-line entry points.

Subcommands: ``gen-space`` (random space descriptions), ``validate``
(check a description), ``run`` (sessions with synthetic or scripted
agents), ``suite`` (experiment tables to CSV) and ``serve`` (the HTTP
session service, optionally hosting the browser console).
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys

from .agents import GeneratorBehavior
from .evaluate import (
    parse_suite_config,
    run_suite,
    suite_from_config,
    suite_names,
    suite_preset,
)
from .generate import GenerationLimits, generate_space
from .seeding import derive_seed
from .session import (
    AgentSpec,
    ObserverPolicy,
    RandomPolicy,
    ScriptedPolicy,
    SessionConfig,
    run_session,
    trace_table,
)
from .space import ConnectivityClass, SpaceFormatError, connectivity_class, parse_space

CONNECTIVITY = {
    "connected": ConnectivityClass.CONNECTED,
    "strong": ConnectivityClass.STRONGLY_CONNECTED,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rewardtrail",
        description="Graph-world evaluation environments with reward trails",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-space", help="generate a random space description")
    gen.add_argument("--min-cells", type=int, default=2)
    gen.add_argument("--max-cells", type=int, default=None)
    gen.add_argument("--actions", type=int, default=None, help="fix the total action count")
    gen.add_argument("--connectivity", choices=sorted(CONNECTIVITY), default="connected")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--count", type=int, default=1, help="number of spaces to emit")

    val = sub.add_parser("validate", help="parse and classify a space description")
    val.add_argument("--desc", required=True)

    run = sub.add_parser("run", help="run evaluation sessions")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--desc", help="space description")
    source.add_argument("--auto", action="store_true", help="generate the space")
    run.add_argument("--min-cells", type=int, default=2)
    run.add_argument("--max-cells", type=int, default=None)
    run.add_argument("--actions", type=int, default=None)
    run.add_argument("--connectivity", choices=sorted(CONNECTIVITY), default="connected")
    run.add_argument("--agent", choices=["random", "observer", "scripted"], default="random")
    run.add_argument("--script", help="comma-separated action ids for --agent scripted")
    run.add_argument("--iterations", type=int, default=None)
    run.add_argument("--time", type=float, default=None, help="virtual time budget in ms")
    run.add_argument("--min-time", type=float, default=100.0, help="agent decision time lower bound (ms)")
    run.add_argument("--max-time", type=float, default=100.0, help="agent decision time upper bound (ms)")
    run.add_argument("--sessions", type=int, default=1)
    run.add_argument("--relocate", default="0", help="interval, 0 for never, or 'auto'")
    run.add_argument("--generator", default="random", help="random or pattern:1,2,...")
    run.add_argument("--moves", type=int, default=1, help="generator moves per interaction")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trace", help="write the interaction trace table to this file")

    suite = sub.add_parser("suite", help="run an experiment suite to CSV")
    suite.add_argument("--name", help=f"one of: {', '.join(suite_names())}")
    suite.add_argument("--config", help="key=value file overriding the suite")
    suite.add_argument("--out", required=True, help="output CSV path")

    serve = sub.add_parser("serve", help="start the HTTP session service")
    serve.add_argument("--port", type=int, default=8351)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui", default=None, help="directory with the browser console build")
    return parser


def _cmd_gen_space(args) -> int:
    limits = GenerationLimits(
        min_cells=args.min_cells,
        max_cells=args.max_cells,
        min_actions=args.actions if args.actions is not None else 2,
        max_actions=args.actions if args.actions is not None else 10,
        connectivity=CONNECTIVITY[args.connectivity],
    )
    seed = random.randrange(2**63) if args.seed is None else args.seed
    for index in range(args.count):
        rng = random.Random(derive_seed(seed, "gen-space", index))
        generated = generate_space(limits, rng)
        print(generated.description)
    return 0


def _cmd_validate(args) -> int:
    try:
        space = parse_space(args.desc)
    except SpaceFormatError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    kind = connectivity_class(space).name.lower()
    print(
        f"valid: {space.cell_count} cells, {space.action_count} actions "
        f"(stay action included), {kind}"
    )
    return 0


def _parse_generator_arg(text: str, moves: int) -> GeneratorBehavior:
    if text == "random":
        return GeneratorBehavior(mode="random", moves_per_interaction=moves)
    if text.startswith("pattern:"):
        pattern = tuple(int(part) for part in text.split(":", 1)[1].split(",") if part)
        return GeneratorBehavior(mode="pattern", pattern=pattern, moves_per_interaction=moves)
    raise SystemExit(f"unknown generator {text!r} (random or pattern:1,2,...)")


def _cmd_run(args) -> int:
    if args.desc is not None:
        space = args.desc
    else:
        space = GenerationLimits(
            min_cells=args.min_cells,
            max_cells=args.max_cells,
            min_actions=args.actions if args.actions is not None else 2,
            max_actions=args.actions if args.actions is not None else 10,
            connectivity=CONNECTIVITY[args.connectivity],
        )
    if (args.iterations is None) == (args.time is None):
        raise SystemExit("set exactly one of --iterations and --time")
    if args.agent == "scripted":
        if not args.script:
            raise SystemExit("--agent scripted needs --script 1,0,2,...")
        actions = tuple(int(part) for part in args.script.split(",") if part)
        policy = ScriptedPolicy(actions)
        if args.iterations is None:
            raise SystemExit("scripted agents need --iterations")
        if args.iterations > len(actions):
            raise SystemExit("script shorter than the iteration count")
    else:
        policy = {"random": RandomPolicy, "observer": ObserverPolicy}[args.agent]()
    if args.trace and args.sessions != 1:
        raise SystemExit("--trace needs --sessions 1")
    relocation = None if args.relocate == "auto" else int(args.relocate)
    behavior = _parse_generator_arg(args.generator, args.moves)

    averages = []
    for index in range(args.sessions):
        config = SessionConfig(
            space=space,
            agents=(
                AgentSpec(
                    args.agent,
                    policy,
                    min_time=args.min_time if args.time is not None else 0.0,
                    max_time=args.max_time if args.time is not None else 0.0,
                ),
            ),
            generator_behavior=behavior,
            interactions=args.iterations,
            time_budget=args.time,
            relocation_interval=relocation,
            seed=derive_seed(args.seed, "run", index) if args.sessions > 1 else args.seed,
            record_trace=bool(args.trace),
        )
        result = run_session(config)
        scored = result.evaluated
        averages.append(scored.average_reward)
        print(
            f"session {index}: space={result.space_description} "
            f"interactions={scored.interactions} "
            f"cumulative={scored.cumulative_reward:.6f} average={scored.average_reward:.6f}"
        )
        if args.trace:
            with open(args.trace, "w", encoding="utf-8") as handle:
                handle.write(trace_table(result, [args.agent, "good", "evil"]))
    if len(averages) > 1:
        print(
            f"mean average reward over {len(averages)} sessions: "
            f"{statistics.fmean(averages):.6f}"
        )
    return 0


def _cmd_suite(args) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            values = parse_suite_config(handle.read())
        spec = suite_from_config(values, name=args.name)
    elif args.name:
        spec = suite_preset(args.name)
    else:
        raise SystemExit("provide --name and/or --config")
    report = run_suite(spec)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(report.to_csv())
    print(f"wrote {len(report.rows)} rows to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "gen-space": _cmd_gen_space,
        "validate": _cmd_validate,
        "run": _cmd_run,
        "suite": _cmd_suite,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
