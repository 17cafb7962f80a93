"""Command-line entry point: ``ghzgame exercise1|exercise2|play|oracle|serve``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import oracle
from .game import GUARDS, ROBBERS, Robber, Side, question_for, questions_for
from .harness.config import (
    GuardPolicy,
    SessionConfig,
    StrategyChoice,
    endpoints_from_env,
    parse_endpoint,
)


def _endpoint_arg(text: str) -> tuple[str, tuple[str, int]]:
    role, sep, addr = text.partition("=")
    if not sep or role not in ("device", "referee"):
        raise argparse.ArgumentTypeError(f"expected device=<host:port> or referee=<host:port>, got {text!r}")
    try:
        return role, parse_endpoint(addr)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _suspect_strategy_arg(text: str) -> tuple[Robber, StrategyChoice]:
    who, sep, spec = text.partition("=")
    try:
        return Robber(who), StrategyChoice.parse(spec)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _strategy_arg(text: str) -> StrategyChoice:
    try:
        return StrategyChoice.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _guard_arg(text: str) -> GuardPolicy:
    try:
        return GuardPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_arg(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _emit(args: argparse.Namespace, text: str, data: dict) -> None:
    if args.report == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _fmt_coloring(c: oracle.Coloring) -> str:
    return " ".join(f"{r.value}:{c[r, Side.FRONT].value[0].upper()}/{c[r, Side.BACK].value[0].upper()}" for r in ROBBERS)


def cmd_exercise1(args: argparse.Namespace) -> int:
    arg = oracle.product_argument()
    ms = oracle.max_satisfiable()
    witnesses = oracle.named_witnesses()
    lines = ["Twelve factors (guard: sides seen):"]
    for g in GUARDS:
        seen = ", ".join(f"{r.value}-{s.value}" for gg, r, s in arg.factors if gg == g)
        lines.append(f"  guard {g}: {seen}  (claimed product {'+1' if g != 4 else '-1'})")
    lines.append("Each side appears " + ", ".join(sorted({str(m) for m in arg.multiplicity.values()})) + " times")
    lines.append(f"product grouped by side: {arg.joint_product:+d}")
    lines.append(f"product of claimed parities: {arg.required_product:+d}")
    lines.append(f"contradiction: {arg.contradiction}")
    lines.append(f"colorings satisfying all four: {len(ms.all_four)} of 64")
    lines.append(f"max simultaneously satisfiable = {ms.count}")
    for subset, cs in sorted(ms.witnesses.items(), key=lambda kv: sorted(kv[0])):
        lines.append(f"  {sorted(subset)}: {len(cs)} colorings, e.g. {_fmt_coloring(cs[0])}")
    for name, c in witnesses.items():
        lines.append(f"{name}: {_fmt_coloring(c)} satisfies {sorted(oracle.satisfied_guards(c))}")
    data = {
        "multiplicity": {f"{r.value}-{s.value}": m for (r, s), m in arg.multiplicity.items()},
        "joint_product": arg.joint_product,
        "required_product": arg.required_product,
        "contradiction": arg.contradiction,
        "all_four_count": len(ms.all_four),
        "max_satisfiable": ms.count,
        "witnesses": {
            ",".join(map(str, sorted(k))): [c.short() for c in v] for k, v in ms.witnesses.items()
        },
        "named_witnesses": {
            name: {"coloring": c.short(), "satisfied": sorted(oracle.satisfied_guards(c))}
            for name, c in witnesses.items()
        },
    }
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_exercise2(args: argparse.Namespace) -> int:
    lines = ["Questions per tested guard, and which statements they can check:"]
    testable = {}
    for g in GUARDS:
        qs = questions_for(g)
        t = oracle.statements_tested_by(qs)
        testable[g] = t
        asked = ", ".join(f"{r.value}:{s.value}" for r, s in qs.items())
        lines.append(f"  guard {g}: {asked} -> testable {list(t)}")
    lines.append("Candidate statements for each question:")
    candidates = {}
    for r in ROBBERS:
        for s in Side:
            c = oracle.candidate_statements(r, s)
            candidates[f"{r.value}-{s.value}"] = list(c)
            lines.append(f"  {r.value} asked {s.value}: {list(c)}")
    lines.append("Statements the three suspects must jointly guard against:")
    cover = {}
    for g in GUARDS:
        cover[g] = sorted(oracle.ambiguity_cover(g))
        per = "; ".join(f"{r.value}->{list(oracle.candidate_statements(r, question_for(g, r)))}" for r in ROBBERS)
        lines.append(f"  guard {g} tested: {per} => {cover[g]}")
    data = {
        "testable": {str(g): list(t) for g, t in testable.items()},
        "candidates": candidates,
        "ambiguity_cover": {str(g): c for g, c in cover.items()},
    }
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    cv = oracle.classical_game_value()
    w = cv.witness
    lines = [
        f"classical game value (uniform guard) = {cv.value}",
        f"optimal deterministic strategies: {len(cv.optimal)} of 64",
        f"witness: {_fmt_coloring(w.to_coloring())} passes guards {sorted(cv.witness_passes)}",
        f"strategy space equivalent to colorings: {cv.equivalent_to_colorings}",
        "shared randomness cannot help: the value is linear in the mixture weights",
    ]
    data = {
        "value": str(cv.value),
        "value_float": float(cv.value),
        "optimal_count": len(cv.optimal),
        "witness": w.to_coloring().short(),
        "witness_passes": sorted(cv.witness_passes),
        "equivalent_to_colorings": cv.equivalent_to_colorings,
    }
    _emit(args, "\n".join(lines), data)
    return 0


def _session_config(args: argparse.Namespace) -> SessionConfig:
    endpoints = endpoints_from_env()
    endpoints.update(dict(args.endpoint or []))
    return SessionConfig(
        seed=args.seed,
        trials=args.trials,
        guard_policy=args.guard,
        mode=getattr(args, "mode", "local"),
        strategy=args.strategy,
        suspect_strategies=dict(getattr(args, "suspect_strategy", None) or []),
        endpoints=endpoints,
        order="shuffle" if getattr(args, "shuffle_order", False) else tuple(ROBBERS),
        log_path=args.log,
        capture_dir=getattr(args, "capture_dir", None),
        agent_timeout=args.timeout,
    )


def cmd_play(args: argparse.Namespace) -> int:
    from .harness.local import run_session
    from .harness.referee import SessionError

    try:
        config = _session_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    audit = None
    try:
        if config.mode == "distributed":
            from .harness.distributed import run_distributed

            result = run_distributed(config)
            stats, audit = result.stats, result.audit
        else:
            stats, _ = run_session(config)
    except SessionError as exc:
        print(f"session error: {exc}", file=sys.stderr)
        _emit(args, exc.stats.render(), {"error": str(exc), "stats": exc.stats.to_dict()})
        return 1
    text = stats.render()
    data = {"config": _config_summary(config), "stats": stats.to_dict()}
    if audit is not None:
        text += f"\ntraffic audit: {'ok' if audit.ok else 'FAILED'}; measurement orders {dict(audit.orders)}"
        text += "".join(f"\n  violation: {v}" for v in audit.violations)
        data["audit"] = audit.to_dict()
    _emit(args, text, data)
    return 0 if audit is None or audit.ok else 1


def _config_summary(config: SessionConfig) -> dict:
    return {
        "seed": config.seed,
        "trials": config.trials,
        "guard": str(config.guard_policy),
        "mode": config.mode,
        "strategy": config.strategy.label,
        "suspect_strategies": {r.value: s.label for r, s in config.suspect_strategies.items()},
    }


def cmd_serve(args: argparse.Namespace) -> int:
    endpoints = endpoints_from_env()
    endpoints.update(dict(args.endpoint or []))

    def announce(address):
        print(f"LISTENING {address[0]}:{address[1]}", flush=True)

    if args.role == "device":
        from .harness.device import device_serve

        device_serve(endpoints.get("device", ("127.0.0.1", 0)), args.seed, args.capture, announce)
        return 0

    if args.role == "agent":
        from .harness.agent import agent_run

        if args.suspect is None:
            print("error: serve agent requires --suspect", file=sys.stderr)
            return 2
        if "referee" not in endpoints or (args.strategy.is_quantum and "device" not in endpoints):
            print("error: agent needs referee (and, for quantum, device) endpoints", file=sys.stderr)
            return 2
        agent_run(
            args.suspect, args.strategy, endpoints["referee"], endpoints.get("device"),
            args.session or f"ghz-{args.seed}", capture=args.capture, outcome_timeout=args.timeout,
        )
        return 0

    from .harness.referee import SessionError, referee_run
    from .harness.wire import listen

    config = _session_config(args)
    if args.session:
        config = SessionConfig(**{**config.__dict__, "session_id": args.session})
    srv = listen(endpoints.get("referee", ("127.0.0.1", 0)))
    announce(srv.getsockname())
    try:
        result = referee_run(config, srv, endpoints.get("device"), capture=args.capture)
    except SessionError as exc:
        print(f"session error: {exc}", file=sys.stderr)
        return 1
    finally:
        srv.close()
    _emit(args, result.stats.render(), {"stats": result.stats.to_dict()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghzgame", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--report", choices=("text", "json"), default="text")

    def session_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=_seed_arg, default=0)
        p.add_argument("--trials", type=_positive, default=1000)
        p.add_argument("--guard", type=_guard_arg, default=GuardPolicy())
        p.add_argument("--strategy", type=_strategy_arg, default=StrategyChoice.parse("quantum"))
        p.add_argument("--endpoint", type=_endpoint_arg, action="append", metavar="ROLE=HOST:PORT")
        p.add_argument("--log", default=None, help="append transcripts (JSON lines) to this file")
        p.add_argument("--timeout", type=float, default=5.0, help="per-trial agent/outcome timeout, seconds")

    for name, fn, help_ in (
        ("exercise1", cmd_exercise1, "the four testimonies cannot all hold"),
        ("exercise2", cmd_exercise2, "which statement a set of questions tests"),
        ("oracle", cmd_oracle, "best classical strategy by enumeration"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("play", help="run many interrogations")
    common(p)
    session_flags(p)
    p.add_argument("--mode", choices=("local", "distributed"), default="local")
    p.add_argument("--suspect-strategy", type=_suspect_strategy_arg, action="append", metavar="A=STRATEGY")
    p.add_argument("--shuffle-order", action="store_true", help="local mode: random measurement order per trial")
    p.add_argument("--capture-dir", default=None, help="distributed mode: where traffic captures go")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("serve", help="run one role of a distributed session")
    common(p)
    session_flags(p)
    p.add_argument("role", choices=("device", "agent", "referee"))
    p.add_argument("--suspect", type=Robber, choices=list(Robber), default=None)
    p.add_argument("--session", default=None)
    p.add_argument("--capture", default=None, help="traffic capture file for this process")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
