"""Command-line front end.

Subcommands: ``check``, ``solve``, ``chain``, ``barr`` and ``fincat verify``.
Every command is a thin wrapper around the library; output goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import dsl, engine, export, fincat
from . import finpos as fp
from . import worlds as w

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    depth: int
    size_bound: int
    seed: int
    fmt: str
    diagnostic: bool

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("--depth must be at least 1")
        if self.size_bound < 1:
            raise ValueError("--size-bound must be at least 1")


class InputError(Exception):
    pass


def _config(args, ws: dsl.Workspace, default_fmt: str) -> RunConfig:
    try:
        return RunConfig(
            depth=ws.depth if args.depth is None else args.depth,
            size_bound=ws.size_bound if args.size_bound is None else args.size_bound,
            seed=getattr(args, "seed", 1),
            fmt=args.format or default_fmt,
            diagnostic=getattr(args, "diagnostic", False),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _workspace(args) -> dsl.Workspace:
    try:
        return dsl.load_workspace(args.workspace) if args.workspace else dsl.Workspace()
    except (OSError, json.JSONDecodeError, dsl.DslError) as exc:
        raise InputError(f"cannot load workspace: {exc}") from None


def _parse(args, ws: dsl.Workspace):
    parse = dsl.parse_mixed if args.mixed else dsl.parse_covariant
    return parse(args.expression, ws)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands ----------------------------------------------------------

def cmd_check(args) -> int:
    ws = _workspace(args)
    e = _parse(args, ws)
    report = dsl.check_guardedness(e)
    if (args.format or "text") == "json":
        _emit(export.dumps({"expression": dsl.to_text(e), "mixed": args.mixed,
                            "accepted": report.accepted, "violations": report.paths()}))
    elif report.accepted:
        _emit(f"accepted: {dsl.to_text(e)}")
    else:
        _emit(f"rejected: {dsl.to_text(e)}")
        for p in report.paths():
            _emit(f"  unguarded X at {p}")
    return EXIT_OK if report.accepted else EXIT_FAIL


def _solve(args, ws, cfg):
    e = _parse(args, ws)
    solver = engine.solve_mixed if args.mixed else engine.solve_covariant
    return solver(e, ws, cfg.depth, cfg.size_bound, diagnostic=cfg.diagnostic)


def _verdict_text(data: dict) -> str:
    lines = [f"{data['expression']}: {data['verdict']} ({data['world']})",
             f"  chain sizes: {data['chain_sizes']}",
             f"  ep certified: {data['ep_certified']}"]
    if "stage" in data:
        lines.append(f"  stage: {data['stage']}")
    for key in ("initiality", "finality"):
        r = data.get(key)
        if r:
            lines.append(f"  {key}: {'pass' if r['passed'] else 'FAIL'} over {r['targets']} "
                         f"carriers up to size {r['size_bound']}, counts {r['counts']}")
    if data.get("witness"):
        wit = data["witness"]
        lines.append(f"  witness: {wit['kind']} on a carrier of size {wit['carrier_size']} "
                     f"with {wit['count']} morphisms")
    return "\n".join(lines)


def cmd_solve(args) -> int:
    ws = _workspace(args)
    cfg = _config(args, ws, "json")
    v = _solve(args, ws, cfg)
    data = export.verdict_to_json(v)
    if cfg.fmt == "json":
        _emit(export.dumps(data))
    elif cfg.fmt == "text":
        _emit(_verdict_text(data))
    else:
        if not isinstance(v, engine.Stabilized):
            raise InputError("dot output of solve needs a stabilized verdict")
        _emit(export.object_to_dot(v.algebra.carrier, "carrier"))
    return EXIT_FAIL if isinstance(v, engine.Refuted) else EXIT_OK


def cmd_chain(args) -> int:
    ws = _workspace(args)
    cfg = _config(args, ws, "dot")
    e = _parse(args, ws)
    if args.carrier:
        v = _solve(args, ws, cfg)
        if not isinstance(v, engine.Stabilized):
            raise InputError(f"no carrier: verdict is {v.kind}")
        world, obj, label = v.world, v.algebra.carrier, "carrier"
    else:
        if args.plain or cfg.diagnostic:
            f = dsl.interpret_mixed(e, ws) if args.mixed else dsl.interpret_covariant(e, ws)
        else:
            ff = dsl.elaborate_mixed(e, ws) if args.mixed else dsl.elaborate_covariant(e, ws)
            f = ff.flipped
        build = engine.terminal_chain if args.terminal else engine.initial_chain
        stage = 0 if args.stage is None else args.stage
        if stage < 0:
            raise InputError("--stage must be non-negative")
        chain = build(f, cfg.depth)
        if stage >= len(chain.objects):
            raise InputError(f"stage {stage} out of range: the chain stops at {len(chain.objects) - 1}")
        world, obj, label = chain.world, chain.objects[stage], f"stage{stage}"
    if cfg.fmt == "dot":
        _emit(export.object_to_dot(obj, label))
    elif cfg.fmt == "json":
        _emit(export.dumps({"world": world.value, "object": w.to_json(world, obj),
                            "size": w.size(world, obj)}))
    else:
        _emit(f"{label}: size {w.size(world, obj)} in {world.value}")
    return EXIT_OK


def cmd_barr(args) -> int:
    ws = _workspace(args)
    if args.mixed:
        raise InputError("the Barr comparison takes covariant expressions")
    e = _parse(args, ws)
    report = engine.barr_condition_check(e, ws)
    data = {"expression": dsl.to_text(e), **report.to_json()}
    if (args.format or "json") == "json":
        _emit(export.dumps(data))
    else:
        _emit(f"{data['expression']}: Barr condition "
              f"{'holds' if report.condition_holds else 'fails'}; "
              f"hom(H1, H1) {'pointed' if report.hom_pointed else 'not pointed'}")
    return EXIT_OK


def cmd_fincat_verify(args) -> int:
    reflect = fincat.mutant_reflect if args.mutant else fincat.freyd_reflect_algebra
    fmt = args.format or "text"
    if args.file:
        try:
            c, d, f, g = fincat.load_instance(args.file)
        except (OSError, json.JSONDecodeError, KeyError, fincat.FincatError) as exc:
            raise InputError(f"cannot load instance: {exc}") from None
        failures = fincat.verify_instance(c, d, f, g, reflect=reflect)
        if fmt == "json":
            _emit(export.dumps({"file": args.file, "failures": failures}))
        else:
            _emit("pass" if not failures else "\n".join(f"FAIL: {x}" for x in failures))
        return EXIT_FAIL if failures else EXIT_OK
    if args.count < 1:
        raise InputError("--count must be at least 1")
    result = fincat.run_reflection_suite(args.seed, args.count, reflect=reflect)
    summary = result.summary()
    if fmt == "json":
        data = dict(summary, counterexamples=[fincat.case_to_json(c) for c in result.failures[:1]])
        _emit(export.dumps(data))
    else:
        _emit(" ".join(f"{k}={v}" for k, v in summary.items()))
        if result.failures:
            _emit(export.dumps(fincat.case_to_json(result.failures[0])))
    return EXIT_OK if result.passed else EXIT_FAIL


# -- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algcompact",
        description="Solve and verify recursive domain equations over finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("expression")
    common.add_argument("--mixed", action="store_true", help="use the mixed-variance grammar")
    common.add_argument("--workspace", metavar="FILE", help="JSON file of constants and combinators")
    common.add_argument("--format", choices=("json", "dot", "text"))

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--depth", type=int, metavar="N")
    run.add_argument("--size-bound", type=int, metavar="N")
    run.add_argument("--seed", type=int, default=1, metavar="N")
    run.add_argument("--diagnostic", action="store_true",
                     help="solve the functor directly, allowing unguarded expressions")

    p = sub.add_parser("check", parents=[common], help="check guardedness")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("solve", parents=[common, run], help="compute a compactness verdict")
    p.set_defaults(func=cmd_solve)
    p = sub.add_parser("chain", parents=[common, run], help="draw a chain stage or the carrier")
    p.add_argument("--stage", type=int, metavar="N")
    p.add_argument("--terminal", action="store_true", help="use the terminal chain")
    p.add_argument("--plain", action="store_true", help="chain of the plain functor itself")
    p.add_argument("--carrier", action="store_true", help="draw the solved carrier")
    p.set_defaults(func=cmd_chain)
    p = sub.add_parser("barr", parents=[common], help="run the Barr-condition comparison")
    p.set_defaults(func=cmd_barr)

    fc = sub.add_parser("fincat", help="finite-category reflection checks")
    fsub = fc.add_subparsers(dest="fincat_command", required=True)
    p = fsub.add_parser("verify", help="random reflection battery, or one instance from FILE")
    p.add_argument("file", nargs="?")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--mutant", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_fincat_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except dsl.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except dsl.GuardednessError as exc:
        paths = ", ".join(exc.report.paths())
        print(f"error: expression is not guarded (unguarded X at {paths}); "
              f"use --diagnostic to solve it anyway", file=sys.stderr)
    except (InputError, dsl.DslError, engine.EngineError, w.WorldError, fp.PosetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
