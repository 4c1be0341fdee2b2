"""Command-line interface.

Exit status: 0 success or pass, 1 a check answered no, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closure import ORACLE_MAX_VARS, classify_stability, combined_representation, generated
from .core import SemigraphoidError, Universe
from .graph import MODEL_MAX_VARS, PreconditionError, extract_models, separation_query, terminal_saturated, classify_external
from .io import format_statement, parse_dag, parse_relation, statement_lines
from .pmap import Outcome, Status, assess, decisive

OK, FAILED, USAGE = 0, 1, 2


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _set_arg(universe: Universe, value: str | None) -> int:
    if not value:
        return 0
    return universe.varset(n.strip() for n in value.split(",") if n.strip())


def _triplet_json(universe, t, stable=None):
    d = {"x": universe.names_of(t.x), "y": universe.names_of(t.y), "z": universe.names_of(t.z)}
    if stable is not None:
        d["stable"] = stable
    return d


def _witness_text(universe: Universe, witness: dict) -> str:
    parts = []
    for k, v in witness.items():
        if isinstance(v, int) and k != "inspected":
            parts.append(f"{k}={{{universe.format_set(v)}}}")
        elif isinstance(v, list) and v and isinstance(v[0], int):
            x, y, z = v
            parts.append(f"{k}=<{universe.format_set(x)} ; {universe.format_set(y)} | {universe.format_set(z)}>")
        elif isinstance(v, list):
            parts.append(f"{k}={len(v)} element(s)")
        else:
            parts.append(f"{k}={v}")
    return " ".join(parts)


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def emit(self, payload) -> None:
        if self.as_json:
            sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _limit(args, default):
    return default if args.max_vars is None else args.max_vars


def cmd_closure(args, out: _Out) -> int:
    r = parse_relation(_read(args.file))
    closed = generated(r, _limit(args, ORACLE_MAX_VARS))
    out.lines = statement_lines(closed)
    out.emit({"universe": list(r.universe.names), "closure": [_triplet_json(r.universe, t) for t in sorted(closed.triplets)]})
    return OK


def cmd_dominants(args, out: _Out) -> int:
    r = parse_relation(_read(args.file))
    rep = combined_representation(r)
    u = r.universe
    out.lines = [f"o: {u.format(t)}" for t in sorted(rep.d_u)] + [f"s: {u.format(t)}" for t in sorted(rep.d_s)]
    out.emit(
        {
            "universe": list(u.names),
            "d_u": [_triplet_json(u, t) for t in sorted(rep.d_u)],
            "d_s": [_triplet_json(u, t) for t in sorted(rep.d_s)],
        }
    )
    return OK


def cmd_stability(args, out: _Out) -> int:
    r = parse_relation(_read(args.file))
    marked = classify_stability(generated(r, _limit(args, ORACLE_MAX_VARS)))
    out.lines = statement_lines(marked)
    out.emit(
        {
            "universe": list(r.universe.names),
            "closure": [_triplet_json(r.universe, t, t in marked.stable) for t in sorted(marked.triplets)],
        }
    )
    return OK


def cmd_pmap(args, out: _Out) -> int:
    r = parse_relation(_read(args.file))
    u = r.universe
    _, verdict = assess(r, exhaustive=args.exhaustive, max_vars=args.max_vars)
    lines = []
    for e in verdict.report.entries:
        line = f"{e.id} {e.status.value}"
        if e.status is Status.FAIL:
            line += " " + _witness_text(u, e.witness)
            if not decisive(e):
                line += " (not decisive)"
        if e.inspected is not None:
            line += f" (inspected {e.inspected})"
        lines.append(line)
    if verdict.examined:
        lines.append(f"search: {verdict.examined} DAGs examined")
    if verdict.dag is not None:
        arcs = ", ".join(f"{a} -> {b}" for a, b in verdict.dag.arc_names())
        lines.append(f"perfect map: {arcs or '(no arcs)'}")
    lines.append(f"verdict: {verdict.outcome.value}")
    out.lines = lines
    out.emit(
        {
            "universe": list(u.names),
            "verdict": verdict.outcome.value,
            "report": verdict.report.to_dict(),
            "examined": verdict.examined,
            "dag": None if verdict.dag is None else [list(a) for a in verdict.dag.arc_names()],
        }
    )
    return FAILED if verdict.outcome is Outcome.NOT_ISOMORPHIC else OK


def _query(args):
    g = parse_dag(_read(args.file))
    u = g.universe
    return g, _set_arg(u, args.x), _set_arg(u, args.y), _set_arg(u, args.z)


def cmd_dsep(args, out: _Out) -> int:
    g, x, y, z = _query(args)
    v = separation_query(g, x, y, z)
    out.lines = [v.value]
    out.emit({"verdict": v.value})
    return OK


def cmd_model(args, out: _Out) -> int:
    g = parse_dag(_read(args.file))
    dsep, strong = extract_models(g, _limit(args, MODEL_MAX_VARS))
    m = strong if args.strong else dsep
    out.lines = statement_lines(m)
    out.emit({"universe": list(g.universe.names), "strong": args.strong, "model": [_triplet_json(g.universe, t) for t in sorted(m.triplets)]})
    return OK


def cmd_classify(args, out: _Out) -> int:
    g, x, y, z = _query(args)
    u = g.universe
    try:
        sides = classify_external(g, x, y, z)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    out.lines = [f"{u.names[v]}: {s.value}" for v, s in sorted(sides.items())]
    out.emit({u.names[v]: s.value for v, s in sides.items()})
    return OK


def cmd_extract(args, out: _Out) -> int:
    g = parse_dag(_read(args.file))
    t = terminal_saturated(g)
    out.lines = [] if t is None else [format_statement(g.universe, t)]
    out.emit({"statement": None if t is None else _triplet_json(g.universe, t)})
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-vars", type=int, default=None, help="override size bounds of exhaustive procedures")

    parser = argparse.ArgumentParser(prog="semigraphoid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file_help="relation file (.ind)"):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", help=file_help)
        p.set_defaults(func=func)
        return p

    add("closure", cmd_closure, "print the semi-graphoid closure")
    add("dominants", cmd_dominants, "print d_u and d_s of the combined representation")
    add("stability", cmd_stability, "print the closure with stable statements marked")
    p = add("pmap", cmd_pmap, "run the necessary conditions for a directed perfect map")
    p.add_argument("--exhaustive", action="store_true", help="also search all labeled DAGs when small enough")
    for name, func, help_ in (
        ("dsep", cmd_dsep, "strong, weak or connected"),
        ("classify", cmd_classify, "sides each external variable may join"),
    ):
        p = add(name, func, help_, "graph file (.dag)")
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
        p.add_argument("--z", default="")
    p = add("model", cmd_model, "print the graphical independence model", "graph file (.dag)")
    p.add_argument("--strong", action="store_true", help="strong model instead")
    add("extract", cmd_extract, "print the saturated statement at a sink", "graph file (.dag)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except (SemigraphoidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def run(argv: list[str] | None = None) -> int:
    """Like :func:`main` but maps argparse exits to a return code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
