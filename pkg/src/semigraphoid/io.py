"""Plain-text ``.ind`` relation files and ``.dag`` graph files.

Relation files::

    vars: a b c d        # declares the universe, in order
    a,b ; c | d          # <ab, c | d>
    stable: a ; b |      # stable statement with empty conditioning set

Graph files::

    vars: a b c
    a -> b
    b -> c
"""

from __future__ import annotations

import re

from .core import Relation, SemigraphoidError, Triplet, TripletError, Universe, UniverseError, canonical
from .graph import Dag, GraphError

_NAME = re.compile(r"\w+")
_STABLE = re.compile(r"^stable\s*:")
_ARC = re.compile(r"^(\w+)\s*->\s*(\w+)$")


class ParseError(SemigraphoidError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _universe(lines) -> Universe:
    try:
        no, line = next(lines)
    except StopIteration:
        raise ParseError(1, "missing 'vars:' declaration") from None
    if not line.startswith("vars:"):
        raise ParseError(no, "expected 'vars:' declaration first")
    names = line[len("vars:"):].split()
    for n in names:
        if not _NAME.fullmatch(n):
            raise ParseError(no, f"invalid variable name {n!r}")
    try:
        return Universe(tuple(names))
    except UniverseError as exc:
        raise ParseError(no, str(exc)) from None


def _names(universe: Universe, part: str, no: int) -> int:
    part = part.strip()
    if not part:
        return 0
    mask = 0
    for n in part.split(","):
        n = n.strip()
        if not _NAME.fullmatch(n):
            raise ParseError(no, f"invalid variable name {n!r}")
        try:
            bit = 1 << universe.index(n)
        except UniverseError as exc:
            raise ParseError(no, str(exc)) from None
        if mask & bit:
            raise ParseError(no, f"variable {n!r} repeated")
        mask |= bit
    return mask


def parse_statement(universe: Universe, line: str, no: int = 1) -> tuple[Triplet, bool]:
    stable = bool(_STABLE.match(line))
    if stable:
        line = line.split(":", 1)[1]
    if line.count(";") != 1 or line.count("|") != 1 or line.index(";") > line.index("|"):
        raise ParseError(no, "expected 'X ; Y | Z'")
    left, cond = line.split("|")
    xs, ys = left.split(";")
    x, y, z = (_names(universe, p, no) for p in (xs, ys, cond))
    if not x or not y:
        raise ParseError(no, "empty X or Y")
    if x & y or x & z or y & z:
        raise ParseError(no, "overlapping sides")
    try:
        return canonical(x, y, z), stable
    except TripletError as exc:  # pragma: no cover - checked above
        raise ParseError(no, str(exc)) from None


def parse_relation(text: str) -> Relation:
    """Parse a relation file; the result carries its ``stable:`` marks."""
    lines = _lines(text)
    universe = _universe(lines)
    stable, plain = set(), set()
    for no, line in lines:
        t, is_stable = parse_statement(universe, line, no)
        (stable if is_stable else plain).add(t)
    return Relation.partitioned(universe, stable, plain - stable)


def parse_dag(text: str) -> Dag:
    lines = _lines(text)
    universe = _universe(lines)
    n = universe.size
    arcs: list[tuple[int, int]] = []
    children = [0] * n
    for no, line in lines:
        m = _ARC.match(line)
        if not m:
            raise ParseError(no, "expected 'u -> v'")
        try:
            a, b = universe.index(m[1]), universe.index(m[2])
        except UniverseError as exc:
            raise ParseError(no, str(exc)) from None
        if a == b:
            raise ParseError(no, f"self-arc on {m[1]}")
        if (a, b) in arcs:
            raise ParseError(no, f"duplicate arc {m[1]} -> {m[2]}")
        path = _path(children, b, a)
        if path is not None:
            cycle = " -> ".join(universe.names[v] for v in [a, *path])
            raise ParseError(no, f"cycle {cycle}")
        arcs.append((a, b))
        children[a] |= 1 << b
    try:
        return Dag(universe, frozenset(arcs))
    except GraphError as exc:  # pragma: no cover - rejected arc by arc above
        raise ParseError(0, str(exc)) from None


def _path(children: list[int], src: int, dst: int) -> list[int] | None:
    """Directed path src .. dst, if one exists."""
    stack = [(src, [src])]
    seen = 1 << src
    while stack:
        v, path = stack.pop()
        if v == dst:
            return path
        c = children[v]
        while c:
            low = c & -c
            c ^= low
            if not seen & low:
                seen |= low
                w = low.bit_length() - 1
                stack.append((w, path + [w]))
    return None


def format_statement(universe: Universe, t: Triplet, stable: bool = False) -> str:
    return ("stable: " if stable else "") + universe.format(t)


def statement_lines(r: Relation) -> list[str]:
    st = r.stable or frozenset()
    return [format_statement(r.universe, t, t in st) for t in sorted(r.triplets)]


def serialize_relation(r: Relation) -> str:
    head = "vars: " + " ".join(r.universe.names)
    return "\n".join([head, *statement_lines(r)]) + "\n"


def serialize_dag(g: Dag) -> str:
    head = "vars: " + " ".join(g.universe.names)
    return "\n".join([head, *(f"{a} -> {b}" for a, b in g.arc_names())]) + "\n"
