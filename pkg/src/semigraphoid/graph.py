"""DAGs, strong/weak d-separation and graphical independence models."""

from __future__ import annotations

import graphlib
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

from .core import (
    Relation,
    SemigraphoidError,
    Triplet,
    TripletError,
    Universe,
    UniverseError,
    VarSet,
    all_triplets,
    canonical,
    check_guard,
    members,
)

CHAIN_ORACLE_MAX_VARS = 8
MODEL_MAX_VARS = 7


class GraphError(SemigraphoidError, ValueError):
    pass


class CycleError(GraphError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("cycle: " + " -> ".join(cycle))


class PreconditionError(SemigraphoidError):
    pass


class Verdict(str, Enum):
    STRONG = "strong"
    WEAK = "weak"
    CONNECTED = "connected"

    @property
    def separated(self) -> bool:
        return self is not Verdict.CONNECTED


class Side(str, Enum):
    X = "x"
    Y = "y"
    BOTH = "both"


@dataclass(frozen=True)
class Dag:
    universe: Universe
    arcs: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        arcs = frozenset(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        n = self.universe.size
        parents = [0] * n
        children = [0] * n
        for tail, head in arcs:
            if not (0 <= tail < n and 0 <= head < n):
                raise GraphError(f"arc ({tail}, {head}) references an unknown vertex")
            if tail == head:
                raise GraphError(f"self-arc on {self.universe.names[tail]}")
            parents[head] |= 1 << tail
            children[tail] |= 1 << head
        object.__setattr__(self, "_order", _topological_order(self.universe, arcs))
        object.__setattr__(self, "_parents", tuple(parents))
        object.__setattr__(self, "_children", tuple(children))
        desc = [0] * n
        for v in reversed(self._order):
            d = 1 << v
            for c in members(children[v]):
                d |= desc[c]
            desc[v] = d
        object.__setattr__(self, "_desc", tuple(desc))

    @classmethod
    def from_names(cls, universe: Universe, arcs: Iterable[tuple[str, str]]) -> Dag:
        return cls(universe, frozenset((universe.index(a), universe.index(b)) for a, b in arcs))

    @property
    def order(self) -> tuple[int, ...]:
        """Topological order; ties go to the smaller index."""
        return self._order

    def parents(self, v: int) -> VarSet:
        return self._parents[v]

    def children(self, v: int) -> VarSet:
        return self._children[v]

    def descendants(self, v: int) -> VarSet:
        """sigma*(v): ``v`` together with everything reachable from it."""
        return self._desc[v]

    def neighbours(self, v: int) -> VarSet:
        return self._parents[v] | self._children[v]

    def sinks(self) -> list[int]:
        return [v for v in range(self.universe.size) if not self._children[v]]

    def arc_names(self) -> list[tuple[str, str]]:
        names = self.universe.names
        return [(names[a], names[b]) for a, b in sorted(self.arcs)]


def _topological_order(universe: Universe, arcs) -> tuple[int, ...]:
    ts = graphlib.TopologicalSorter({v: set() for v in range(universe.size)})
    for tail, head in arcs:
        ts.add(head, tail)
    try:
        ts.prepare()
    except graphlib.CycleError as exc:
        cycle = list(reversed(exc.args[1]))
        raise CycleError([universe.names[v] for v in cycle]) from None
    order = []
    while ts.is_active():
        ready = sorted(ts.get_ready())
        order.extend(ready)
        ts.done(*ready)
    return tuple(order)


def validate_acyclic(arcs: Iterable[tuple[int, int]], universe: Universe) -> Dag:
    """Build a :class:`Dag`, rejecting self-arcs, unknown vertices and cycles."""
    return Dag(universe, frozenset(arcs))


def _check_query(g: Dag, x: VarSet, y: VarSet, z: VarSet) -> None:
    if not x or not y:
        raise TripletError("x and y must be nonempty")
    if x & y or x & z or y & z:
        raise TripletError("x, y and z must be pairwise disjoint")
    g.universe.check(x | y | z)


# --------------------------------------------------------------------------
# Reachability


def _reaches(g: Dag, x: VarSet, y: VarSet, z: VarSet, strong: bool) -> bool:
    """Whether a walk from x to y passes every internal vertex.

    A non-collider passes iff it is outside z.  A collider passes always when
    ``strong`` and otherwise iff its descendants meet z.
    """
    # direction: 0 = entered from a child (or start), 1 = entered from a parent
    seen = set()
    queue = deque((v, 0) for v in members(x))
    while queue:
        v, came_down = queue.popleft()
        if (v, came_down) in seen:
            continue
        seen.add((v, came_down))
        bit = 1 << v
        if bit & y:
            return True
        in_z = bool(bit & z)
        if came_down:
            if not in_z:
                queue.extend((c, 1) for c in members(g.children(v)))
            if strong or g.descendants(v) & z:
                queue.extend((p, 0) for p in members(g.parents(v)))
        elif not in_z:
            queue.extend((p, 0) for p in members(g.parents(v)))
            queue.extend((c, 1) for c in members(g.children(v)))
    return False


def separation_query(g: Dag, x: VarSet, y: VarSet, z: VarSet = 0) -> Verdict:
    _check_query(g, x, y, z)
    if _reaches(g, x, y, z, strong=False):
        return Verdict.CONNECTED
    if _reaches(g, x, y, z, strong=True):
        return Verdict.WEAK
    return Verdict.STRONG


def d_separated(g: Dag, x: VarSet, y: VarSet, z: VarSet = 0) -> bool:
    return separation_query(g, x, y, z).separated


def strongly_separated(g: Dag, x: VarSet, y: VarSet, z: VarSet = 0) -> bool:
    return separation_query(g, x, y, z) is Verdict.STRONG


# --------------------------------------------------------------------------
# Chain enumeration oracle


@dataclass(frozen=True)
class Chain:
    """A simple chain with its internal vertices pre-classified."""

    vertices: tuple[int, ...]
    internal: VarSet
    non_colliders: VarSet
    colliders: tuple[int, ...]

    def presence_blocked(self, z: VarSet) -> bool:
        return bool(self.non_colliders & z)

    def blocked(self, g: Dag, z: VarSet) -> bool:
        return self.presence_blocked(z) or any(not g.descendants(c) & z for c in self.colliders)


def _classify(g: Dag, path: list[int]) -> Chain:
    nc = 0
    coll = []
    internal = 0
    for prev, v, nxt in zip(path, path[1:], path[2:]):
        internal |= 1 << v
        par = g.parents(v)
        if par >> prev & 1 and par >> nxt & 1:
            coll.append(v)
        else:
            nc |= 1 << v
    return Chain(tuple(path), internal, nc, tuple(coll))


@lru_cache(maxsize=32)
def simple_chains(g: Dag) -> dict[tuple[int, int], tuple[Chain, ...]]:
    """Every simple chain between every ordered pair of distinct vertices."""
    n = g.universe.size
    out: dict[tuple[int, int], list[Chain]] = {}
    for s in range(n):
        path = [s]

        def extend(v, used):
            for nb in members(g.neighbours(v) & ~used):
                path.append(nb)
                out.setdefault((s, nb), []).append(_classify(g, path))
                extend(nb, used | 1 << nb)
                path.pop()

        extend(s, 1 << s)
    return {k: tuple(v) for k, v in out.items()}


def chains_between(g: Dag, x: VarSet, y: VarSet) -> Iterable[Chain]:
    table = simple_chains(g)
    for a in members(x):
        for b in members(y):
            yield from table.get((a, b), ())


def chain_oracle(
    g: Dag, x: VarSet, y: VarSet, z: VarSet = 0, max_vars: int | None = CHAIN_ORACLE_MAX_VARS
) -> Verdict:
    """Verdict obtained by checking every simple chain between x and y."""
    check_guard("chain_oracle", g.universe, max_vars)
    _check_query(g, x, y, z)
    strong = True
    for ch in chains_between(g, x, y):
        if not ch.blocked(g, z):
            return Verdict.CONNECTED
        if not ch.presence_blocked(z):
            strong = False
    return Verdict.STRONG if strong else Verdict.WEAK


# --------------------------------------------------------------------------
# Models


def extract_models(g: Dag, max_vars: int | None = MODEL_MAX_VARS) -> tuple[Relation, Relation]:
    """(M_G, M_G^S): all d-separated and all strongly d-separated triplets."""
    check_guard("extract_models", g.universe, max_vars)
    dsep, strong = set(), set()
    for t in all_triplets(g.universe):
        v = separation_query(g, t.x, t.y, t.z)
        if v.separated:
            dsep.add(t)
            if v is Verdict.STRONG:
                strong.add(t)
    return Relation(g.universe, dsep), Relation(g.universe, strong)


def terminal_saturated(g: Dag) -> Triplet | None:
    """<x, rest | parents(x)> for the smallest-index sink x with a nonempty rest."""
    full = g.universe.full
    for v in g.sinks():
        par = g.parents(v)
        rest = full & ~(par | 1 << v)
        if rest:
            return canonical(1 << v, rest, par)
    return None


def classify_external(g: Dag, x: VarSet, y: VarSet, z: VarSet = 0) -> dict[int, Side]:
    """Which side(s) each variable outside x, y, z can join while keeping
    x and y strongly separated by z."""
    if separation_query(g, x, y, z) is not Verdict.STRONG:
        raise PreconditionError("x and y are not strongly d-separated by z")
    out = {}
    for gamma in members(g.universe.full & ~(x | y | z)):
        bit = 1 << gamma
        on_x = strongly_separated(g, x | bit, y, z)
        on_y = strongly_separated(g, x, y | bit, z)
        if on_x and on_y:
            out[gamma] = Side.BOTH
        elif on_x:
            out[gamma] = Side.X
        elif on_y:
            out[gamma] = Side.Y
        else:  # pragma: no cover - excluded by transitivity of strong separation
            raise AssertionError("external variable joins neither side")
    return out


def universe_match(g: Dag, r: Relation) -> None:
    if g.universe != r.universe:
        raise UniverseError("graph and relation are over different universes")
