"""Semi-graphoid and stable semi-graphoid closure.

Two independent routes are provided:

* ``sem_close`` / ``stab_close`` apply the axioms literally to ordered
  triplets until nothing new appears.  They enumerate the closure and are
  guarded to small universes.
* ``sem_dominants`` / ``stab_dominants`` / ``combined_representation`` keep
  only maximal elements and search for contraction (and, for stable
  closure, composition) instances between the cones of those elements.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .core import (
    Order,
    Relation,
    SemigraphoidError,
    Triplet,
    Universe,
    VarSet,
    canonical,
    check_guard,
    maximal,
    o_dominates,
    s_dominates,
    subsets,
)

ORACLE_MAX_VARS = 6


class NotClosedError(SemigraphoidError):
    pass


# --------------------------------------------------------------------------
# Brute-force oracle


def _proper_splits(y: VarSet):
    """(part, rest) for every nonempty proper subset ``part`` of ``y``."""
    for part in subsets(y)[1:-1]:
        yield part, y & ~part


class _OrderedClosure:
    """Forward chaining over ordered triplets (x, y, z)."""

    def __init__(self, full: VarSet, stable: bool):
        self.full = full
        self.stable = stable
        self.facts: set[tuple[int, int, int]] = set()
        self.by_x_cond: dict[tuple[int, int], set[int]] = defaultdict(set)
        self.queue: list[tuple[int, int, int]] = []

    def add(self, x, y, z):
        t = (x, y, z)
        if t not in self.facts:
            self.facts.add(t)
            self.by_x_cond[(x, z)].add(y)
            self.queue.append(t)

    def run(self):
        while self.queue:
            x, y, z = self.queue.pop()
            for t in list(self.consequences(x, y, z)):
                self.add(*t)

    def consequences(self, x, y, z):
        # A1 symmetry
        yield y, x, z
        for part, rest in _proper_splits(y):
            yield x, part, z  # A2 decomposition
            yield x, part, z | rest  # A3 weak union
        # A4 contraction with (x, y, z) as the first premise
        for w in self.by_x_cond.get((x, y | z), ()):
            yield x, y | w, z
        # ... and as the second premise <x, w | c> with c split into y'z'
        for yy in subsets(z)[1:]:
            if yy in self.by_x_cond.get((x, z & ~yy), ()):
                yield x, yy | y, z & ~yy
        if self.stable:
            # A5 strong union
            free = self.full & ~(x | y | z)
            for extra in subsets(free)[1:]:
                yield x, y, z | extra
            # A2S composition
            for w in self.by_x_cond.get((x, z), ()):
                if w != y:
                    yield x, y | w, z

    def triplets(self) -> frozenset[Triplet]:
        return frozenset(canonical(x, y, z) for x, y, z in self.facts)


def _oracle(r: Relation, stable: bool, max_vars: int | None) -> Relation:
    check_guard("stab_close" if stable else "sem_close", r.universe, max_vars)
    engine = _OrderedClosure(r.universe.full, stable)
    for t in r.triplets:
        engine.add(t.x, t.y, t.z)
    engine.run()
    return Relation(r.universe, engine.triplets())


def sem_close(r: Relation, max_vars: int | None = ORACLE_MAX_VARS) -> Relation:
    """Least superset of ``r`` closed under symmetry, decomposition, weak
    union and contraction, enumerated exhaustively."""
    return _oracle(r, False, max_vars)


def stab_close(r: Relation, max_vars: int | None = ORACLE_MAX_VARS) -> Relation:
    """Least superset of ``r`` closed under the stable semi-graphoid axioms
    (the semi-graphoid axioms plus composition and strong union)."""
    return _oracle(r, True, max_vars)


def is_closed(r: Relation, stable: bool = False) -> bool:
    """One sweep of every axiom over ``r``; True iff nothing new appears."""
    engine = _OrderedClosure(r.universe.full, stable)
    for t in r.triplets:
        for x, y, z in t.orientations():
            engine.facts.add((x, y, z))
            engine.by_x_cond[(x, z)].add(y)
    return all(c in engine.facts for f in list(engine.facts) for c in engine.consequences(*f))


# --------------------------------------------------------------------------
# Dominant-triplet fixpoint

_O, _S = Order.O, Order.S


def _contractions(t1, k1: Order, t2, k2: Order):
    """Maximal conclusions <x, yw | z> of contraction with <x, y | z> in the
    cone of oriented ``t1`` and <x, w | yz> in the cone of oriented ``t2``.

    x and w are always taken as large as the cones allow; only y and the
    extra conditioning variables are enumerated.
    """
    a1, b1, d1 = t1
    a2, b2, d2 = t2
    common = a1 & a2
    if not common:
        return
    scope2 = a2 | b2 | d2
    for y in subsets(b1)[1:]:
        if k1 is _O:
            pool = (a1 | b1) & ~y
            extras = subsets(pool)
        elif k2 is _O:
            pool = scope2 & ~(d1 | y)
            extras = subsets(pool)
        else:
            # both s-cones: the smallest admissible conditioning set dominates
            extras = (d2 & ~(d1 | y),)
        for extra in extras:
            z = d1 | extra
            if z & y:
                continue
            x = common & ~z
            if not x:
                continue
            c = y | z
            if d2 & ~c:
                continue
            if k2 is _O and c & ~scope2:
                continue
            w = b2 & ~c
            if w:
                yield canonical(x, y | w, z)


def _compositions(t1, t2):
    """Maximal conclusion of composition between two s-cones, if any."""
    a1, b1, d1 = t1
    a2, b2, d2 = t2
    z = d1 | d2
    x = a1 & a2 & ~z
    y = b1 & ~z
    w = b2 & ~z
    if x and y and w:
        yield canonical(x, y | w, z)


def _pair_conclusions(e1: tuple[Triplet, Order], e2: tuple[Triplet, Order]):
    (u, k1), (v, k2) = e1, e2
    for o1 in u.orientations():
        for o2 in v.orientations():
            yield from _contractions(o1, k1, o2, k2)
            if k1 is _S and k2 is _S:
                yield from _compositions(o1, o2)


def _covered(t: Triplet, kind: Order, fixed_s: Iterable[Triplet]) -> bool:
    return kind is _O and any(s_dominates(s, t) for s in fixed_s)


def _fixpoint(
    universe: Universe,
    start: Iterable[Triplet],
    kind: Order,
    fixed_s: frozenset[Triplet] = frozenset(),
) -> frozenset[Triplet]:
    """Antichain (under ``kind``) of maximal derivable triplets.

    ``fixed_s`` are s-dominant elements whose s-cones are already closed
    under the stable axioms; they take part in contraction but never change.
    """
    fixed = [(s, _S) for s in sorted(fixed_s)]
    current = frozenset(t for t in maximal(start, kind) if not _covered(t, kind, fixed_s))
    new = sorted(current)
    while new:
        cands: set[Triplet] = set()
        elems = [(t, kind) for t in sorted(current)]
        for n in new:
            en = (n, kind)
            for e in elems + fixed:
                cands.update(_pair_conclusions(en, e))
                cands.update(_pair_conclusions(e, en))
        cands = {c for c in cands if not _covered(c, kind, fixed_s)}
        nxt = maximal(current | cands, kind)
        new = sorted(nxt - current)
        current = nxt
    return current


def sem_dominants(r: Relation) -> frozenset[Triplet]:
    """Maximally o-dominant triplets of the semi-graphoid closure of ``r``."""
    return _fixpoint(r.universe, r.triplets, _O)


def stab_dominants(r: Relation) -> frozenset[Triplet]:
    """Maximally s-dominant triplets of the stable closure of ``r``."""
    return _fixpoint(r.universe, r.triplets, _S)


def o_cone(t: Triplet) -> set[Triplet]:
    out = set()
    for x, y, z in t.orientations():
        for tx in subsets(x)[1:]:
            for ty in subsets(y)[1:]:
                for extra in subsets((x & ~tx) | (y & ~ty)):
                    out.add(canonical(tx, ty, z | extra))
    return out


def s_cone(t: Triplet, universe: Universe) -> set[Triplet]:
    out = set()
    for x, y, z in t.orientations():
        for tx in subsets(x)[1:]:
            for ty in subsets(y)[1:]:
                for extra in subsets(universe.full & ~(tx | ty | z)):
                    out.add(canonical(tx, ty, z | extra))
    return out


# --------------------------------------------------------------------------
# Combined representation


@dataclass(frozen=True)
class Representation:
    """Maximally o-dominant ``d_u`` plus maximally s-dominant ``d_s``.

    The represented relation is the union of the o-cones of ``d_u`` and the
    s-cones of ``d_s``.
    """

    universe: Universe
    d_u: frozenset[Triplet] = frozenset()
    d_s: frozenset[Triplet] = frozenset()

    def contains(self, t: Triplet) -> bool:
        self.universe.check(t.scope)
        return any(o_dominates(w, t) for w in self.d_u) or any(
            s_dominates(w, t) for w in self.d_s
        )

    __contains__ = contains

    def expand(self) -> Relation:
        ts = set()
        for w in self.d_u:
            ts |= o_cone(w)
        for w in self.d_s:
            ts |= s_cone(w, self.universe)
        return Relation(self.universe, ts)

    def __len__(self):
        return len(self.d_u) + len(self.d_s)


def combined_representation(r: Relation) -> Representation:
    """Compact representation of sem(I^U ∪ stab(I^S)) for a partitioned ``r``.

    Saturated statements are trivially stable and are moved to the stable
    part first.  Conclusions drawn from mixed premises stay in ``d_u``.
    """
    u = r.universe
    stable = set(r.stable or ())
    unstable = set()
    for t in r.unstable:
        (stable if t.is_saturated(u) else unstable).add(t)
    d_s = _fixpoint(u, stable, _S) if stable else frozenset()
    d_u = _fixpoint(u, unstable, _O, fixed_s=d_s)
    return Representation(u, d_u, d_s)


def contains(rep: Representation, t: Triplet) -> bool:
    return rep.contains(t)


# --------------------------------------------------------------------------
# Stability


def classify_stability(
    closed: Relation, verify: bool = False, max_vars: int | None = ORACLE_MAX_VARS
) -> Relation:
    """Mark every statement that survives all enlargements of its
    conditioning set.  With ``verify`` the input is first checked to be
    semi-graphoid closed."""
    if verify and not is_closed(closed):
        raise NotClosedError("relation is not closed under the semi-graphoid axioms")
    full = closed.universe.full
    ts = closed.triplets
    stable = set()
    for t in ts:
        free = full & ~t.scope
        if all(Triplet(t.x, t.y, t.z | extra) in ts for extra in subsets(free)[1:]):
            stable.add(t)
    return Relation(closed.universe, ts, frozenset(stable))


def generated(r: Relation, max_vars: int | None = ORACLE_MAX_VARS) -> Relation:
    """sem(I^U ∪ stab(I^S)) by the oracle, with no stability marks."""
    base = set(r.unstable)
    if r.stable:
        base |= stab_close(Relation(r.universe, r.stable), max_vars).triplets
    return sem_close(Relation(r.universe, base), max_vars)
