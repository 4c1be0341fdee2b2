"""Necessary conditions for DAG-isomorphism and exhaustive perfect-map search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator

from .closure import (
    ORACLE_MAX_VARS,
    NotClosedError,
    Representation,
    classify_stability,
    combined_representation,
    generated,
    is_closed,
)
from .core import (
    Relation,
    SemigraphoidError,
    Universe,
    VarSet,
    check_guard,
    members,
    subsets,
)
from .graph import Dag, extract_models, universe_match

CONDITIONS_MAX_VARS = 7
FIND_PMAP_MAX_VARS = 5

CONDITION_IDS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")
STABLE_TRANSITIVITY = "StableTransitivity"
SATURATED_O_DOMINANT = "SaturatedODominant"
ALL_S_DOMINANTS_SATURATED = "AllSDominantsSaturated"


class MissingMarksError(SemigraphoidError, ValueError):
    pass


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_RUN = "not-run"


@dataclass(frozen=True)
class ConditionResult:
    id: str
    status: Status
    witness: dict[str, Any] | None = None
    inspected: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "status": self.status.value,
            "witness": self.witness,
            "inspected": self.inspected,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ConditionResult:
        return cls(d["id"], Status(d["status"]), d.get("witness"), d.get("inspected"))


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple[ConditionResult, ...] = ()

    def __add__(self, other: ConditionReport) -> ConditionReport:
        return ConditionReport(self.entries + other.entries)

    def __getitem__(self, cid: str) -> ConditionResult:
        for e in self.entries:
            if e.id == cid:
                return e
        raise KeyError(cid)

    @property
    def failed(self) -> list[ConditionResult]:
        return [e for e in self.entries if e.status is Status.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failed

    @property
    def refuted(self) -> bool:
        """Some failure rules out a directed perfect map."""
        return any(decisive(e) for e in self.entries)

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ConditionReport:
        return cls(tuple(ConditionResult.from_dict(e) for e in d["entries"]))


class Outcome(str, Enum):
    NOT_ISOMORPHIC = "not-isomorphic"
    INCONCLUSIVE = "inconclusive"
    ISOMORPHIC = "isomorphic"


@dataclass(frozen=True)
class PMapVerdict:
    outcome: Outcome
    report: ConditionReport = field(default_factory=ConditionReport)
    dag: Dag | None = None
    examined: int = 0


# --------------------------------------------------------------------------
# Pearl's conditions


class _Lookup:
    """Membership over both orientations without canonicalising."""

    def __init__(self, ts):
        self.facts = set()
        for t in ts:
            self.facts.add((t.x, t.y, t.z))
            self.facts.add((t.y, t.x, t.z))

    def __call__(self, x, y, z=0) -> bool:
        return (x, y, z) in self.facts


def _quadruples(full: VarSet) -> Iterator[tuple[int, int, int, int]]:
    """Pairwise disjoint (X, Y, W, Z) with X, Y, W nonempty, in
    lexicographic mask order."""
    for x in subsets(full)[1:]:
        r1 = full & ~x
        for y in subsets(r1)[1:]:
            r2 = r1 & ~y
            for w in subsets(r2)[1:]:
                for z in subsets(r2 & ~w):
                    yield x, y, w, z


def _c1(closed: Relation, holds) -> ConditionResult:
    for t in sorted(closed.triplets):
        if not holds(t.y, t.x, t.z):
            return ConditionResult("C1", Status.FAIL, {"X": t.x, "Y": t.y, "Z": t.z})
    return ConditionResult("C1", Status.PASS)


def _c2_to_c5(full: VarSet, holds) -> list[ConditionResult]:
    failures: dict[str, dict[str, Any]] = {}
    for x, y, w, z in _quadruples(full):
        if len(failures) == 4:
            break
        q = {"X": x, "Y": y, "W": w, "Z": z}
        if "C2" not in failures:
            whole = holds(x, y | w, z)
            parts = holds(x, y, z) and holds(x, w, z)
            if whole != parts:
                failures["C2"] = dict(q, direction="decomposition" if whole else "composition")
        if "C3" not in failures:
            if holds(x, y, z | w) and holds(x, w, z | y) and not holds(x, y | w, z):
                failures["C3"] = q
        if "C4" not in failures:
            if holds(x, y | w, z) and not holds(x, y, w | z):
                failures["C4"] = q
        if "C5" not in failures:
            if holds(x, y, z) and holds(x, w, y | z) and not holds(x, y | w, z):
                failures["C5"] = q
    return [
        ConditionResult(c, Status.FAIL, failures[c]) if c in failures else ConditionResult(c, Status.PASS)
        for c in ("C2", "C3", "C4", "C5")
    ]


def _c6(full: VarSet, holds) -> ConditionResult:
    for x in subsets(full)[1:]:
        for y in subsets(full & ~x)[1:]:
            for z in subsets(full & ~(x | y)):
                if not holds(x, y, z):
                    continue
                for g in members(full & ~(x | y | z)):
                    gb = 1 << g
                    if holds(x, y, z | gb) and not (holds(x, gb, z) or holds(gb, y, z)):
                        return ConditionResult(
                            "C6", Status.FAIL, {"X": x, "Y": y, "Z": z, "gamma": gb}
                        )
    return ConditionResult("C6", Status.PASS)


def _c7(n: int, holds) -> ConditionResult:
    for a, b, c, d in itertools.permutations(range(n), 4):
        a, b, c, d = 1 << a, 1 << b, 1 << c, 1 << d
        if holds(a, b, c | d) and holds(c, d, a | b) and not (holds(a, b, c) or holds(a, b, d)):
            return ConditionResult(
                "C7", Status.FAIL, {"alpha": a, "beta": b, "gamma": c, "delta": d}
            )
    return ConditionResult("C7", Status.PASS)


def check_conditions(closed: Relation, max_vars: int | None = CONDITIONS_MAX_VARS) -> ConditionReport:
    """Check C1..C7 universally on an explicitly enumerated, closed relation."""
    check_guard("check_conditions", closed.universe, max_vars)
    if not is_closed(closed):
        raise NotClosedError("relation is not closed under the semi-graphoid axioms")
    holds = _Lookup(closed.triplets)
    full = closed.universe.full
    entries = [_c1(closed, holds), *_c2_to_c5(full, holds), _c6(full, holds), _c7(closed.universe.size, holds)]
    return ConditionReport(tuple(entries))


def violates(cid: str, witness: dict[str, Any], closed: Relation) -> bool:
    """Replay a C1..C7 witness; True iff it still exhibits the violation."""
    h = _Lookup(closed.triplets)
    w = witness
    if cid == "C1":
        return h(w["X"], w["Y"], w["Z"]) and not h(w["Y"], w["X"], w["Z"])
    if cid in ("C2", "C3", "C4", "C5"):
        x, y, ww, z = w["X"], w["Y"], w["W"], w["Z"]
        if cid == "C2":
            return h(x, y | ww, z) != (h(x, y, z) and h(x, ww, z))
        if cid == "C3":
            return h(x, y, z | ww) and h(x, ww, z | y) and not h(x, y | ww, z)
        if cid == "C4":
            return h(x, y | ww, z) and not h(x, y, ww | z)
        return h(x, y, z) and h(x, ww, y | z) and not h(x, y | ww, z)
    if cid == "C6":
        x, y, z, g = w["X"], w["Y"], w["Z"], w["gamma"]
        return h(x, y, z) and h(x, y, z | g) and not (h(x, g, z) or h(g, y, z))
    if cid == "C7":
        a, b, c, d = w["alpha"], w["beta"], w["gamma"], w["delta"]
        return h(a, b, c | d) and h(c, d, a | b) and not (h(a, b, c) or h(a, b, d))
    if cid == STABLE_TRANSITIVITY:
        if closed.stable is None:
            raise MissingMarksError("relation carries no stability marks")
        s = _Lookup(closed.stable)
        x, y, z, g = w["X"], w["Y"], w["Z"], w["gamma"]
        if not s(x, y, z):
            return False
        if w["form"] == "transitivity":
            return not (s(g, y, z) or s(x, g, z))
        return not (s(x | g, y, z) or s(x, y | g, z))
    raise KeyError(cid)


# --------------------------------------------------------------------------
# Stable transitivity


def check_stable_transitivity(closed: Relation) -> ConditionReport:
    """Transitivity and its composition form on the stable part of ``closed``."""
    if closed.stable is None:
        raise MissingMarksError("stability marks are required; see classify_stability")
    s = _Lookup(closed.stable)
    full = closed.universe.full
    for t in sorted(closed.stable):
        for g in members(full & ~t.scope):
            gb = 1 << g
            form = None
            if not (s(gb, t.y, t.z) or s(t.x, gb, t.z)):
                form = "transitivity"
            elif not (s(t.x | gb, t.y, t.z) or s(t.x, t.y | gb, t.z)):
                form = "composition"
            if form:
                wit = {"X": t.x, "Y": t.y, "Z": t.z, "gamma": gb, "form": form}
                return ConditionReport((ConditionResult(STABLE_TRANSITIVITY, Status.FAIL, wit),))
    return ConditionReport((ConditionResult(STABLE_TRANSITIVITY, Status.PASS),))


# --------------------------------------------------------------------------
# Saturation tests on a representation


def saturation_tests(rep: Representation) -> ConditionReport:
    """Both saturation tests in a single scan over d_u and d_s.

    ``inspected`` on each entry counts the representation elements looked at.
    A failed existence test also records ``uncovered``: variables that occur
    on neither side of any dominant.  A perfect map whose sinks are all
    adjacent to every other vertex has no saturated statement, and such a
    sink is never separated from anything; so the failure only rules out a
    perfect map when ``uncovered`` is empty (see :func:`decisive`).
    """
    full = rep.universe.full
    sides = 0
    seen_u = 0
    saturated_u = 0
    for t in sorted(rep.d_u):
        seen_u += 1
        sides |= t.x | t.y
        if t.scope == full:
            saturated_u += 1
    seen_s = 0
    first_bad = None
    for t in sorted(rep.d_s):
        seen_s += 1
        sides |= t.x | t.y
        if first_bad is None and t.scope != full:
            first_bad = t

    if rep.d_s or saturated_u:
        test1 = ConditionResult(SATURATED_O_DOMINANT, Status.PASS, inspected=seen_u)
    else:
        wit = {"d_u": [[t.x, t.y, t.z] for t in sorted(rep.d_u)], "uncovered": full & ~sides}
        test1 = ConditionResult(SATURATED_O_DOMINANT, Status.FAIL, wit, inspected=seen_u)
    if first_bad is None:
        test2 = ConditionResult(ALL_S_DOMINANTS_SATURATED, Status.PASS, inspected=seen_s)
    else:
        wit = {"triplet": [first_bad.x, first_bad.y, first_bad.z], "missing": full & ~first_bad.scope}
        test2 = ConditionResult(ALL_S_DOMINANTS_SATURATED, Status.FAIL, wit, inspected=seen_s)
    return ConditionReport((test1, test2))


def decisive(e: ConditionResult) -> bool:
    """Whether a failed entry proves that no directed perfect map exists."""
    if e.status is not Status.FAIL:
        return False
    if e.id == SATURATED_O_DOMINANT:
        return not e.witness["uncovered"]
    return True


# --------------------------------------------------------------------------
# Exhaustive search


def is_pmap(g: Dag, closed: Relation, max_vars: int | None = CONDITIONS_MAX_VARS) -> bool:
    universe_match(g, closed)
    return extract_models(g, max_vars)[0].triplets == closed.triplets


def _acyclic(n: int, parents: list[int]) -> bool:
    remaining = (1 << n) - 1
    while remaining:
        sources = [v for v in members(remaining) if not parents[v] & remaining]
        if not sources:
            return False
        for v in sources:
            remaining &= ~(1 << v)
    return True


def labeled_dags(universe: Universe) -> Iterator[frozenset[tuple[int, int]]]:
    """Arc sets of every labeled DAG over ``universe``.

    Each unordered pair i < j is absent, i -> j or j -> i; pairs vary
    lexicographically with the last pair fastest.
    """
    n = universe.size
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        parents = [0] * n
        arcs = []
        for (i, j), s in zip(pairs, states):
            if s == 1:
                parents[j] |= 1 << i
                arcs.append((i, j))
            elif s == 2:
                parents[i] |= 1 << j
                arcs.append((j, i))
        if _acyclic(n, parents):
            yield frozenset(arcs)


def _skeleton(closed: Relation) -> frozenset[tuple[int, int]]:
    """Pairs that no statement separates; in a perfect map exactly these
    pairs are adjacent."""
    n = closed.universe.size
    separated = set()
    for t in closed.triplets:
        if t.x.bit_count() == 1 and t.y.bit_count() == 1:
            separated.add((t.x.bit_length() - 1, t.y.bit_length() - 1))
    return frozenset(p for p in itertools.combinations(range(n), 2) if p not in separated)


def full_report(closed: Relation, max_vars: int | None = CONDITIONS_MAX_VARS) -> ConditionReport:
    """C1..C7 on ``closed``, stable transitivity on its stable part and the
    saturation tests on the representation built from that stable part."""
    marked = classify_stability(closed)
    return (
        check_conditions(closed, max_vars)
        + check_stable_transitivity(marked)
        + saturation_tests(combined_representation(marked))
    )


def find_pmap(closed: Relation, max_vars: int | None = FIND_PMAP_MAX_VARS) -> PMapVerdict:
    """Search every labeled DAG for a perfect map of ``closed``.

    Every DAG is examined; those whose skeleton disagrees with the relation's
    unseparated pairs are rejected before model extraction.
    """
    check_guard("find_pmap", closed.universe, max_vars)
    inner = None if max_vars is None else max(max_vars, CONDITIONS_MAX_VARS)
    report = full_report(closed, inner)
    skeleton = _skeleton(closed)
    examined = 0
    for arcs in labeled_dags(closed.universe):
        examined += 1
        if frozenset(tuple(sorted(a)) for a in arcs) != skeleton:
            continue
        g = Dag(closed.universe, arcs)
        if is_pmap(g, closed, inner):
            return PMapVerdict(Outcome.ISOMORPHIC, report, g, examined)
    return PMapVerdict(Outcome.NOT_ISOMORPHIC, report, None, examined)


def assess(r: Relation, exhaustive: bool = False, max_vars: int | None = None) -> tuple[Relation, PMapVerdict]:
    """Close a (possibly partitioned) seed relation and run every test.

    Returns the closure with stability marks and the verdict.  ``max_vars``
    replaces every size bound when given.  The exhaustive search is skipped,
    not refused, when the universe exceeds its bound.
    """
    closed = generated(r, ORACLE_MAX_VARS if max_vars is None else max_vars)
    marked = classify_stability(closed)
    search_limit = FIND_PMAP_MAX_VARS if max_vars is None else max_vars
    if exhaustive and closed.universe.size <= search_limit:
        return marked, find_pmap(closed, search_limit)
    report = full_report(closed, CONDITIONS_MAX_VARS if max_vars is None else max_vars)
    outcome = Outcome.NOT_ISOMORPHIC if report.refuted else Outcome.INCONCLUSIVE
    return marked, PMapVerdict(outcome, report)
