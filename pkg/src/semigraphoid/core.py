"""Variable universes, bitmask variable sets, canonical triplets and dominance.

A variable set is a plain ``int`` bitmask over universe indices (bit ``i`` set
means variable ``i`` is a member).  Union, intersection and difference are the
usual ``|``, ``&`` and ``& ~`` operators; :func:`is_subset` and
:meth:`Universe.complement` cover the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

VarSet = int

DEFAULT_MAX_VARS = 64


class SemigraphoidError(Exception):
    """Base class for errors raised by this package."""


class TripletError(SemigraphoidError, ValueError):
    pass


class UniverseError(SemigraphoidError, ValueError):
    pass


class GuardError(SemigraphoidError):
    """An exhaustive procedure was asked to run on too large a universe."""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(
            f"{what}: universe has {size} variables, limit is {limit} "
            f"(raise it explicitly to override)"
        )


def check_guard(what: str, universe: Universe, limit: int | None) -> None:
    if limit is not None and universe.size > limit:
        raise GuardError(what, universe.size, limit)


def is_subset(a: VarSet, b: VarSet) -> bool:
    return a & ~b == 0


def members(mask: VarSet) -> Iterator[int]:
    """Indices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def subsets(mask: VarSet) -> list[VarSet]:
    """All subsets of ``mask`` in increasing integer order (empty set first)."""
    out = []
    sub = 0
    while True:
        out.append(sub)
        if sub == mask:
            return out
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Universe:
    """Ordered, named variables; variable ``names[i]`` has index ``i``."""

    names: tuple[str, ...]
    max_vars: int = field(default=DEFAULT_MAX_VARS, compare=False, repr=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise UniverseError("a universe needs at least one variable")
        if len(names) > self.max_vars:
            raise UniverseError(
                f"universe has {len(names)} variables, bound is {self.max_vars}"
            )
        for n in names:
            if not isinstance(n, str) or not n:
                raise UniverseError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise UniverseError("variable names must be distinct")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, names: str | Iterable[str], **kw) -> Universe:
        """``Universe.of("abc")`` or ``Universe.of(["x1", "x2"])``."""
        return cls(tuple(names), **kw)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full(self) -> VarSet:
        return (1 << len(self.names)) - 1

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UniverseError(f"unknown variable {name!r}") from None

    def varset(self, names: str | Iterable[str]) -> VarSet:
        """Mask of the given names.  A plain string is read one character per
        variable, so ``u.varset("ab")`` works for single-letter universes."""
        mask = 0
        for n in names:
            mask |= 1 << self.index(n)
        return mask

    def names_of(self, mask: VarSet) -> list[str]:
        self.check(mask)
        return [self.names[i] for i in members(mask)]

    def complement(self, mask: VarSet) -> VarSet:
        return self.full & ~mask

    def contains(self, mask: VarSet) -> bool:
        return mask >= 0 and is_subset(mask, self.full)

    def check(self, mask: VarSet) -> None:
        if not self.contains(mask):
            raise UniverseError(f"variable set {mask:#b} lies outside the universe")

    def triplet(self, x, y, z=()) -> Triplet:
        """Canonical triplet from name collections, e.g. ``u.triplet("a", "bc")``."""
        return canonical(self.varset(x), self.varset(y), self.varset(z), self)

    def format_set(self, mask: VarSet) -> str:
        return ",".join(self.names_of(mask))

    def format(self, t: Triplet) -> str:
        z = self.format_set(t.z)
        return f"{self.format_set(t.x)} ; {self.format_set(t.y)} |" + (f" {z}" if z else "")


@dataclass(frozen=True, order=True)
class Triplet:
    """A canonical statement <x, y | z> over bitmask variable sets.

    ``x`` and ``y`` are nonempty, the three sets are pairwise disjoint, and
    ``x < y`` as integers; use :func:`canonical` to build one from an
    arbitrary orientation.
    """

    x: VarSet
    y: VarSet
    z: VarSet = 0

    def __post_init__(self):
        _validate(self.x, self.y, self.z)
        if self.x > self.y:
            raise TripletError("triplet is not canonical (x must precede y)")

    @property
    def scope(self) -> VarSet:
        return self.x | self.y | self.z

    def is_saturated(self, universe: Universe) -> bool:
        return self.scope == universe.full

    def orientations(self) -> tuple[tuple[VarSet, VarSet, VarSet], ...]:
        return ((self.x, self.y, self.z), (self.y, self.x, self.z))


def _validate(x: VarSet, y: VarSet, z: VarSet) -> None:
    if not x or not y:
        raise TripletError("both sides of a triplet must be nonempty")
    if x < 0 or y < 0 or z < 0:
        raise TripletError("variable sets must be nonnegative masks")
    if x & y or x & z or y & z:
        raise TripletError("triplet sets must be pairwise disjoint")


def canonical(x: VarSet, y: VarSet, z: VarSet = 0, universe: Universe | None = None) -> Triplet:
    """Canonical orientation of <x, y | z>: the smaller mask goes first."""
    _validate(x, y, z)
    if universe is not None:
        universe.check(x | y | z)
    if x > y:
        x, y = y, x
    return Triplet(x, y, z)


def all_triplets(universe: Universe) -> Iterator[Triplet]:
    """Every canonical triplet over ``universe`` in (x, y, z) order."""
    full = universe.full
    for x in subsets(full)[1:]:
        for y in subsets(full & ~x)[1:]:
            if y < x:
                continue
            for z in subsets(full & ~(x | y)):
                yield Triplet(x, y, z)


def _o_le(t, u, w, x, y, z) -> bool:
    # <t,u|w> o-dominated by <x,y|z> in this fixed orientation
    return t & ~x == 0 and u & ~y == 0 and z & ~w == 0 and w & ~(x | y | z) == 0


def _s_le(t, u, w, x, y, z) -> bool:
    return t & ~x == 0 and u & ~y == 0 and z & ~w == 0


def o_dominates(w: Triplet, u: Triplet) -> bool:
    """True iff ``u`` lies in the o-cone of ``w`` (derivable by decomposition
    and weak union).  Both orientations of ``u`` are tried."""
    return _o_le(u.x, u.y, u.z, w.x, w.y, w.z) or _o_le(u.y, u.x, u.z, w.x, w.y, w.z)


def s_dominates(w: Triplet, u: Triplet) -> bool:
    """True iff ``u`` lies in the s-cone of ``w`` (derivable by decomposition
    and strong union)."""
    return _s_le(u.x, u.y, u.z, w.x, w.y, w.z) or _s_le(u.y, u.x, u.z, w.x, w.y, w.z)


class Order(str, Enum):
    O = "o"
    S = "s"

    @property
    def dominates(self):
        return o_dominates if self is Order.O else s_dominates


def _sort_key(order: Order):
    # every strict dominator of t sorts strictly before t
    if order is Order.O:
        return lambda t: (-(t.x | t.y).bit_count(), t)
    return lambda t: (-(t.x | t.y).bit_count(), t.z.bit_count(), t)


def maximal(ts: Iterable[Triplet], order: Order | str = Order.O) -> frozenset[Triplet]:
    """Elements of ``ts`` not strictly dominated by another element."""
    order = Order(order)
    dom = order.dominates
    kept: list[Triplet] = []
    for t in sorted(set(ts), key=_sort_key(order)):
        if not any(dom(k, t) for k in kept):
            kept.append(t)
    return frozenset(kept)


@dataclass(frozen=True)
class Relation:
    """A finite set of canonical triplets over one universe.

    ``stable`` is either ``None`` (no stability information) or the subset of
    ``triplets`` marked stable; the remainder is the unstable part.
    """

    universe: Universe
    triplets: frozenset[Triplet] = frozenset()
    stable: frozenset[Triplet] | None = None

    def __post_init__(self):
        ts = frozenset(self.triplets)
        object.__setattr__(self, "triplets", ts)
        for t in ts:
            if not isinstance(t, Triplet):
                raise TripletError(f"not a Triplet: {t!r}")
            self.universe.check(t.scope)
        if self.stable is not None:
            st = frozenset(self.stable)
            if not st <= ts:
                raise TripletError("stable marks must refer to members of the relation")
            object.__setattr__(self, "stable", st)

    @classmethod
    def partitioned(cls, universe: Universe, stable=(), unstable=()) -> Relation:
        stable = frozenset(stable)
        return cls(universe, stable | frozenset(unstable), stable)

    @property
    def unstable(self) -> frozenset[Triplet]:
        return self.triplets - (self.stable or frozenset())

    def __contains__(self, t: Triplet) -> bool:
        return t in self.triplets

    def __iter__(self):
        return iter(sorted(self.triplets))

    def __len__(self):
        return len(self.triplets)

    def same_universe(self, other: Relation) -> None:
        if self.universe != other.universe:
            raise UniverseError("relations are over different universes")
