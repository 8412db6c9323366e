"""Finite groupoids in skeletal form.

A groupoid is recorded only up to its cardinality data: a multiset of
stacky points, each an isomorphism class with mass ``1/|Aut|`` and a U(1)
phase.  Explicit groupoids enter as action groupoids of permutation groups,
and orbit-stabilizer turns them into stacky points.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, SizeError
from .scalars import ZERO_ANGLE, Angle, PhasedScalar, angle_from_json, as_fraction, fraction_str

GROUP_ORDER_CAP = 10**6

Perm = Tuple[int, ...]


@dataclass(frozen=True)
class StackyPoint:
    mass: Fraction
    phase: Angle = ZERO_ANGLE
    tag: Optional[Hashable] = field(default=None, compare=True)

    def __post_init__(self):
        m = as_fraction(self.mass)
        if m <= 0:
            raise InputError(f"stacky point mass must be positive, got {m}")
        object.__setattr__(self, "mass", m)

    def sort_key(self):
        return (self.mass, self.phase.sort_key(), self.tag is not None, str(self.tag))

    def cardinality(self) -> PhasedScalar:
        return PhasedScalar.rational(self.mass, self.phase)

    def to_json(self) -> dict:
        out = {"mass": fraction_str(self.mass), **self.phase.to_json(), "tag": None}
        if self.tag is not None:
            out["tag"] = str(self.tag)
        return out


class SkeletalGroupoid:
    """A finite multiset of stacky points, kept in canonical order.

    Identical points are stored once with a multiplicity, so fibers such as
    "n! points of mass 1/n!" stay small.
    """

    __slots__ = ("_points",)

    def __init__(self, points: Iterable = ()):
        counts = {}
        for item in points:
            if isinstance(item, StackyPoint):
                p, k = item, 1
            else:
                p, k = item
            if k < 0:
                raise InputError("negative multiplicity")
            if k:
                counts[p] = counts.get(p, 0) + k
        self._points = tuple(sorted(counts.items(), key=lambda pk: pk[0].sort_key()))

    @classmethod
    def empty(cls) -> "SkeletalGroupoid":
        return cls()

    @classmethod
    def point(cls, mass=1, phase: Angle = ZERO_ANGLE, tag=None) -> "SkeletalGroupoid":
        return cls([StackyPoint(as_fraction(mass), phase, tag)])

    @classmethod
    def discrete(cls, n: int) -> "SkeletalGroupoid":
        """An n-element set: n points of mass 1."""
        return cls([(StackyPoint(Fraction(1)), n)]) if n else cls()

    @property
    def points(self) -> Tuple[Tuple[StackyPoint, int], ...]:
        """(point, multiplicity) pairs in canonical order."""
        return self._points

    def iter_points(self):
        for p, k in self._points:
            for _ in range(k):
                yield p

    def __len__(self):
        return sum(k for _, k in self._points)

    def is_empty(self) -> bool:
        return not self._points

    def cardinality(self) -> PhasedScalar:
        return cardinality(self)

    def __add__(self, other: "SkeletalGroupoid") -> "SkeletalGroupoid":
        return sum_(self, other)

    def __mul__(self, other: "SkeletalGroupoid") -> "SkeletalGroupoid":
        return product(self, other)

    def __eq__(self, other):
        if not isinstance(other, SkeletalGroupoid):
            return NotImplemented
        return self._points == other._points

    def __hash__(self):
        return hash(self._points)

    def __repr__(self):
        return f"SkeletalGroupoid({list(self._points)!r})"

    def map_points(self, fn) -> "SkeletalGroupoid":
        return SkeletalGroupoid((fn(p), k) for p, k in self._points)

    def to_json(self) -> dict:
        pts = []
        for p, k in self._points:
            d = p.to_json()
            if k != 1:
                d["multiplicity"] = k
            pts.append(d)
        return {"points": pts}

    @classmethod
    def from_json(cls, data: dict) -> "SkeletalGroupoid":
        pts = []
        for d in data["points"]:
            p = StackyPoint(Fraction(d["mass"]), angle_from_json(d), d.get("tag"))
            pts.append((p, int(d.get("multiplicity", 1))))
        return cls(pts)


def cardinality(g: SkeletalGroupoid) -> PhasedScalar:
    """Sum over points of mass times phase."""
    return PhasedScalar(
        (p.mass * k, p.phase) for p, k in g.points
    )


def sum_(g1: SkeletalGroupoid, g2: SkeletalGroupoid) -> SkeletalGroupoid:
    return SkeletalGroupoid(list(g1.points) + list(g2.points))


def product(g1: SkeletalGroupoid, g2: SkeletalGroupoid) -> SkeletalGroupoid:
    """Pairwise products: masses multiply, phases add."""
    out = []
    for p, j in g1.points:
        for q, k in g2.points:
            tag = None
            if p.tag is not None or q.tag is not None:
                tag = (p.tag, q.tag)
            out.append((StackyPoint(p.mass * q.mass, p.phase + q.phase, tag), j * k))
    return SkeletalGroupoid(out)


# --- permutation actions -------------------------------------------------


def _check_perm(p: Sequence[int], n: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise InputError(f"not a permutation of 0..{n - 1}: {list(p)}")
    return p


def compose_perms(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[i] for i in q)


@dataclass(frozen=True)
class PermAction:
    domain_size: int
    generators: Tuple[Perm, ...] = ()

    def __post_init__(self):
        if self.domain_size < 0:
            raise InputError("domain size must be a natural number")
        gens = tuple(_check_perm(g, self.domain_size) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_cycles(cls, n: int, *generators: Sequence[Sequence[int]]) -> "PermAction":
        """Build generators from cycle notation, e.g. ``from_cycles(3, [[0, 1]])``."""
        perms = []
        for cycles in generators:
            img = list(range(n))
            for cyc in cycles:
                for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                    img[a] = b
            perms.append(tuple(img))
        return cls(n, tuple(perms))

    def identity(self) -> Perm:
        return tuple(range(self.domain_size))

    def elements(self, cap: int = GROUP_ORDER_CAP) -> List[Perm]:
        """All group elements, by breadth-first closure under the generators."""
        e = self.identity()
        seen = {e}
        order = [e]
        queue = deque([e])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = compose_perms(s, g)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    if len(seen) > cap:
                        raise SizeError(f"group closure exceeds {cap} elements")
                    queue.append(h)
        return order

    def order(self, cap: int = GROUP_ORDER_CAP) -> int:
        return len(self.elements(cap))

    def orbits(self) -> List[List[int]]:
        """Orbits of the domain, each sorted, listed by least element."""
        parent = list(range(self.domain_size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for i, j in enumerate(g):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for i in range(self.domain_size):
            groups.setdefault(find(i), []).append(i)
        return [groups[r] for r in sorted(groups)]


def skeletonize(objects: Sequence[Hashable], action: PermAction) -> SkeletalGroupoid:
    """Orbit decomposition of the action groupoid X//G.

    Each orbit becomes one point of mass ``|orbit|/|G| = 1/|Stab|`` tagged by
    the orbit's least representative.
    """
    if len(objects) != action.domain_size:
        raise InputError(
            f"{len(objects)} objects but the action permutes {action.domain_size} elements"
        )
    k = action.order()
    pts = []
    for orbit in action.orbits():
        stab, rem = divmod(k, len(orbit))
        assert rem == 0, "orbit size must divide the group order"
        pts.append(StackyPoint(Fraction(1, stab), ZERO_ANGLE, objects[orbit[0]]))
    return SkeletalGroupoid(pts)


def weak_quotient(set_size: int, action: PermAction) -> SkeletalGroupoid:
    """The weak quotient of {0..set_size-1} by the group generated by ``action``."""
    if set_size != action.domain_size:
        raise InputError(f"action permutes {action.domain_size} elements, not {set_size}")
    g = skeletonize(list(range(set_size)), action)
    return g.map_points(lambda p: StackyPoint(p.mass))
