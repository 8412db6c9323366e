"""Stuff types as graded stacky fibers over finite-set sizes.

``fibers[n]`` is the (skeletal, post-quotient) groupoid of Psi-structures
lying over an n-element set; its cardinality is the n-th coefficient of the
cardinality series.  Everything here is cardinality-faithful: two stuff types
with the same fibers as multisets of (mass, phase, tag) are not told apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Tuple

from .errors import CompositionError, InputError
from .groupoid import SkeletalGroupoid, StackyPoint, cardinality, product, sum_
from .scalars import ZERO_ANGLE, Angle, PhasedScalar
from .series import DEFAULT_TRUNCATION, PowerSeries, series_compose, series_eval
from .species import Species


class StuffType:
    __slots__ = ("fibers", "truncation")

    def __init__(self, fibers: Sequence[SkeletalGroupoid], truncation: int):
        if truncation < 0:
            raise InputError("truncation must be a natural number")
        fibers = list(fibers[: truncation + 1])
        fibers += [SkeletalGroupoid.empty()] * (truncation + 1 - len(fibers))
        self.fibers: Tuple[SkeletalGroupoid, ...] = tuple(fibers)
        self.truncation = truncation

    def __getitem__(self, n: int) -> SkeletalGroupoid:
        return self.fibers[n]

    def __eq__(self, other):
        if not isinstance(other, StuffType):
            return NotImplemented
        return self.truncation == other.truncation and self.fibers == other.fibers

    def __hash__(self):
        return hash((self.fibers, self.truncation))

    def __repr__(self):
        return f"StuffType(truncation={self.truncation}, fibers={list(self.fibers)!r})"

    def __add__(self, other: "StuffType") -> "StuffType":
        return stuff_sum(self, other)

    def __mul__(self, other: "StuffType") -> "StuffType":
        return stuff_product(self, other)

    def truncate(self, truncation: int) -> "StuffType":
        return StuffType(self.fibers, min(truncation, self.truncation))

    def cardinality(self) -> PowerSeries:
        return stuff_cardinality(self)

    def map_fibers(self, fn) -> "StuffType":
        return StuffType([fn(n, g) for n, g in enumerate(self.fibers)], self.truncation)

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "fibers": [{"n": n, **g.to_json()} for n, g in enumerate(self.fibers)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StuffType":
        t = int(data["truncation"])
        fibers = [SkeletalGroupoid.empty()] * (t + 1)
        for f in data["fibers"]:
            fibers[int(f["n"])] = SkeletalGroupoid.from_json(f)
        return cls(fibers, t)


# --- constructors --------------------------------------------------------


def empty(truncation: int = DEFAULT_TRUNCATION) -> StuffType:
    return StuffType([], truncation)


def from_species(F: Species) -> StuffType:
    """Fiber n: |F_n| points of mass 1/n! (the weak quotient F_n // S_n)."""
    return StuffType(
        [
            SkeletalGroupoid([(StackyPoint(Fraction(1, factorial(n))), c)]) if c else SkeletalGroupoid()
            for n, c in enumerate(F.counts)
        ],
        F.truncation,
    )


def k_tuple(k: int, truncation: int = DEFAULT_TRUNCATION) -> StuffType:
    """Being the first of a k-tuple of equal-sized finite sets."""
    if k < 1:
        raise InputError("k must be positive")
    return StuffType(
        [SkeletalGroupoid.point(Fraction(1, factorial(n)) ** k) for n in range(truncation + 1)],
        truncation,
    )


def coloured_singleton(colours: SkeletalGroupoid, truncation: int = DEFAULT_TRUNCATION) -> StuffType:
    """Being a one-element set coloured by an object of ``colours``."""
    return StuffType([SkeletalGroupoid.empty(), colours], truncation)


def from_series(f: PowerSeries, tag="composite") -> StuffType:
    """Synthesize fibers carrying each (phased) coefficient as generalized points."""
    fibers = []
    for c in f.coeffs:
        c = PhasedScalar.coerce(c)
        fibers.append(SkeletalGroupoid(StackyPoint(m, a, tag) for a, m in c.terms))
    return StuffType(fibers, f.truncation)


# --- operations ----------------------------------------------------------


def stuff_cardinality(psi: StuffType) -> PowerSeries:
    return PowerSeries([cardinality(g) for g in psi.fibers], psi.truncation)


def stuff_sum(psi: StuffType, phi: StuffType) -> StuffType:
    t = min(psi.truncation, phi.truncation)
    return StuffType([sum_(psi[n], phi[n]) for n in range(t + 1)], t)


def stuff_product(psi: StuffType, phi: StuffType) -> StuffType:
    """Fiber n: the sum over splittings k + (n-k) of product groupoids."""
    t = min(psi.truncation, phi.truncation)
    fibers = []
    for n in range(t + 1):
        g = SkeletalGroupoid.empty()
        for k in range(n + 1):
            if psi[k].is_empty() or phi[n - k].is_empty():
                continue
            g = sum_(g, product(psi[k], phi[n - k]))
        fibers.append(g)
    return StuffType(fibers, t)


def stuff_power(psi: StuffType, k: int) -> StuffType:
    out = StuffType([SkeletalGroupoid.point(1)], psi.truncation)
    for _ in range(k):
        out = stuff_product(out, psi)
    return out


def annihilate(psi: StuffType) -> StuffType:
    """A: structures on S + {*}.  Fiber n is fiber n+1 with masses scaled by n+1."""
    if psi.truncation == 0:
        return empty(0)
    return StuffType(
        [
            psi[n + 1].map_points(lambda p, n=n: StackyPoint(p.mass * (n + 1), p.phase, p.tag))
            for n in range(psi.truncation)
        ],
        psi.truncation - 1,
    )


def create(psi: StuffType) -> StuffType:
    """A*: remove a point from the underlying set.  Fiber n is fiber n-1."""
    return StuffType([SkeletalGroupoid.empty()] + list(psi.fibers[:-1]), psi.truncation)


@dataclass(frozen=True)
class InnerProduct:
    """The weak-pullback groupoid, graded by the size of the shared underlying set."""

    components: Tuple[SkeletalGroupoid, ...]

    def total(self) -> SkeletalGroupoid:
        g = SkeletalGroupoid.empty()
        for c in self.components:
            g = sum_(g, c)
        return g

    def cardinality(self) -> PhasedScalar:
        return sum((cardinality(c) for c in self.components), PhasedScalar())

    def to_json(self) -> dict:
        return {"components": [{"n": n, **c.to_json()} for n, c in enumerate(self.components)]}


def inner_product(psi: StuffType, phi: StuffType) -> InnerProduct:
    """<Psi, Phi>: pairs of objects over the same n-set plus a bijection.

    For points with automorphism groups K_x, K_y the component is
    S_n // (K_x x K_y), of mass n! * mass(x) * mass(y).
    """
    t = min(psi.truncation, phi.truncation)
    comps = []
    for n in range(t + 1):
        nf = factorial(n)
        pts = []
        for p, j in psi[n].points:
            for q, k in phi[n].points:
                tag = None
                if p.tag is not None or q.tag is not None:
                    tag = (p.tag, q.tag)
                pts.append((StackyPoint(nf * p.mass * q.mass, p.phase + q.phase, tag), j * k))
        comps.append(SkeletalGroupoid(pts))
    return InnerProduct(tuple(comps))


def conjugate(psi: StuffType) -> StuffType:
    return psi.map_fibers(
        lambda n, g: g.map_points(lambda p: StackyPoint(p.mass, -p.phase, p.tag))
    )


def fock_inner(psi: StuffType, phi: StuffType) -> InnerProduct:
    """<Psi | Phi> = <conj(Psi), Phi>, conjugate-linear in the first slot."""
    return inner_product(conjugate(psi), phi)


def phase_scale(psi: StuffType, m: Angle) -> StuffType:
    return psi.map_fibers(
        lambda n, g: g.map_points(lambda p: StackyPoint(p.mass, p.phase + m, p.tag))
    )


def groupoid_scale(psi: StuffType, G: SkeletalGroupoid) -> StuffType:
    return psi.map_fibers(lambda n, g: product(g, G))


def evaluate(psi: StuffType, colours: SkeletalGroupoid):
    """Cardinality of Psi(Z0): the truncated series |Psi| evaluated at |Z0|."""
    return series_eval(stuff_cardinality(psi), cardinality(colours))


def compose(psi: StuffType, phi: StuffType) -> StuffType:
    """Psi o Phi, synthesized from the composite cardinality series."""
    if not phi[0].is_empty():
        raise CompositionError(
            "cannot compose: the inner stuff type has objects over the empty set "
            "(an E^{E^Z}-like composite has no finite fibers here)"
        )
    return from_series(series_compose(stuff_cardinality(psi), stuff_cardinality(phi)))
