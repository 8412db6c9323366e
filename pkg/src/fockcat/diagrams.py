"""Feynman diagrams for <Z^k, (Phi^{m_1}//S_{m_1}) ... (Phi^{m_v}//S_{m_v}) Z^l>.

A diagram has ``l`` incoming points, ``k`` outgoing points and a time-ordered
row of vertices, vertex i carrying ``m_i`` legs.  Edges form a perfect
matching of all these half-edges.  Two incoming (or two outgoing) points are
never joined; everything else is allowed, including self-loops at a vertex
and strands passing straight from in to out.

External points are rigid (Z^k is totally ordered) and vertices are never
exchanged, so isomorphisms only permute the legs of each vertex.  A class is
therefore the multigraph obtained by forgetting leg labels, and its
automorphism group is generated by swapping parallel edges and flipping or
swapping self-loops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Dict, Iterator, List, Sequence, Tuple

from .errors import InputError, SizeError

MAX_EXTERNAL = 8
MAX_HALF_EDGES = 24
MAX_CLASSES = 200_000

Endpoint = Tuple  # ("in", i) | ("out", j) | ("v", vertex, leg)
Edge = Tuple[Endpoint, Endpoint]


def _check(k: int, l: int, valences: Sequence[int]) -> Tuple[int, ...]:
    valences = tuple(int(m) for m in valences)
    if k < 0 or l < 0 or any(m < 0 for m in valences):
        raise InputError("k, l and valences must be natural numbers")
    if k > MAX_EXTERNAL or l > MAX_EXTERNAL:
        raise SizeError(f"at most {MAX_EXTERNAL} external points per side", k=k, l=l)
    if sum(valences) + k + l > MAX_HALF_EDGES:
        raise SizeError(
            f"total half-edge count {sum(valences) + k + l} exceeds {MAX_HALF_EDGES}",
            half_edges=sum(valences) + k + l,
        )
    return valences


def layer(p: Endpoint, nverts: int) -> int:
    """Time layer: 0 for inputs, 1..v for vertices, v+1 for outputs."""
    if p[0] == "in":
        return 0
    if p[0] == "out":
        return nverts + 1
    return p[1] + 1


def allowed(p: Endpoint, q: Endpoint) -> bool:
    return not (p[0] == q[0] and p[0] in ("in", "out"))


def half_edges(k: int, l: int, valences: Sequence[int]) -> List[Endpoint]:
    """All endpoints in canonical order: inputs, vertex legs by time, outputs."""
    pts: List[Endpoint] = [("in", i) for i in range(l)]
    for v, m in enumerate(valences):
        pts.extend(("v", v, leg) for leg in range(m))
    pts.extend(("out", j) for j in range(k))
    return pts


def labelled_matchings(k: int, l: int, valences: Sequence[int]) -> Iterator[Tuple[Edge, ...]]:
    """Every leg-labelled diagram, in lexicographic order of the matching."""
    valences = _check(k, l, valences)
    pts = half_edges(k, l, valences)
    if len(pts) % 2:
        return

    def rec(rest):
        if not rest:
            yield ()
            return
        p = rest[0]
        for idx in range(1, len(rest)):
            q = rest[idx]
            if allowed(p, q):
                for tail in rec(rest[1:idx] + rest[idx + 1 :]):
                    yield ((p, q),) + tail

    yield from rec(tuple(pts))


@lru_cache(maxsize=None)
def _count(ins: int, outs: int, legs: Tuple[int, ...]) -> int:
    if ins:
        # pair the first input with an output or any vertex leg
        total = outs * _count(ins - 1, outs - 1, legs) if outs else 0
        for v, m in enumerate(legs):
            if m:
                total += m * _count(ins - 1, outs, legs[:v] + (m - 1,) + legs[v + 1 :])
        return total
    v = next((i for i, m in enumerate(legs) if m), None)
    if v is None:
        return 1 if outs == 0 else 0
    rest = legs[:v] + (legs[v] - 1,) + legs[v + 1 :]
    total = 0
    if rest[v]:
        total += rest[v] * _count(0, outs, rest[:v] + (rest[v] - 1,) + rest[v + 1 :])
    for w in range(v + 1, len(rest)):
        if rest[w]:
            total += rest[w] * _count(0, outs, rest[:w] + (rest[w] - 1,) + rest[w + 1 :])
    if outs:
        total += outs * _count(0, outs - 1, rest)
    return total


def labelled_count(k: int, l: int, valences: Sequence[int]) -> int:
    """Number of leg-labelled diagrams, by memoized first-point recursion."""
    valences = _check(k, l, valences)
    if (sum(valences) + k + l) % 2:
        return 0
    return _count(l, k, valences)


def vev(k: int, l: int, valences: Sequence[int]) -> Fraction:
    """|<Z^k, prod(Phi^m // S_m) Z^l>| = labelled count / prod m!."""
    valences = _check(k, l, valences)
    return Fraction(labelled_count(k, l, valences), prod(factorial(m) for m in valences))


# --- unlabelled classes --------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    """One isomorphism class, stored through a leg-labelled representative."""

    k: int
    l: int
    valences: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    aut: int

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.aut)

    def crossings(self) -> Tuple[int, ...]:
        """Strands alive in each time interval between consecutive layers."""
        v = len(self.valences)
        out = [0] * (v + 1)
        for p, q in self.edges:
            a, b = sorted((layer(p, v), layer(q, v)))
            for j in range(a, b):
                out[j] += 1
        return tuple(out)

    def shape(self) -> Tuple:
        return class_key(self.edges)

    def to_json(self) -> dict:
        return {"edges": [[list(p), list(q)] for p, q in self.edges], "aut": self.aut}


def _node(p: Endpoint):
    return p if p[0] != "v" else ("v", p[1])


def class_key(edges: Sequence[Edge]) -> Tuple:
    """Canonical form: the multiset of edges with leg labels forgotten."""
    return tuple(sorted(tuple(sorted((_node(p), _node(q)))) for p, q in edges))


def _multigraphs(k, l, valences):
    """Yield (in_targets, out_targets, loops, between) for every class.

    in_targets[i] is ("out", j) or ("v", x); out_targets[j] is ("v", x) or None
    when the output is fed directly by an input; between[(x, y)] counts edges
    x--y for x < y.
    """
    nv = len(valences)

    def assign_ins(i, caps, outs_used, acc):
        if i == l:
            yield from assign_outs(0, caps, outs_used, tuple(acc), [])
            return
        for j in range(k):
            if j not in outs_used:
                yield from assign_ins(i + 1, caps, outs_used | {j}, acc + [("out", j)])
        for x in range(nv):
            if caps[x]:
                c = list(caps)
                c[x] -= 1
                yield from assign_ins(i + 1, tuple(c), outs_used, acc + [("v", x)])

    def assign_outs(j, caps, outs_used, ins, acc):
        if j == k:
            yield from internal(0, caps, ins, tuple(acc), (), {})
            return
        if j in outs_used:
            yield from assign_outs(j + 1, caps, outs_used, ins, acc + [None])
            return
        for x in range(nv):
            if caps[x]:
                c = list(caps)
                c[x] -= 1
                yield from assign_outs(j + 1, tuple(c), outs_used, ins, acc + [("v", x)])

    def internal(x, caps, ins, outs, loops, between):
        if x == nv:
            yield ins, outs, loops, dict(between)
            return
        cap = caps[x]
        for s in range(cap // 2 + 1):
            rem = cap - 2 * s
            for dist in _distribute(rem, caps, x + 1):
                c = list(caps)
                c[x] = 0
                b = dict(between)
                for y, e in dist:
                    c[y] -= e
                    b[(x, y)] = e
                yield from internal(x + 1, tuple(c), ins, outs, loops + (s,), b)

    yield from assign_ins(0, tuple(valences), frozenset(), [])


def _distribute(total, caps, start):
    """Ways to send ``total`` edges to vertices start.. within their capacities."""
    if total == 0:
        yield ()
        return
    if start >= len(caps):
        return
    for e in range(min(total, caps[start]), -1, -1):
        for rest in _distribute(total - e, caps, start + 1):
            yield (((start, e),) if e else ()) + rest


def _realize(k, l, valences, ins, outs, loops, between) -> Tuple[Tuple[Edge, ...], int]:
    """A leg-labelled representative and its automorphism order."""
    next_leg = [0] * len(valences)

    def leg(x):
        p = ("v", x, next_leg[x])
        next_leg[x] += 1
        return p

    edges: List[Edge] = []
    for i, t in enumerate(ins):
        edges.append((("in", i), ("out", t[1]) if t[0] == "out" else leg(t[1])))
    for x in range(len(valences)):
        for _ in range(loops[x]):
            edges.append((leg(x), leg(x)))
        for y in range(x + 1, len(valences)):
            for _ in range(between.get((x, y), 0)):
                edges.append((leg(x), leg(y)))
    for j, t in enumerate(outs):
        if t is not None:
            edges.append((leg(t[1]), ("out", j)))
    aut = prod(2**s * factorial(s) for s in loops) * prod(factorial(e) for e in between.values())
    return tuple(sorted(edges, key=_edge_sort_key)), aut


def _endpoint_key(p):
    order = {"in": 0, "v": 1, "out": 2}
    return (order[p[0]],) + tuple(p[1:])


def _edge_sort_key(e):
    return tuple(_endpoint_key(p) for p in e)


@dataclass(frozen=True)
class DiagramGroupoid:
    k: int
    l: int
    valences: Tuple[int, ...]
    classes: Tuple[Diagram, ...]
    labelled_count: int
    symmetry_order: int = field(default=1)

    @property
    def cardinality(self) -> Fraction:
        """Sum over classes of 1/|Aut|."""
        return sum((d.weight for d in self.classes), Fraction(0))

    @property
    def quotient_cardinality(self) -> Fraction:
        """labelled_count / prod m_i!."""
        return Fraction(self.labelled_count, self.symmetry_order)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "valences": list(self.valences),
            "classes": [d.to_json() for d in self.classes],
            "labelled_count": self.labelled_count,
            "cardinality": _frac(self.cardinality),
        }


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def enumerate_diagrams(
    k: int, l: int, valences: Sequence[int], max_classes: int = MAX_CLASSES
) -> DiagramGroupoid:
    """All isomorphism classes with automorphism orders.

    The labelled count is computed independently of the class enumeration and
    the two cardinalities are checked against each other.
    """
    valences = _check(k, l, valences)
    sym = prod(factorial(m) for m in valences)
    if (sum(valences) + k + l) % 2:
        return DiagramGroupoid(k, l, valences, (), 0, sym)
    classes = []
    for ins, outs, loops, between in _multigraphs(k, l, valences):
        edges, aut = _realize(k, l, valences, ins, outs, loops, between)
        classes.append(Diagram(k, l, valences, edges, aut))
        if len(classes) > max_classes:
            raise SizeError(f"more than {max_classes} diagram classes", classes=len(classes))
    classes.sort(key=lambda d: tuple(_edge_sort_key(e) for e in d.edges))
    g = DiagramGroupoid(k, l, valences, tuple(classes), labelled_count(k, l, valences), sym)
    if g.cardinality != g.quotient_cardinality:
        raise ArithmeticError(
            f"class sum {g.cardinality} disagrees with labelled count quotient "
            f"{g.quotient_cardinality}"
        )
    return g


def classes_by_crossings(g: DiagramGroupoid) -> Dict[Tuple[int, ...], Fraction]:
    """Total weight of the classes sharing each strand-count profile."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for d in g.classes:
        c = d.crossings()
        out[c] = out.get(c, Fraction(0)) + d.weight
    return out
