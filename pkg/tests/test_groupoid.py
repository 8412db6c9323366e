import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from fockcat.errors import InputError, SizeError
from fockcat.groupoid import (
    PermAction,
    SkeletalGroupoid,
    StackyPoint,
    cardinality,
    compose_perms,
    product,
    skeletonize,
    sum_,
    weak_quotient,
)
from fockcat.scalars import Angle, PhasedScalar


def swap3():
    return PermAction.from_cycles(3, [(0, 1)])


def brute_stabilizer_masses(n, action):
    """Orbit representatives with 1/|Stab| from the full element list."""
    elems = action.elements()
    seen, masses = set(), []
    for x in range(n):
        if x in seen:
            continue
        orbit = {g[x] for g in elems}
        seen |= orbit
        stab = sum(1 for g in elems if g[x] == x)
        masses.append(Fraction(1, stab))
    return sorted(masses)


def masses(g):
    return sorted(p.mass for p in g.iter_points())


class TestCardinality:
    def test_empty(self):
        assert cardinality(SkeletalGroupoid.empty()) == 0

    def test_three_element_set(self):
        assert cardinality(SkeletalGroupoid.discrete(3)) == 3

    def test_z2_on_three(self):
        g = weak_quotient(3, swap3())
        assert masses(g) == [Fraction(1, 2), Fraction(1)]
        assert cardinality(g) == Fraction(3, 2)

    def test_phased_point(self):
        g = SkeletalGroupoid.point(Fraction(1, 2), Angle.of_turns(Fraction(1, 4)))
        assert cardinality(g) == PhasedScalar.rational(Fraction(1, 2), Angle.of_turns(Fraction(1, 4)))

    def test_mass_must_be_positive(self):
        with pytest.raises(InputError):
            StackyPoint(Fraction(0))


class TestSumProduct:
    def test_sum_identity(self):
        g = weak_quotient(3, swap3())
        assert sum_(g, SkeletalGroupoid.empty()) == g

    def test_sum_cardinality(self):
        g = sum_(weak_quotient(3, swap3()), SkeletalGroupoid.discrete(2))
        assert cardinality(g) == Fraction(7, 2)

    def test_doubling(self):
        g = weak_quotient(3, swap3())
        assert cardinality(g + g) == 2 * Fraction(3, 2)

    def test_product_unit(self):
        g = weak_quotient(5, PermAction.from_cycles(5, [(0, 1, 2)]))
        assert product(g, SkeletalGroupoid.point(1)) == g

    def test_product_masses(self):
        g = product(SkeletalGroupoid.point(Fraction(1, 2)), SkeletalGroupoid.point(Fraction(1, 3)))
        assert masses(g) == [Fraction(1, 6)]

    def test_product_phases_add(self):
        a, b = Angle.of_turns(Fraction(1, 8)), Angle.of_turns(Fraction(1, 4))
        g = product(SkeletalGroupoid.point(1, a), SkeletalGroupoid.point(1, b))
        [pt] = list(g.iter_points())
        assert pt.phase == Angle.of_turns(Fraction(3, 8))

    @given(
        hs.lists(hs.integers(1, 12), max_size=4),
        hs.lists(hs.integers(1, 12), max_size=4),
    )
    def test_cardinality_is_additive_and_multiplicative(self, xs, ys):
        g1 = SkeletalGroupoid(StackyPoint(Fraction(1, x)) for x in xs)
        g2 = SkeletalGroupoid(StackyPoint(Fraction(1, y)) for y in ys)
        assert cardinality(g1 + g2) == cardinality(g1) + cardinality(g2)
        assert cardinality(g1 * g2) == cardinality(g1) * cardinality(g2)

    def test_json_roundtrip(self):
        g = weak_quotient(6, PermAction.from_cycles(6, [(0, 1, 2)], [(0, 1)]))
        assert SkeletalGroupoid.from_json(g.to_json()) == g


class TestActions:
    def test_rejects_non_bijection(self):
        with pytest.raises(InputError):
            PermAction(3, ((0, 0, 1),))

    def test_trivial_group(self):
        g = weak_quotient(4, PermAction(4, ()))
        assert masses(g) == [Fraction(1)] * 4

    def test_regular_s3(self):
        # S3 acting on itself by left multiplication
        elems = list(permutations(range(3)))
        index = {p: i for i, p in enumerate(elems)}
        gens = []
        for s in [(1, 0, 2), (1, 2, 0)]:
            gens.append(tuple(index[compose_perms(s, p)] for p in elems))
        act = PermAction(6, tuple(gens))
        assert act.order() == 6
        assert cardinality(weak_quotient(6, act)) == 1

    def test_four_cycle_skeleton(self):
        g = skeletonize(["a", "b", "c", "d"], PermAction.from_cycles(4, [(0, 1, 2, 3)]))
        assert masses(g) == [Fraction(1)]

    def test_fixed_points_only(self):
        g = skeletonize(["x", "y"], PermAction(2, ()))
        assert sorted(p.tag for p in g.iter_points()) == ["x", "y"]
        assert masses(g) == [1, 1]

    def test_s3_on_first_three(self):
        act = PermAction.from_cycles(6, [(0, 1, 2)], [(0, 1)])
        g = weak_quotient(6, act)
        # an S3 orbit of size 3 has stabilizer order 2; the three fixed points keep all of S3
        assert masses(g) == [Fraction(1, 6)] * 3 + [Fraction(1, 2)]
        assert masses(g) == brute_stabilizer_masses(6, act)

    def test_order_cap(self):
        act = PermAction.from_cycles(10, [tuple(range(10))], [(0, 1)])
        with pytest.raises(SizeError):
            act.elements(cap=1000)

    def test_random_against_brute_force(self):
        rng = random.Random(7)
        for _ in range(60):
            n = rng.randint(1, 7)
            gens = []
            for _ in range(rng.randint(0, 2)):
                p = list(range(n))
                rng.shuffle(p)
                gens.append(tuple(p))
            act = PermAction(n, tuple(gens))
            g = weak_quotient(n, act)
            assert masses(g) == brute_stabilizer_masses(n, act)
            assert cardinality(g) == Fraction(n, act.order())

    @settings(max_examples=40, deadline=None)
    @given(hs.integers(1, 7), hs.lists(hs.permutations(list(range(7))), max_size=2))
    def test_weak_quotient_law(self, n, perms):
        gens = tuple(tuple(x for x in p if x < n) for p in perms)
        act = PermAction(n, gens)
        assert cardinality(weak_quotient(n, act)) == Fraction(n, act.order())

    def test_orbits_partition(self):
        act = PermAction.from_cycles(7, [(0, 3)], [(1, 2, 4)])
        orbits = act.orbits()
        assert sorted(x for o in orbits for x in o) == list(range(7))
        assert len(orbits) == 4
