import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from fockcat import species as sp
from fockcat import stufftype as st
from fockcat.checks import random_stuff_type
from fockcat.errors import CompositionError
from fockcat.groupoid import SkeletalGroupoid, StackyPoint, cardinality, weak_quotient, PermAction
from fockcat.scalars import Angle, PhasedScalar, h
from fockcat.series import PowerSeries, series_mul
from fockcat.stufftype import StuffType

seeds = hs.integers(0, 2**32 - 1)


def rand_st(seed, truncation=8):
    return random_stuff_type(random.Random(seed), truncation=truncation)


def zpow(n, t=8):
    return st.from_species(sp.species_power(sp.Z(t), n))


def bell(n):
    row, out = [1], [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


class TestCardinality:
    def test_exponential(self):
        c = st.stuff_cardinality(st.from_species(sp.E(8)))
        assert c.coeffs == tuple(Fraction(1, factorial(n)) for n in range(9))

    def test_k_tuple(self):
        c = st.stuff_cardinality(st.k_tuple(3, 6))
        assert c.coeffs == tuple(Fraction(1, factorial(n)) ** 3 for n in range(7))

    def test_empty(self):
        assert st.stuff_cardinality(st.empty(5)) == PowerSeries.zero(5)

    def test_z_is_one_rigid_point(self):
        psi = st.from_species(sp.Z(4))
        assert [len(psi[n]) for n in range(5)] == [0, 1, 0, 0, 0]
        assert [p.mass for p in psi[1].iter_points()] == [1]

    def test_total_orders_fiber(self):
        psi = zpow(4)
        assert [p.mass for p in psi[4].iter_points()] == [Fraction(1, 24)] * 24
        assert cardinality(psi[4]) == 1

    @given(seeds, seeds)
    @settings(max_examples=30)
    def test_sum_and_product(self, s1, s2):
        psi, phi = rand_st(s1), rand_st(s2)
        assert st.stuff_cardinality(psi + phi) == st.stuff_cardinality(psi) + st.stuff_cardinality(phi)
        assert st.stuff_cardinality(psi * phi) == series_mul(
            st.stuff_cardinality(psi), st.stuff_cardinality(phi)
        )

    def test_json_roundtrip(self):
        psi = rand_st(11)
        assert StuffType.from_json(psi.to_json()) == psi


class TestLadder:
    @given(seeds)
    @settings(max_examples=50)
    def test_commutation(self, seed):
        psi = rand_st(seed, 16)
        lhs = st.stuff_cardinality(st.annihilate(st.create(psi)))
        rhs = st.stuff_cardinality(st.create(st.annihilate(psi)))
        base = st.stuff_cardinality(psi)
        assert all(lhs[n] == rhs[n] + base[n] for n in range(16))

    def test_annihilate_matches_species_derivative(self):
        F = sp.O(8)
        assert st.stuff_cardinality(st.annihilate(st.from_species(F))) == sp.species_derivative(F).gf()

    def test_create_matches_species_shift(self):
        F = sp.O(8)
        assert st.stuff_cardinality(st.create(st.from_species(F))) == sp.species_shift(F).gf()


class TestInnerProduct:
    def test_orthogonality(self):
        for n in range(7):
            for m in range(7):
                got = st.inner_product(zpow(n), zpow(m)).cardinality()
                assert got == (factorial(n) if n == m else 0)

    def test_cosh_sinh(self):
        ip = st.inner_product(st.from_species(sp.Eeven(10)), st.from_species(sp.Eodd(10)))
        assert ip.total().is_empty()

    def test_en_with_itself(self):
        for n in range(6):
            En = st.from_species(sp.En(n, 6))
            assert st.inner_product(En, En).cardinality() == Fraction(1, factorial(n))

    def test_mass_formula(self):
        a = Angle.of_turns(Fraction(1, 8))
        psi = StuffType([SkeletalGroupoid(), SkeletalGroupoid(), SkeletalGroupoid.point(Fraction(1, 2), a)], 2)
        phi = StuffType([SkeletalGroupoid(), SkeletalGroupoid(), SkeletalGroupoid.point(Fraction(1, 3), a)], 2)
        [pt] = list(st.inner_product(psi, phi).components[2].iter_points())
        assert pt.mass == 2 * Fraction(1, 2) * Fraction(1, 3)
        assert pt.phase == Angle.of_turns(Fraction(1, 4))

    @given(seeds, seeds)
    @settings(max_examples=30)
    def test_symmetric(self, s1, s2):
        psi, phi = rand_st(s1), rand_st(s2)
        assert st.inner_product(psi, phi).cardinality() == st.inner_product(phi, psi).cardinality()

    @given(seeds, seeds)
    @settings(max_examples=30)
    def test_fock_inner_matches_complex_pairing(self, s1, s2):
        psi, phi = rand_st(s1), rand_st(s2)
        a, b = st.stuff_cardinality(psi), st.stuff_cardinality(phi)
        want = sum(factorial(n) * h(a[n]).conjugate() * h(b[n]) for n in range(9))
        got = h(st.fock_inner(psi, phi).cardinality())
        assert abs(got - want) <= 1e-9 * max(1, abs(want))

    @given(seeds, seeds)
    @settings(max_examples=30)
    def test_fock_conjugate_symmetry(self, s1, s2):
        psi, phi = rand_st(s1), rand_st(s2)
        assert st.fock_inner(psi, phi).cardinality() == st.fock_inner(phi, psi).cardinality().conjugate()

    def test_phase_cancellation(self):
        theta = Angle.of_turns(Fraction(1, 6))
        for n in range(5):
            psi = st.phase_scale(zpow(n), theta)
            c = st.fock_inner(psi, psi).cardinality()
            assert c.terms == ((Angle.of_turns(0), Fraction(factorial(n))),)

    def test_interference_cross_state(self):
        flip = Angle.of_turns(Fraction(1, 2))
        plus = StuffType([SkeletalGroupoid(), SkeletalGroupoid.point(1)], 1)
        minus = StuffType([SkeletalGroupoid(), SkeletalGroupoid.point(1, flip)], 1)
        cross = st.fock_inner(plus + minus, plus + minus)
        assert h(st.fock_inner(plus, minus).cardinality()) == -1
        both = StuffType([SkeletalGroupoid(), SkeletalGroupoid([StackyPoint(1), StackyPoint(1, flip)])], 1)
        assert h(st.inner_product(both, StuffType([SkeletalGroupoid(), SkeletalGroupoid.point(1)], 1)).cardinality()) == 0
        assert h(cross.cardinality()) == 0


class TestConjugateAndScale:
    @given(seeds)
    def test_involution(self, seed):
        psi = rand_st(seed)
        assert st.conjugate(st.conjugate(psi)) == psi

    def test_phase_scale_zero(self):
        psi = rand_st(5)
        assert st.phase_scale(psi, Angle.of_turns(0)) == psi

    def test_groupoid_scale_unit(self):
        psi = rand_st(6)
        assert st.groupoid_scale(psi, SkeletalGroupoid.point(1)) == psi

    def test_groupoid_scale_cardinality(self):
        psi = rand_st(8)
        G = weak_quotient(3, PermAction.from_cycles(3, [(0, 1)]))
        got = st.stuff_cardinality(st.groupoid_scale(psi, G))
        assert got == st.stuff_cardinality(psi).map(lambda c: c * Fraction(3, 2))


class TestEvaluateCompose:
    def test_evaluate_exponential(self):
        G = weak_quotient(3, PermAction.from_cycles(3, [(0, 1)]))
        got = st.evaluate(st.from_species(sp.E(10)), G)
        want = sum(Fraction(3, 2) ** n / factorial(n) for n in range(11))
        assert got == want

    def test_evaluate_at_empty(self):
        psi = rand_st(9)
        assert st.evaluate(psi, SkeletalGroupoid.empty()) == cardinality(psi[0])

    def test_evaluate_linear(self):
        G = SkeletalGroupoid.discrete(5)
        assert st.evaluate(st.from_species(sp.Z(4)), G) == 5

    @given(seeds, seeds)
    @settings(max_examples=25)
    def test_evaluate_additive(self, s1, s2):
        psi, phi = rand_st(s1), rand_st(s2)
        G = SkeletalGroupoid([StackyPoint(Fraction(1, 2)), StackyPoint(Fraction(1, 3))])
        assert st.evaluate(psi + phi, G) == st.evaluate(psi, G) + st.evaluate(phi, G)

    def test_bell(self):
        got = st.stuff_cardinality(st.compose(st.from_species(sp.E(8)), st.from_species(sp.Eplus(8))))
        assert got.coeffs == tuple(Fraction(b, factorial(n)) for n, b in enumerate(bell(8)))

    def test_compose_with_z(self):
        psi = st.from_species(sp.O(6))
        assert st.stuff_cardinality(st.compose(psi, st.from_species(sp.Z(6)))) == st.stuff_cardinality(psi)

    def test_coloured_exponential(self):
        G = weak_quotient(3, PermAction.from_cycles(3, [(0, 1)]))
        got = st.stuff_cardinality(st.compose(st.from_species(sp.E(7)), st.coloured_singleton(G, 7)))
        assert got.coeffs == tuple(Fraction(3, 2) ** n / factorial(n) for n in range(8))

    def test_compose_constant_term(self):
        with pytest.raises(CompositionError):
            st.compose(st.from_species(sp.E(5)), st.from_species(sp.E(5)))
