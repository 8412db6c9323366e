from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from fockcat import species as sp
from fockcat.errors import CompositionError, DivergenceError
from fockcat.series import series_compose, series_derivative, series_mul
from fockcat.species import Species

counts = hs.lists(hs.integers(0, 50), min_size=13, max_size=13)
species12 = counts.map(lambda c: Species(c, 12))


def catalan(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def bell(n):
    row, out = [1], [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


def test_atoms():
    assert sp.Z(4).counts == (0, 1, 0, 0, 0)
    assert sp.E(4).counts == (1,) * 5
    assert sp.Eplus(4).counts == (0, 1, 1, 1, 1)
    assert sp.O(5).counts == tuple(factorial(n) for n in range(6))
    assert sp.En(3, 5).counts == (0, 0, 0, 1, 0, 0)


class TestSum:
    def test_zero(self):
        F = sp.O(6)
        assert sp.species_sum(F, sp.zero(6)) == F

    def test_two_copies(self):
        assert sp.species_sum(sp.E(5), sp.E(5)).counts == (2,) * 6

    def test_parity_split(self):
        assert sp.species_sum(sp.Eeven(9), sp.Eodd(9)) == sp.E(9)


class TestProduct:
    def test_total_orders(self):
        Z = sp.Z(8)
        F = sp.one(8)
        for n in range(1, 6):
            F = sp.species_product(Z, F)
            assert F.counts[n] == factorial(n)
            assert sum(F.counts) == factorial(n)

    def test_two_coloured_sets(self):
        assert sp.species_product(sp.E(10), sp.E(10)).counts == tuple(2**n for n in range(11))

    def test_unit(self):
        F = sp.O(7)
        assert sp.species_product(F, sp.one(7)) == F

    def test_binomial_convolution(self):
        F, G = Species([1, 2, 3, 4], 3), Species([5, 6, 7, 8], 3)
        want = [sum(comb(n, k) * F[k] * G[n - k] for k in range(n + 1)) for n in range(4)]
        assert sp.species_product(F, G).counts == tuple(want)

    @settings(max_examples=40)
    @given(species12, species12)
    def test_gf_of_product(self, F, G):
        assert sp.species_product(F, G).gf() == series_mul(F.gf(), G.gf())


class TestCompose:
    def test_set_partitions(self):
        assert sp.species_compose(sp.E(10), sp.Eplus(10)).counts == tuple(bell(10))

    def test_identity(self):
        F = sp.O(8)
        assert sp.species_compose(F, sp.Z(8)) == F

    def test_z_squared(self):
        Z2 = sp.species_power(sp.Z(6), 2)
        assert sp.species_compose(Z2, sp.Z(6)) == Z2

    def test_constant_term(self):
        with pytest.raises(CompositionError):
            sp.species_compose(sp.E(6), sp.E(6))

    @settings(max_examples=30)
    @given(species12, species12)
    def test_gf_of_compose(self, F, G):
        G = Species((0,) + G.counts[1:], 12)
        assert sp.species_compose(F, G).gf() == series_compose(F.gf(), G.gf())


class TestLadder:
    def test_derivative_of_e(self):
        assert sp.species_derivative(sp.E(8)) == sp.E(7)

    def test_derivative_of_zn(self):
        Zn = sp.species_power(sp.Z(8), 4)
        want = sp.species_power(sp.Z(7), 3)
        assert sp.species_derivative(Zn).counts == tuple(4 * c for c in want.counts)

    def test_derivative_of_lists(self):
        assert sp.species_derivative(sp.O(10)) == sp.species_power(sp.O(9), 2)

    def test_shift_of_one(self):
        assert sp.species_shift(sp.one(6)) == sp.Z(6)

    def test_shift_of_zn(self):
        Zn = sp.species_power(sp.Z(8), 3)
        assert sp.species_shift(Zn).counts[4] == factorial(4)
        assert sp.species_shift(Zn) == sp.species_product(sp.Z(8), Zn)

    def test_derivative_gf(self):
        F = Species([3, 1, 4, 1, 5, 9, 2], 6)
        assert sp.species_derivative(F).gf() == series_derivative(F.gf())

    @given(counts.map(lambda c: Species(c + [7, 1, 2, 3], 16)))
    def test_commutation(self, F):
        lhs = sp.species_derivative(sp.species_shift(F)).gf()
        rhs = sp.species_shift(sp.species_derivative(F)).gf()
        base = F.gf()
        for n in range(16):
            assert lhs[n] - rhs[n] == base[n]


class TestFixedPoint:
    def test_binary_trees(self):
        B = sp.solve_fixed_point(lambda F: sp.Z(12) + sp.species_power(F, 2), 12)
        gf = B.gf()
        assert [gf[n] for n in range(1, 5)] == [1, 1, 2, 5]
        cat = catalan(12)
        assert all(B[n] == factorial(n) * cat[n - 1] for n in range(1, 13))

    def test_lists(self):
        L = sp.solve_fixed_point(lambda F: sp.one(10) + sp.species_product(sp.Z(10), F), 10)
        assert L == sp.O(10)

    def test_non_contractive(self):
        with pytest.raises(DivergenceError) as ei:
            sp.solve_fixed_point(lambda F: sp.one(6) + F + F, 6)
        assert ei.value.code == "DIVERGED"


def test_from_gf_rejects_fractional():
    from fockcat.series import PowerSeries

    with pytest.raises(ArithmeticError):
        Species.from_gf(PowerSeries([0, 0, Fraction(1, 3)], 2))


def test_json_roundtrip():
    F = sp.species_compose(sp.E(6), sp.Eplus(6))
    assert Species.from_json(F.to_json()) == F
