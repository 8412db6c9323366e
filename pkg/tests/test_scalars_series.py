from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from fockcat.errors import CompositionError
from fockcat.scalars import Angle, PhasedScalar, h, h_exact
from fockcat.series import (
    PowerSeries,
    series_add,
    series_compose,
    series_derivative,
    series_eval,
    series_mul,
    series_scale,
)

turns = hs.fractions(min_value=0, max_value=1, max_denominator=24)
mags = hs.fractions(min_value=0, max_value=20, max_denominator=30)
phased = hs.lists(hs.tuples(mags, turns), max_size=4).map(
    lambda ts: PhasedScalar((m, Angle.of_turns(t)) for m, t in ts)
)


def bell(n):
    row, out = [1], [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


class TestAngle:
    def test_turns_normalize(self):
        assert Angle.of_turns(Fraction(5, 4)) == Angle.of_turns(Fraction(1, 4))
        assert -Angle.of_turns(Fraction(1, 4)) == Angle.of_turns(Fraction(3, 4))

    def test_exact_plus_real_demotes(self):
        a = Angle.of_turns(Fraction(1, 2)) + Angle.of_radians(0.1)
        assert not a.is_exact
        assert a.to_radians() == pytest.approx(3.141592653589793 + 0.1)

    def test_json(self):
        assert Angle.of_turns(Fraction(1, 3)).to_json() == {"phase_turns": "1/3"}


class TestH:
    def test_identity_phase(self):
        assert h(PhasedScalar.rational(1)) == 1 + 0j

    def test_interference(self):
        x = PhasedScalar([(Fraction(1), Angle.of_turns(0)), (Fraction(1), Angle.of_turns(Fraction(1, 2)))])
        assert h(x) == 0
        assert h_exact(x) == (0, 0)
        assert not x.is_zero()

    def test_quarter_turn(self):
        x = PhasedScalar.rational(Fraction(3, 2), Angle.of_turns(Fraction(1, 4)))
        assert h(x) == 1.5j

    def test_non_quarter_is_inexact(self):
        x = PhasedScalar.rational(1, Angle.of_turns(Fraction(1, 3)))
        assert h_exact(x) is None
        assert h(x) == pytest.approx(complex(-0.5, 3**0.5 / 2), abs=1e-15)

    @given(phased, phased)
    def test_homomorphism(self, x, y):
        assert abs(h(x * y) - h(x) * h(y)) <= 1e-12 * max(1, abs(h(x)) * abs(h(y)))
        assert abs(h(x + y) - h(x) - h(y)) <= 1e-12 * max(1, abs(h(x)) + abs(h(y)))


class TestRig:
    @given(phased, phased, phased)
    @settings(max_examples=60)
    def test_laws(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * PhasedScalar.rational(1) == x
        assert x + PhasedScalar() == x

    def test_same_angle_merges(self):
        a = Angle.of_turns(Fraction(1, 8))
        x = PhasedScalar.rational(1, a) + PhasedScalar.rational(2, a)
        assert x.terms == ((a, Fraction(3)),)

    @given(phased)
    def test_conjugate_involution(self, x):
        assert x.conjugate().conjugate() == x
        assert abs(h(x.conjugate()) - h(x).conjugate()) <= 1e-12 * max(1, abs(h(x)))

    @given(phased)
    def test_json_roundtrip(self, x):
        assert PhasedScalar.from_json(x.to_json()) == x


class TestSeries:
    def test_mul_unit(self):
        f = PowerSeries([1, 2, 3], 5)
        assert series_mul(f, PowerSeries.one(5)) == f

    def test_geometric_square(self):
        g = PowerSeries([1] * 11, 10)
        # direct convolution oracle: (1/(1-z))^2 has coefficient n+1
        assert series_mul(g, g).coeffs == tuple(Fraction(n + 1) for n in range(11))

    def test_z_times_zn(self):
        z = PowerSeries.monomial(1, 8)
        assert series_mul(z, PowerSeries.monomial(4, 8)) == PowerSeries.monomial(5, 8)

    def test_min_truncation(self):
        f = series_mul(PowerSeries.one(3), PowerSeries.one(7))
        assert f.truncation == 3
        assert series_add(PowerSeries.one(3), PowerSeries.one(7)).truncation == 3

    def test_compose_identity(self):
        f = PowerSeries([3, 1, 4, 1, 5], 4)
        assert series_compose(f, PowerSeries.monomial(1, 4)) == f

    def test_compose_bell(self):
        e = PowerSeries.exp(8)
        em1 = series_add(e, series_scale(PowerSeries.one(8), -1))
        got = series_compose(e, em1)
        assert got.coeffs == tuple(Fraction(b, factorial(n)) for n, b in enumerate(bell(8)))

    def test_compose_polynomial(self):
        got = series_compose(PowerSeries.monomial(2, 6), PowerSeries([0, 1, 1], 6))
        assert got.coeffs[:5] == (0, 0, 1, 2, 1)
        assert all(c == 0 for c in got.coeffs[5:])

    def test_compose_constant_term(self):
        with pytest.raises(CompositionError) as ei:
            series_compose(PowerSeries.exp(4), PowerSeries.exp(4))
        assert ei.value.code == "COMPOSE_CONST"

    def test_derivative_exp(self):
        d = series_derivative(PowerSeries.exp(10))
        assert d.truncation == 9
        assert d == PowerSeries.exp(9)

    def test_derivative_constant(self):
        assert series_derivative(PowerSeries.one(4)) == PowerSeries.zero(3)

    def test_eval(self):
        assert series_eval(PowerSeries([1, 1, 1], 2), 2) == 7

    def test_phased_coefficients(self):
        i = PhasedScalar.rational(1, Angle.of_turns(Fraction(1, 4)))
        f = PowerSeries([0, i], 3)
        sq = series_mul(f, f)
        assert h(sq[2]) == -1
