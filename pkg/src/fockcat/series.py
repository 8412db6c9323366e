"""Truncated formal power series over exact (or complex) scalars.

A series of truncation ``t`` stores coefficients of z^0 .. z^t.  Binary
operations on series of different truncations use the smaller one.
Coefficients may be ints/Fractions, :class:`~fockcat.scalars.PhasedScalar`
or complex numbers; all that is required is ``+`` and ``*``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .errors import CompositionError, InputError
from .scalars import PhasedScalar, h, scalar_to_json

DEFAULT_TRUNCATION = 16


def _is_zero(c) -> bool:
    if isinstance(c, PhasedScalar):
        return c.is_zero()
    return c == 0


def _norm(c):
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


class PowerSeries:
    __slots__ = ("coeffs", "truncation")

    def __init__(self, coeffs: Sequence, truncation: int):
        if truncation < 0:
            raise InputError("truncation must be a natural number")
        coeffs = [_norm(c) for c in coeffs[: truncation + 1]]
        coeffs += [Fraction(0)] * (truncation + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.truncation = truncation

    @classmethod
    def zero(cls, truncation: int) -> "PowerSeries":
        return cls([], truncation)

    @classmethod
    def one(cls, truncation: int) -> "PowerSeries":
        return cls([1], truncation)

    @classmethod
    def monomial(cls, n: int, truncation: int, coeff=1) -> "PowerSeries":
        c = [0] * (n + 1)
        c[n] = coeff
        return cls(c, truncation)

    @classmethod
    def exp(cls, truncation: int) -> "PowerSeries":
        return cls([Fraction(1, factorial(n)) for n in range(truncation + 1)], truncation)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], truncation: int) -> "PowerSeries":
        return cls([fn(n) for n in range(truncation + 1)], truncation)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, truncation: int) -> "PowerSeries":
        if truncation > self.truncation:
            raise InputError(f"cannot extend truncation {self.truncation} to {truncation}")
        return PowerSeries(self.coeffs, truncation)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        t = min(self.truncation, other.truncation)
        return PowerSeries([self[n] + other[n] for n in range(t + 1)], t)

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    def __rmul__(self, other) -> "PowerSeries":
        return series_scale(self, other)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.truncation == other.truncation and all(
            _is_zero(a) and _is_zero(b) or a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.truncation, self.coeffs))

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r}, truncation={self.truncation})"

    def map(self, fn: Callable) -> "PowerSeries":
        return PowerSeries([fn(c) for c in self.coeffs], self.truncation)

    def to_complex(self) -> "PowerSeries":
        """Apply h coefficientwise."""
        return self.map(lambda c: c if isinstance(c, complex) else h(c))

    def to_json(self) -> dict:
        return {"truncation": self.truncation, "coeffs": [scalar_to_json(c) for c in self.coeffs]}


def series_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return f + g


def series_scale(f: PowerSeries, c) -> PowerSeries:
    return PowerSeries([c * x for x in f.coeffs], f.truncation)


def series_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product, truncated to the smaller truncation."""
    t = min(f.truncation, g.truncation)
    out = []
    for n in range(t + 1):
        acc = Fraction(0)
        for k in range(n + 1):
            a, b = f[k], g[n - k]
            if _is_zero(a) or _is_zero(b):
                continue
            acc = acc + a * b
        out.append(acc)
    return PowerSeries(out, t)


def series_pow(f: PowerSeries, n: int) -> PowerSeries:
    out = PowerSeries.one(f.truncation)
    for _ in range(n):
        out = series_mul(out, f)
    return out


def series_compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f(g(z)) by Horner's rule; g must have zero constant term."""
    if not _is_zero(g[0]):
        raise CompositionError(
            "inner series has a nonzero constant term; composition is not defined "
            "(an E^{E^Z}-like composite is a stuff type, not a structure type)"
        )
    t = min(f.truncation, g.truncation)
    g = g.truncate(t)
    acc = PowerSeries([f[t]], t)
    for k in range(t - 1, -1, -1):
        acc = series_mul(acc, g) + PowerSeries([f[k]], t)
    return acc


def series_derivative(f: PowerSeries) -> PowerSeries:
    """d/dz; the result knows one coefficient fewer."""
    if f.truncation == 0:
        return PowerSeries.zero(0)
    return PowerSeries([(n + 1) * f[n + 1] for n in range(f.truncation)], f.truncation - 1)


def series_shift(f: PowerSeries) -> PowerSeries:
    """Multiplication by z, keeping the truncation."""
    return PowerSeries([Fraction(0)] + list(f.coeffs[:-1]), f.truncation)


def series_eval(f: PowerSeries, x):
    """Value of the truncated polynomial at x (Horner)."""
    acc = f[f.truncation]
    for k in range(f.truncation - 1, -1, -1):
        acc = acc * x + f[k]
    return acc
