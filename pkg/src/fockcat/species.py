"""Structure types (species) stored as labelled counting sequences.

``Species.counts[n]`` is the number of structures on an n-element set; the
generating function has coefficients ``counts[n] / n!``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from .errors import CompositionError, DivergenceError, InputError
from .series import DEFAULT_TRUNCATION, PowerSeries, series_compose


class Species:
    __slots__ = ("counts", "truncation")

    def __init__(self, counts: Sequence[int], truncation: int):
        if truncation < 0:
            raise InputError("truncation must be a natural number")
        counts = [int(c) for c in counts[: truncation + 1]]
        if any(c < 0 for c in counts):
            raise InputError("species counts must be non-negative")
        counts += [0] * (truncation + 1 - len(counts))
        self.counts = tuple(counts)
        self.truncation = truncation

    def __getitem__(self, n):
        return self.counts[n]

    def __eq__(self, other):
        if not isinstance(other, Species):
            return NotImplemented
        return self.counts == other.counts and self.truncation == other.truncation

    def __hash__(self):
        return hash((self.counts, self.truncation))

    def __repr__(self):
        return f"Species({list(self.counts)}, truncation={self.truncation})"

    def __add__(self, other):
        return species_sum(self, other)

    def __mul__(self, other):
        return species_product(self, other)

    def __pow__(self, k: int):
        return species_power(self, k)

    def truncate(self, truncation: int) -> "Species":
        return Species(self.counts, min(truncation, self.truncation))

    def gf(self) -> PowerSeries:
        """Exponential generating function sum counts[n] z^n / n!."""
        return PowerSeries(
            [Fraction(c, factorial(n)) for n, c in enumerate(self.counts)], self.truncation
        )

    @classmethod
    def from_gf(cls, f: PowerSeries) -> "Species":
        counts = []
        for n, c in enumerate(f.coeffs):
            v = Fraction(c) * factorial(n)
            if v.denominator != 1:
                raise ArithmeticError(f"coefficient {n} times {n}! is not an integer: {v}")
            counts.append(v.numerator)
        return cls(counts, f.truncation)

    def to_json(self) -> dict:
        return {"truncation": self.truncation, "counts": [str(c) for c in self.counts]}

    @classmethod
    def from_json(cls, data: dict) -> "Species":
        return cls([int(c) for c in data["counts"]], int(data["truncation"]))


# --- named atoms ---------------------------------------------------------


def zero(truncation: int = DEFAULT_TRUNCATION) -> Species:
    return Species([], truncation)


def constant(c: int, truncation: int = DEFAULT_TRUNCATION) -> Species:
    """c copies of "being the empty set"."""
    return Species([c], truncation)


def one(truncation: int = DEFAULT_TRUNCATION) -> Species:
    return constant(1, truncation)


def Z(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being a one-element set."""
    return Species([0, 1], truncation)


def E(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being a finite set: one structure on every set."""
    return Species([1] * (truncation + 1), truncation)


def Eplus(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being a nonempty finite set."""
    return Species([0] + [1] * truncation, truncation)


def En(k: int, truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being a k-element set (gf z^k / k!)."""
    return Species([0] * k + [1], truncation)


def O(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Total orders (lists): n! structures on an n-set."""
    return Species([factorial(n) for n in range(truncation + 1)], truncation)


def Eeven(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being an even-sized set (gf cosh z)."""
    return Species([1 - n % 2 for n in range(truncation + 1)], truncation)


def Eodd(truncation: int = DEFAULT_TRUNCATION) -> Species:
    """Being an odd-sized set (gf sinh z)."""
    return Species([n % 2 for n in range(truncation + 1)], truncation)


# --- operations ----------------------------------------------------------


def species_sum(F: Species, G: Species) -> Species:
    t = min(F.truncation, G.truncation)
    return Species([F[n] + G[n] for n in range(t + 1)], t)


def species_product(F: Species, G: Species) -> Species:
    """Split the underlying set in two and put an F- and a G-structure on the parts."""
    t = min(F.truncation, G.truncation)
    return Species(
        [sum(comb(n, k) * F[k] * G[n - k] for k in range(n + 1)) for n in range(t + 1)], t
    )


def species_power(F: Species, k: int) -> Species:
    if k < 0:
        raise InputError("species powers must be natural numbers")
    out = one(F.truncation)
    for _ in range(k):
        out = species_product(out, F)
    return out


def species_compose(F: Species, G: Species) -> Species:
    """F o G via generating functions; G must have no structure on the empty set."""
    if G[0] != 0:
        raise CompositionError(
            f"cannot compose: the inner species has {G[0]} structure(s) on the empty set, "
            "so the composite would be a stuff type which is not a structure type"
        )
    return Species.from_gf(series_compose(F.gf(), G.gf()))


def species_derivative(F: Species) -> Species:
    """A F: structures on S + {*}.  Loses one order of truncation."""
    if F.truncation == 0:
        return zero(0)
    return Species(F.counts[1:], F.truncation - 1)


def species_shift(F: Species) -> Species:
    """A* F = Z . F: pick one element, put an F-structure on the rest."""
    return Species([0] + [n * F[n - 1] for n in range(1, F.truncation + 1)], F.truncation)


def solve_fixed_point(rhs: Callable[[Species], Species], truncation: int) -> Species:
    """Least solution of F = rhs(F), by iteration from the empty species.

    Coefficient n must settle within n+1 iterations; a later change means the
    definition is not contractive and raises :class:`DivergenceError`.
    """
    F = zero(truncation)
    for it in range(1, truncation + 3):
        new = rhs(F)
        if new.truncation < truncation:
            raise InputError(
                "right-hand side loses truncation order; only contractive definitions are supported"
            )
        new = new.truncate(truncation)
        for n in range(truncation + 1):
            if n + 1 < it and new[n] != F[n]:
                raise DivergenceError(
                    f"coefficient {n} still changing after {it} iterations",
                    index=n,
                    iteration=it,
                )
        if new == F:
            return F
        F = new
    raise DivergenceError(f"no fixed point after {truncation + 2} iterations")
