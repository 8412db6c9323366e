"""Exact scalars: U(1) angles, phased scalars in R+ (x) U(1), and the map h to C.

A :class:`PhasedScalar` is a formal sum of magnitude-times-phase terms.  Only
terms with *identical* angles are merged; two terms with opposite phases are
kept apart, and their cancellation is only visible after applying :func:`h`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Optional, Tuple, Union

TWO_PI = 2.0 * math.pi

# Exact unit complex numbers for quarter turns, as (re, im).
_QUARTERS = {
    Fraction(0): (1, 0),
    Fraction(1, 4): (0, 1),
    Fraction(1, 2): (-1, 0),
    Fraction(3, 4): (0, -1),
}


def as_fraction(x) -> Fraction:
    """Coerce an int/Fraction/'p/q' string to a Fraction (floats are rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Angle:
    """A U(1) phase, either as exact rational turns or as real radians.

    Exactly one of ``turns`` / ``radians`` is set.  Exact turns live in [0, 1)
    and mean ``2*pi*turns`` radians.
    """

    turns: Optional[Fraction] = Fraction(0)
    radians: Optional[float] = None

    def __post_init__(self):
        if (self.turns is None) == (self.radians is None):
            raise ValueError("Angle needs exactly one of turns or radians")
        if self.turns is not None:
            t = as_fraction(self.turns)
            object.__setattr__(self, "turns", t - math.floor(t))
        else:
            r = float(self.radians)
            if not math.isfinite(r):
                raise ValueError("angle must be finite")
            r = math.fmod(r, TWO_PI)
            if r < 0:
                r += TWO_PI
            if r == TWO_PI:
                r = 0.0
            object.__setattr__(self, "radians", r)

    @classmethod
    def of_turns(cls, t) -> "Angle":
        return cls(turns=as_fraction(t))

    @classmethod
    def of_radians(cls, r: float) -> "Angle":
        return cls(turns=None, radians=float(r))

    @property
    def is_exact(self) -> bool:
        return self.turns is not None

    @property
    def is_zero(self) -> bool:
        return self.turns == 0 if self.is_exact else self.radians == 0.0

    def to_radians(self) -> float:
        if self.is_exact:
            return TWO_PI * float(self.turns)
        return self.radians

    def __add__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return Angle(turns=self.turns + other.turns)
        return Angle.of_radians(self.to_radians() + other.to_radians())

    def __neg__(self) -> "Angle":
        if self.is_exact:
            return Angle(turns=-self.turns)
        return Angle.of_radians(-self.radians)

    def __sub__(self, other: "Angle") -> "Angle":
        return self + (-other)

    def __mul__(self, k: int) -> "Angle":
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if self.is_exact:
            return Angle(turns=self.turns * k)
        return Angle.of_radians(self.radians * k)

    __rmul__ = __mul__

    def unit(self) -> complex:
        """e^{i angle} as a Python complex (exact components for quarter turns)."""
        if self.is_exact and self.turns in _QUARTERS:
            re, im = _QUARTERS[self.turns]
            return complex(re, im)
        return cmath.exp(1j * self.to_radians())

    def sort_key(self):
        return (0, self.turns) if self.is_exact else (1, self.radians)

    def __lt__(self, other: "Angle") -> bool:
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        if self.is_exact:
            return {"phase_turns": fraction_str(self.turns)}
        return {"phase_turns": None, "phase_radians": self.radians}

    def __repr__(self):
        if self.is_exact:
            return f"Angle({fraction_str(self.turns)} turns)"
        return f"Angle({self.radians!r} rad)"


ZERO_ANGLE = Angle(turns=Fraction(0))
HALF_TURN = Angle(turns=Fraction(1, 2))


def angle_from_json(d: Mapping) -> Angle:
    turns = d.get("phase_turns")
    if turns is not None:
        return Angle.of_turns(Fraction(turns))
    if d.get("phase_radians") is not None:
        return Angle.of_radians(d["phase_radians"])
    return ZERO_ANGLE


Scalar = Union[int, Fraction, "PhasedScalar"]


class PhasedScalar:
    """A finite formal sum of terms ``magnitude (x) angle`` with magnitude >= 0.

    Forms a commutative rig under ``+`` and ``*``; angles add under
    multiplication.  Plain non-negative rationals coerce to zero-phase terms.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[Angle, Fraction], Iterable[Tuple[Fraction, Angle]]] = ()):
        acc = {}
        items = terms.items() if isinstance(terms, Mapping) else ((a, m) for m, a in terms)
        for angle, mag in items:
            mag = as_fraction(mag)
            if mag < 0:
                raise ValueError("phased scalar magnitudes must be non-negative")
            if mag:
                acc[angle] = acc.get(angle, Fraction(0)) + mag
        self._terms = tuple(sorted(acc.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def rational(cls, q, angle: Angle = ZERO_ANGLE) -> "PhasedScalar":
        return cls({angle: as_fraction(q)})

    @classmethod
    def coerce(cls, x) -> "PhasedScalar":
        if isinstance(x, PhasedScalar):
            return x
        return cls.rational(x)

    @property
    def terms(self) -> Tuple[Tuple[Angle, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_real(self) -> bool:
        """True when every term carries the zero phase."""
        return all(a.is_zero and a.is_exact for a, _ in self._terms)

    def as_rational(self) -> Fraction:
        if not self.is_real:
            raise ValueError(f"{self!r} carries a non-trivial phase")
        return sum((m for _, m in self._terms), Fraction(0))

    def total_magnitude(self) -> Fraction:
        return sum((m for _, m in self._terms), Fraction(0))

    def __add__(self, other) -> "PhasedScalar":
        try:
            other = PhasedScalar.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for a, m in other._terms:
            acc[a] = acc.get(a, Fraction(0)) + m
        return PhasedScalar(acc)

    __radd__ = __add__

    def __mul__(self, other) -> "PhasedScalar":
        if isinstance(other, PhasedScalar):
            acc = {}
            for a1, m1 in self._terms:
                for a2, m2 in other._terms:
                    a = a1 + a2
                    acc[a] = acc.get(a, Fraction(0)) + m1 * m2
            return PhasedScalar(acc)
        try:
            q = as_fraction(other)
        except TypeError:
            return NotImplemented
        return PhasedScalar({a: m * q for a, m in self._terms})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PhasedScalar":
        out = PhasedScalar.rational(1)
        for _ in range(n):
            out = out * self
        return out

    def rotate(self, angle: Angle) -> "PhasedScalar":
        return PhasedScalar({a + angle: m for a, m in self._terms})

    def conjugate(self) -> "PhasedScalar":
        return PhasedScalar({-a: m for a, m in self._terms})

    def __eq__(self, other):
        if isinstance(other, PhasedScalar):
            return self._terms == other._terms
        try:
            return self._terms == PhasedScalar.coerce(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        if not self._terms:
            return "PhasedScalar(0)"
        body = " + ".join(
            fraction_str(m) if a.is_exact and a.turns == 0 else f"{fraction_str(m)}@{a!r}"
            for a, m in self._terms
        )
        return f"PhasedScalar({body})"

    def to_json(self) -> list:
        return [{"magnitude": fraction_str(m), **a.to_json()} for a, m in self._terms]

    @classmethod
    def from_json(cls, data: list) -> "PhasedScalar":
        return cls({angle_from_json(t): Fraction(t["magnitude"]) for t in data})


def h(x) -> complex:
    """The rig homomorphism R+ (x) U(1) -> C: sum of magnitude * e^{i angle}."""
    if not isinstance(x, PhasedScalar):
        return complex(float(as_fraction(x)))
    exact = h_exact(x)
    if exact is not None:
        return complex(float(exact[0]), float(exact[1]))
    return sum((float(m) * a.unit() for a, m in x.terms), 0j)


def h_exact(x) -> Optional[Tuple[Fraction, Fraction]]:
    """h as an exact Gaussian rational, or None if some angle is not a quarter turn."""
    x = PhasedScalar.coerce(x)
    re = im = Fraction(0)
    for a, m in x.terms:
        if not (a.is_exact and a.turns in _QUARTERS):
            return None
        c, s = _QUARTERS[a.turns]
        re += c * m
        im += s * m
    return re, im


def scalar_to_json(c):
    if isinstance(c, PhasedScalar):
        return c.to_json()
    if isinstance(c, complex):
        return [c.real, c.imag]
    if isinstance(c, float):
        return [c, 0.0]
    return fraction_str(as_fraction(c))
