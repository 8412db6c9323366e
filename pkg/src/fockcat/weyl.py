"""The Weyl algebra in normal-ordered form, its Fock representation on power
series, and truncated Fock-basis matrices.

Elements are finite sums of monomials ``a*^i a^j`` with exact coefficients
(Fractions, or sympy numbers when sqrt(2) and i appear).  On states, ``a``
acts as d/dz and ``a*`` as multiplication by z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, sqrt
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np
import scipy.linalg
import sympy

from .errors import CutoffError, InputError, TruncationError
from .series import PowerSeries

Monomial = Tuple[int, int]


def _clean(c):
    if isinstance(c, sympy.Basic):
        c = sympy.expand(c)
        if c.is_Rational:
            return Fraction(int(c.p), int(c.q))
    return c


def _nonzero(c) -> bool:
    return not (c == 0)


class WeylElement:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] = ()):
        acc: Dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise InputError("monomial powers must be natural numbers")
            if isinstance(c, int):
                c = Fraction(c)
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + c
        cleaned = {m: _clean(c) for m, c in acc.items()}
        self.terms = {m: c for m, c in sorted(cleaned.items()) if _nonzero(c)}

    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({(0, 0): c})

    def __add__(self, other) -> "WeylElement":
        other = _coerce(other)
        return WeylElement(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "WeylElement":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "WeylElement":
        return _coerce(other) - self

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        return WeylElement({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other) -> "WeylElement":
        return WeylElement({m: other * c for m, c in self.terms.items()})

    def __pow__(self, n: int) -> "WeylElement":
        if n < 0:
            raise InputError("Weyl powers must be natural numbers")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).terms == {}

    def __hash__(self):
        return hash(tuple((m, str(c)) for m, c in self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms.items():
            mono = " ".join(x for x in (_pw("a*", i), _pw("a", j)) if x) or "1"
            parts.append(f"({c})·{mono}" if (i, j) != (0, 0) else f"({c})")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [{"create": i, "annihilate": j, "coeff": str(c)} for (i, j), c in self.terms.items()]


def _pw(sym, k):
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


def _coerce(x) -> WeylElement:
    if isinstance(x, WeylElement):
        return x
    if isinstance(x, (int, Fraction, complex, sympy.Basic)):
        return WeylElement.scalar(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a Weyl element")


def monomial_product(m1: Monomial, m2: Monomial) -> Dict[Monomial, int]:
    """Normal-ordered form of (a*^i a^j)(a*^p a^q).

    Moving a^j past a*^p contracts r pairs in C(j,r) C(p,r) r! ways.
    """
    i, j = m1
    p, q = m2
    return {
        (i + p - r, j + q - r): comb(j, r) * comb(p, r) * factorial(r)
        for r in range(min(j, p) + 1)
    }


def weyl_mul(u: WeylElement, v: WeylElement) -> WeylElement:
    acc = []
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            c = c1 * c2
            for m, k in monomial_product(m1, m2).items():
                acc.append((m, c * k))
    return WeylElement(acc)


ONE = WeylElement({(0, 0): 1})
A = WeylElement({(0, 1): 1})
ASTAR = WeylElement({(1, 0): 1})
N = WeylElement({(1, 1): 1})
PHI = A + ASTAR

_GENERATORS = {"a": A, "a*": ASTAR, "A": A, "ASTAR": ASTAR, "N": N, "PHI": PHI}


def normal_order(word: Iterable[str], coeff=1) -> WeylElement:
    """Normal-order a word in the generators, e.g. ``["a", "a*"]`` -> a*a + 1."""
    out = WeylElement.scalar(coeff)
    for g in word:
        try:
            out = out * _GENERATORS[g]
        except KeyError:
            raise InputError(f"unknown generator {g!r}") from None
    return out


def commutator(u: WeylElement, v: WeylElement) -> WeylElement:
    return u * v - v * u


def pq_generators() -> Tuple[WeylElement, WeylElement]:
    """(p, q) with q = (a + a*)/sqrt2 and p = (a - a*)/(sqrt2 i)."""
    r2 = sympy.sqrt(2)
    q = (A + ASTAR) * (1 / r2)
    p = (A - ASTAR) * (1 / (r2 * sympy.I))
    return p, q


# --- action on Fock states -----------------------------------------------


def apply(w: WeylElement, state: PowerSeries) -> PowerSeries:
    """Act on a polynomial state: a*^i a^j f = z^i f^(j).

    The state is read as the polynomial of its stored coefficients; a nonzero
    coefficient pushed past the truncation raises :class:`TruncationError`.
    """
    t = state.truncation
    out = [Fraction(0)] * (t + 1)
    for (i, j), c in w.terms.items():
        for n in range(j, t + 1):
            s = state[n]
            if s == 0:
                continue
            falling = factorial(n) // factorial(n - j)
            target = n - j + i
            if target > t:
                raise TruncationError(
                    f"result degree {target} exceeds state truncation {t}", degree=target
                )
            out[target] = out[target] + c * falling * s
    return PowerSeries([_clean(c) for c in out], t)


def fock_pairing(f: PowerSeries, g: PowerSeries):
    """The bilinear pairing <z^n, z^m> = n! delta_{nm}."""
    t = min(f.truncation, g.truncation)
    return _clean(sum((f[n] * g[n] * factorial(n) for n in range(t + 1)), Fraction(0)))


def field_power_expect(k: int, m: int, l: int) -> Fraction:
    """<z^k, phi^m z^l> computed symbolically."""
    if min(k, m, l) < 0:
        raise InputError("k, m, l must be natural numbers")
    if (k + m + l) % 2:
        return Fraction(0)
    t = k + l + m
    state = apply(PHI**m, PowerSeries.monomial(l, t))
    return Fraction(state[k]) * factorial(k)


def expect(k: int, w: WeylElement, l: int):
    """<z^k, w z^l> for an arbitrary element."""
    top = max((i for i, _ in w.terms), default=0)
    t = k + l + top
    state = apply(w, PowerSeries.monomial(l, t))
    return _clean(state[k] * factorial(k))


# --- truncated matrices --------------------------------------------------


@dataclass(frozen=True)
class FockMatrix:
    """Operator on span{e_0..e_cutoff}, e_n = z^n / sqrt(n!)."""

    entries: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        return FockMatrix(self.entries @ other.entries)

    def element(self, k: int, l: int) -> complex:
        """<e_k | M | e_l>."""
        return complex(self.entries[k, l])

    def to_json(self) -> list:
        return [[[z.real, z.imag] for z in row] for row in self.entries.astype(complex)]


def ladder_matrices(cutoff: int) -> Tuple[np.ndarray, np.ndarray]:
    if cutoff < 1:
        raise CutoffError("cutoff must be at least 1", cutoff=cutoff)
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def to_matrix(w: WeylElement, cutoff: int) -> FockMatrix:
    a, ad = ladder_matrices(cutoff)
    out = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for (i, j), c in w.terms.items():
        if i > cutoff or j > cutoff:
            raise CutoffError(
                f"cutoff {cutoff} too small for monomial a*^{i} a^{j}", cutoff=cutoff
            )
        out += complex(c) * (np.linalg.matrix_power(ad, i) @ np.linalg.matrix_power(a, j))
    return FockMatrix(out)


def matrix_exp(M: FockMatrix, t: float = 1.0) -> FockMatrix:
    """exp(t M)."""
    entries = np.asarray(M.entries, dtype=complex) * t
    if not np.all(np.isfinite(entries)):
        raise InputError("matrix has non-finite entries")
    return FockMatrix(scipy.linalg.expm(entries))


def monomial_basis_element(M: FockMatrix, k: int, l: int) -> complex:
    """<z^k | M z^l> in the unnormalized monomial basis."""
    return M.element(k, l) * sqrt(factorial(k) * factorial(l))
