"""Time evolution of U(1)-stuff types and the perturbed oscillator.

Conventions: a quantum evolved for time T gains phase ``sign * T`` with
``sign = -1`` by default, i.e. E_T = exp(-i T N).  The perturbed Hamiltonian
is H = N + V with V = sum_m g_m phi^m / m!.  Amplitudes are matrix elements
between orthonormal Fock vectors e_n = z^n / sqrt(n!).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, sqrt
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .diagrams import DiagramGroupoid, enumerate_diagrams
from .errors import CutoffError, InputError
from .groupoid import StackyPoint
from .scalars import Angle
from .stufftype import StuffType
from .weyl import PHI, FockMatrix, WeylElement, matrix_exp, to_matrix

CUTOFF_TOLERANCE = 1e-6
MAX_DYSON_ORDER = 4


@dataclass(frozen=True)
class FreeEvolution:
    """Free propagator: a size-n fiber gains phase n * sign * time_angle."""

    time_angle: Angle
    sign: int = -1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("sign must be +1 or -1")

    @property
    def per_quantum(self) -> Angle:
        return self.time_angle if self.sign == 1 else -self.time_angle

    def inverse(self) -> "FreeEvolution":
        return FreeEvolution(self.time_angle, -self.sign)

    def __call__(self, psi: StuffType) -> StuffType:
        return free_evolve(psi, self.per_quantum)


def free_evolve(psi: StuffType, theta: Angle) -> StuffType:
    """Rotate fiber n by n * theta."""
    return psi.map_fibers(
        lambda n, g: g.map_points(lambda p: StackyPoint(p.mass, p.phase + theta * n, p.tag))
    )


@dataclass(frozen=True)
class PerturbationSpec:
    potential: Mapping[int, float]
    total_time: float
    dyson_order: int = 2
    fock_cutoff: int = 16
    quadrature_nodes: int = 32
    enforce_min_degree: bool = True

    def __post_init__(self):
        pot = {int(m): float(g) for m, g in dict(self.potential).items() if g != 0}
        if any(m < 0 for m in pot):
            raise InputError("potential degrees must be natural numbers")
        if self.enforce_min_degree and pot and min(pot) < 3:
            raise InputError("potential must have minimum degree at least 3")
        if not 0 <= self.dyson_order <= MAX_DYSON_ORDER:
            raise InputError(f"dyson_order must lie in 0..{MAX_DYSON_ORDER}")
        if self.fock_cutoff < 1:
            raise CutoffError("fock_cutoff must be at least 1")
        if self.quadrature_nodes < 1:
            raise InputError("quadrature_nodes must be positive")
        object.__setattr__(self, "potential", pot)

    @property
    def max_degree(self) -> int:
        return max(self.potential, default=0)

    def with_cutoff(self, cutoff: int) -> "PerturbationSpec":
        return PerturbationSpec(
            self.potential, self.total_time, self.dyson_order, cutoff,
            self.quadrature_nodes, self.enforce_min_degree,
        )

    def check_cutoff(self, k: int, l: int) -> None:
        need = k + l + self.dyson_order * self.max_degree
        if self.fock_cutoff < need:
            raise CutoffError(
                f"fock_cutoff {self.fock_cutoff} is below k + l + order * degree = {need}",
                needed=need,
            )

    def potential_element(self) -> WeylElement:
        v = WeylElement()
        for m, g in self.potential.items():
            v = v + (PHI**m) * Fraction(1, factorial(m)) * g
        return v

    def potential_matrix(self) -> np.ndarray:
        return to_matrix(self.potential_element(), self.fock_cutoff).entries


def _exact(k: int, l: int, spec: PerturbationSpec) -> complex:
    n = spec.fock_cutoff + 1
    h = np.diag(np.arange(n, dtype=float)).astype(complex) + spec.potential_matrix()
    u = matrix_exp(FockMatrix(h), -1j * spec.total_time).entries
    return complex(u[k, l])


def exact_amplitude(k: int, l: int, spec: PerturbationSpec, check: bool = True) -> complex:
    """<e_k | exp(-i T (N + V)) | e_l> from the truncated matrix exponential."""
    if max(k, l) > spec.fock_cutoff:
        raise CutoffError(f"levels {k}, {l} exceed fock_cutoff {spec.fock_cutoff}")
    amp = _exact(k, l, spec)
    if check and spec.potential:
        wider = _exact(k, l, spec.with_cutoff(spec.fock_cutoff + 4))
        if abs(wider - amp) > CUTOFF_TOLERANCE:
            raise CutoffError(
                f"amplitude moves by {abs(wider - amp):.3g} when the cutoff grows by 4",
                shift=abs(wider - amp),
            )
    return amp


def unitarity_defect(spec: PerturbationSpec) -> float:
    n = spec.fock_cutoff + 1
    h = np.diag(np.arange(n, dtype=float)).astype(complex) + spec.potential_matrix()
    u = matrix_exp(FockMatrix(h), -1j * spec.total_time).entries
    return float(np.max(np.abs(u.conj().T @ u - np.eye(n))))


# --- Dyson series --------------------------------------------------------


def simplex_rule(order: int, total_time: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for 0 <= t_1 <= ... <= t_order <= T.

    Iterated Gauss-Legendre: t_n = T u_n, t_{j} = t_{j+1} u_j, with the
    Jacobian folded into the weights.  Rows are (t_1, ..., t_order).
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = (x + 1) / 2
    wu = w / 2
    if order == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*([np.arange(nodes)] * order), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)  # column j -> u for t_{order-j}
    ts = np.empty(idx.shape, dtype=float)
    weights = np.ones(idx.shape[0])
    upper = np.full(idx.shape[0], float(total_time))
    for col in range(order):
        t = upper * u[idx[:, col]]
        weights = weights * upper * wu[idx[:, col]]
        ts[:, order - 1 - col] = t
        upper = t
    return ts, weights


def dyson_term(k: int, l: int, spec: PerturbationSpec, n: int, vmat: Optional[np.ndarray] = None) -> complex:
    """(-i)^n times the n-th time-ordered integral, in the orthonormal basis."""
    dim = spec.fock_cutoff + 1
    T = spec.total_time
    levels = np.arange(dim, dtype=float)
    if n == 0:
        return cmath.exp(-1j * T * k) if k == l else 0j
    if vmat is None:
        vmat = spec.potential_matrix()
    ts, ws = simplex_rule(n, T, spec.quadrature_nodes)
    total = 0j
    chunk = max(1, 200_000 // dim)
    for start in range(0, len(ws), chunk):
        t = ts[start : start + chunk]
        w = ws[start : start + chunk]
        psi = np.zeros((len(w), dim), dtype=complex)
        psi[:, l] = np.exp(-1j * t[:, 0] * l)
        for j in range(n):
            psi = psi @ vmat.T
            nxt = t[:, j + 1] if j + 1 < n else np.full(len(w), T)
            psi = psi * np.exp(-1j * np.outer(nxt - t[:, j], levels))
        total += np.dot(w, psi[:, k])
    return complex((-1j) ** n * total)


def dyson_terms(k: int, l: int, spec: PerturbationSpec) -> List[complex]:
    spec.check_cutoff(k, l)
    vmat = spec.potential_matrix()
    return [dyson_term(k, l, spec, n, vmat) for n in range(spec.dyson_order + 1)]


def dyson_amplitude(k: int, l: int, spec: PerturbationSpec) -> complex:
    """Truncated Dyson series for <e_k | exp(-i T (N + V)) | e_l>."""
    return sum(dyson_terms(k, l, spec), 0j)


# --- diagram cross-check -------------------------------------------------


def phase_integral(crossings: Tuple[int, ...], total_time: float, nodes: int = 32) -> complex:
    """Integral over 0<=t_1<=...<=t_n<=T of prod_j exp(-i (t_{j+1}-t_j) c_j)."""
    n = len(crossings) - 1
    if n == 0:
        return cmath.exp(-1j * total_time * crossings[0])
    ts, ws = simplex_rule(n, total_time, nodes)
    bounds = np.concatenate([np.zeros((len(ws), 1)), ts, np.full((len(ws), 1), total_time)], axis=1)
    gaps = np.diff(bounds, axis=1)
    return complex(np.dot(ws, np.exp(-1j * gaps @ np.asarray(crossings, dtype=float))))


@dataclass
class OrderReport:
    order: int
    dyson: complex
    diagrams: complex
    weight: Fraction
    classes: int
    profiles: Dict[Tuple[int, ...], Fraction] = field(default_factory=dict)

    @property
    def delta(self) -> float:
        return float(abs(self.dyson - self.diagrams))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "dyson": [self.dyson.real, self.dyson.imag],
            "diagrams": [self.diagrams.real, self.diagrams.imag],
            "delta": self.delta,
            "weight": _frac(self.weight),
            "classes": self.classes,
            "profiles": [
                {"crossings": list(c), "weight": _frac(w)} for c, w in sorted(self.profiles.items())
            ],
        }


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def perturbation_diagram_expansion(k: int, l: int, spec: PerturbationSpec) -> List[OrderReport]:
    """Compare each Dyson order with the sum over diagrams built from V's vertex.

    Order n: (-i g)^n sum over classes of (1/aut) times the phase integral of
    the class's strand-count profile, rescaled from <z^k|..|z^l> to the
    orthonormal basis.
    """
    if len(spec.potential) != 1:
        raise InputError("diagram expansion needs a monomial potential; expand per monomial")
    if spec.dyson_order > 2:
        raise InputError("diagram expansion supports dyson_order <= 2")
    (m, g), = spec.potential.items()
    spec.check_cutoff(k, l)
    vmat = spec.potential_matrix()
    norm = sqrt(factorial(k) * factorial(l))
    reports = []
    for n in range(spec.dyson_order + 1):
        groupoid: DiagramGroupoid = enumerate_diagrams(k, l, [m] * n)
        profiles: Dict[Tuple[int, ...], Fraction] = {}
        total = 0j
        for d in groupoid.classes:
            c = d.crossings()
            profiles[c] = profiles.get(c, Fraction(0)) + d.weight
        for c, w in profiles.items():
            total += float(w) * phase_integral(c, spec.total_time, spec.quadrature_nodes)
        total *= (-1j * g) ** n / norm
        reports.append(
            OrderReport(
                order=n,
                dyson=dyson_term(k, l, spec, n, vmat),
                diagrams=total,
                weight=groupoid.cardinality,
                classes=len(groupoid.classes),
                profiles=profiles,
            )
        )
    return reports
