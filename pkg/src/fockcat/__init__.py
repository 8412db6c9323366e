"""Categorified Fock space: groupoid cardinalities, species and stuff types,
Weyl-algebra operators, Feynman diagrams and U(1) time evolution."""

from .errors import (
    CompositionError,
    CutoffError,
    DivergenceError,
    FockcatError,
    InputError,
    ParseError,
    SizeError,
    TruncationError,
)
from .groupoid import PermAction, SkeletalGroupoid, StackyPoint, cardinality, skeletonize, weak_quotient
from .scalars import Angle, PhasedScalar, h
from .series import PowerSeries
from .species import Species
from .stufftype import StuffType

__version__ = "0.1.0"
