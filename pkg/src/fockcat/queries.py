"""Evaluate parsed expressions and queries to JSON-ready results."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Union

from . import species as sp
from . import stufftype as st
from .diagrams import enumerate_diagrams, vev
from .dsl import (
    GF,
    Atom,
    Compose,
    Conj,
    Derivative,
    Dyson,
    Evolve,
    Expect,
    Expr,
    Inner,
    Nat,
    PhaseScale,
    Pow,
    Product,
    Quotient,
    Shift,
    Sized,
    Solve,
    Sum,
    Var,
    Vev,
    render,
    render_query,
)
from .errors import InputError, SizeError
from .evolution import (
    FreeEvolution,
    PerturbationSpec,
    dyson_terms,
    exact_amplitude,
    perturbation_diagram_expansion,
)
from .scalars import Angle, PhasedScalar, fraction_str, h
from .series import PowerSeries
from .species import Species
from .stufftype import StuffType
from .weyl import ASTAR, PHI, A, N, WeylElement, expect

FLOAT_TOLERANCE = 1e-12
VEV_CLASS_LIMIT = 20_000

Value = Union[Species, StuffType]


# --- species / stuff-type evaluation -------------------------------------


def _lift(x: Value) -> StuffType:
    return st.from_species(x) if isinstance(x, Species) else x


def evaluate(e: Expr, order: int, env: Optional[Dict[str, Value]] = None) -> Value:
    """Evaluate to a Species when possible, otherwise to a StuffType."""
    env = env or {}
    if isinstance(e, Atom):
        builders = {
            "Z": sp.Z, "E": sp.E, "Eplus": sp.Eplus, "O": sp.O,
            "Eeven": sp.Eeven, "Eodd": sp.Eodd,
        }
        if e.name not in builders:
            raise InputError(f"{e.name} is an operator atom; use it inside expect(...)")
        return builders[e.name](order)
    if isinstance(e, Nat):
        return sp.constant(e.value, order)
    if isinstance(e, Var):
        if e.name not in env:
            raise InputError(f"unbound variable {e.name}")
        return env[e.name]
    if isinstance(e, Sized):
        if e.name == "En":
            return sp.En(e.n, order)
        return st.k_tuple(e.n, order)
    if isinstance(e, Derivative):
        x = evaluate(e.arg, order, env)
        return sp.species_derivative(x) if isinstance(x, Species) else st.annihilate(x)
    if isinstance(e, Shift):
        x = evaluate(e.arg, order, env)
        return sp.species_shift(x) if isinstance(x, Species) else st.create(x)
    if isinstance(e, Conj):
        return st.conjugate(_lift(evaluate(e.arg, order, env)))
    if isinstance(e, PhaseScale):
        return st.phase_scale(_lift(evaluate(e.arg, order, env)), Angle.of_turns(e.turns))
    if isinstance(e, Pow):
        x = evaluate(e.base, order, env)
        return sp.species_power(x, e.exponent) if isinstance(x, Species) else st.stuff_power(x, e.exponent)
    if isinstance(e, (Sum, Product, Compose)):
        a, b = (e.outer, e.inner) if isinstance(e, Compose) else (e.left, e.right)
        x, y = evaluate(a, order, env), evaluate(b, order, env)
        if isinstance(x, Species) and isinstance(y, Species):
            op = {Sum: sp.species_sum, Product: sp.species_product, Compose: sp.species_compose}
            return op[type(e)](x, y)
        op = {Sum: st.stuff_sum, Product: st.stuff_product, Compose: st.compose}
        return op[type(e)](_lift(x), _lift(y))
    if isinstance(e, Quotient):
        raise InputError("division is only defined for Weyl-algebra elements")
    raise InputError(f"cannot evaluate {e!r}")


def evaluate_weyl(e: Expr) -> WeylElement:
    if isinstance(e, Atom):
        table = {"A": A, "ASTAR": ASTAR, "PHI": PHI, "N": N}
        if e.name not in table:
            raise InputError(f"{e.name} is not a Weyl-algebra generator")
        return table[e.name]
    if isinstance(e, Nat):
        return WeylElement.scalar(e.value)
    if isinstance(e, Sum):
        return evaluate_weyl(e.left) + evaluate_weyl(e.right)
    if isinstance(e, Product):
        return evaluate_weyl(e.left) * evaluate_weyl(e.right)
    if isinstance(e, Pow):
        return evaluate_weyl(e.base) ** e.exponent
    if isinstance(e, Quotient):
        if not isinstance(e.right, Nat) or e.right.value == 0:
            raise InputError("Weyl elements may only be divided by a positive natural number")
        return evaluate_weyl(e.left) * Fraction(1, e.right.value)
    raise InputError(f"{render(e)} is not a Weyl-algebra expression")


# --- JSON helpers --------------------------------------------------------


def _complex(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _scalar_json(x) -> dict:
    """Exact value when phase-free; otherwise terms plus the complex image."""
    x = PhasedScalar.coerce(x)
    out = {"terms": x.to_json(), "complex": _complex(h(x)), "tolerance": FLOAT_TOLERANCE}
    if x.is_real:
        out["exact"] = fraction_str(x.as_rational())
    return out


def _series_json(f: PowerSeries) -> dict:
    out = {"truncation": f.truncation}
    if all(not isinstance(c, PhasedScalar) or c.is_real for c in f.coeffs):
        out["coeffs"] = [
            fraction_str(c.as_rational() if isinstance(c, PhasedScalar) else Fraction(c))
            for c in f.coeffs
        ]
    else:
        out["coeffs"] = [PhasedScalar.coerce(c).to_json() for c in f.coeffs]
    out["complex"] = [_complex(h(c)) for c in f.coeffs]
    out["tolerance"] = FLOAT_TOLERANCE
    return out


def _value_json(x: Value) -> dict:
    if isinstance(x, Species):
        return {"kind": "species", "gf": _series_json(x.gf()), "counts": [str(c) for c in x.counts]}
    return {"kind": "stuff_type", "gf": _series_json(st.stuff_cardinality(x))}


# --- queries -------------------------------------------------------------


def eval_query(q) -> dict:
    out = {"query": type(q).__name__.lower(), "input": render_query(q)}
    if isinstance(q, GF):
        out.update(_value_json(evaluate(q.expr, q.order)))
    elif isinstance(q, Inner):
        x = _lift(evaluate(q.left, q.order))
        y = _lift(evaluate(q.right, q.order))
        ip = st.fock_inner(x, y) if q.fock else st.inner_product(x, y)
        card = ip.cardinality()
        out["query"] = "fock_inner" if q.fock else "inner"
        out["value"] = _scalar_json(card)
        out["cardinality"] = (
            fraction_str(card.as_rational()) if card.is_real else _complex(h(card))
        )
        out["graded"] = [_scalar_json(c.cardinality()) for c in ip.components]
    elif isinstance(q, Vev):
        v = vev(q.k, q.l, q.valences)
        out.update({
            "k": q.k, "l": q.l, "valences": list(q.valences),
            "cardinality": fraction_str(v),
        })
        g = None
        try:
            g = enumerate_diagrams(q.k, q.l, q.valences, max_classes=VEV_CLASS_LIMIT)
        except SizeError:  # class enumeration has a cap; the count does not
            pass
        if g is not None:
            out["labelled_count"] = g.labelled_count
            out["classes"] = len(g.classes)
            out["aut_orders"] = sorted(d.aut for d in g.classes)
    elif isinstance(q, Expect):
        w = evaluate_weyl(q.weyl)
        val = expect(q.k, w, q.l)
        out.update({"k": q.k, "l": q.l, "weyl": w.to_json()})
        if isinstance(val, Fraction):
            out["value"] = fraction_str(val)
        else:
            out["value"] = str(val)
            out["complex"] = _complex(complex(val))
    elif isinstance(q, Solve):
        rhs = q.rhs

        def step(F):
            x = evaluate(rhs, q.order, {q.var: F})
            if not isinstance(x, Species):
                raise InputError("solve supports species right-hand sides only")
            return x

        F = sp.solve_fixed_point(step, q.order)
        out.update(_value_json(F))
    elif isinstance(q, Evolve):
        x = _lift(evaluate(q.expr, q.order))
        a = q.angle
        theta = Angle.of_turns(a.turns) if a.turns is not None else Angle.of_radians(a.radians)
        y = FreeEvolution(theta)(x)
        out["gf"] = _series_json(st.stuff_cardinality(y))
        out["stuff_type"] = y.to_json()
    elif isinstance(q, Dyson):
        spec = PerturbationSpec(dict(q.potential), q.time, q.order, q.cutoff)
        terms = dyson_terms(q.k, q.l, spec)
        exact = exact_amplitude(q.k, q.l, spec)
        dyson = sum(terms, 0j)
        out.update({
            "k": q.k, "l": q.l,
            "terms": [_complex(t) for t in terms],
            "dyson": _complex(dyson),
            "exact": _complex(exact),
            "delta": float(abs(dyson - exact)),
            "tolerance": 1e-8,
        })
        if len(spec.potential) == 1 and q.order <= 2:
            out["diagrams"] = [r.to_json() for r in perturbation_diagram_expansion(q.k, q.l, spec)]
    else:
        raise InputError(f"unknown query {q!r}")
    return out


def diagrams_json(k: int, l: int, valences) -> dict:
    return enumerate_diagrams(k, l, valences).to_json()
