"""Randomized identity checks behind ``fockcat selfcheck``."""

from __future__ import annotations

import random
from fractions import Fraction

from .groupoid import PermAction, SkeletalGroupoid, StackyPoint, cardinality, weak_quotient
from .scalars import Angle, PhasedScalar, h
from .stufftype import StuffType, annihilate, create, stuff_cardinality


def random_angle(rng: random.Random) -> Angle:
    return Angle.of_turns(Fraction(rng.randrange(8), 8))


def random_phased(rng: random.Random, terms: int = 3) -> PhasedScalar:
    return PhasedScalar(
        (Fraction(rng.randint(0, 9), rng.randint(1, 9)), random_angle(rng)) for _ in range(terms)
    )


def random_stuff_type(rng: random.Random, truncation: int = 16, max_points: int = 3) -> StuffType:
    fibers = []
    for _ in range(truncation + 1):
        pts = [
            (StackyPoint(Fraction(1, rng.randint(1, 24)), random_angle(rng)), rng.randint(1, 3))
            for _ in range(rng.randint(0, max_points))
        ]
        fibers.append(SkeletalGroupoid(pts))
    return StuffType(fibers, truncation)


def random_action(rng: random.Random, max_size: int = 10, max_gens: int = 3) -> PermAction:
    n = rng.randint(1, max_size)
    gens = []
    for _ in range(rng.randint(0, max_gens)):
        p = list(range(n))
        rng.shuffle(p)
        gens.append(tuple(p))
    return PermAction(n, tuple(gens))


def commutation_holds(psi: StuffType) -> bool:
    """|A A* psi| = |A* A psi| + |psi| on the common truncation."""
    lhs = stuff_cardinality(annihilate(create(psi)))
    rhs = stuff_cardinality(create(annihilate(psi)))
    t = min(lhs.truncation, rhs.truncation)
    base = stuff_cardinality(psi)
    return all(lhs[n] == rhs[n] + base[n] for n in range(t + 1))


def run_checks(rng: random.Random, trials: int = 20) -> dict:
    results = {"commutation": 0, "rig": 0, "h_homomorphism": 0, "weak_quotient": 0}
    for _ in range(trials):
        if commutation_holds(random_stuff_type(rng)):
            results["commutation"] += 1
        x, y, z = (random_phased(rng) for _ in range(3))
        if (x + y) * z == x * z + y * z and (x * y) * z == x * (y * z):
            results["rig"] += 1
        if abs(h(x * y) - h(x) * h(y)) <= 1e-12 and abs(h(x + y) - h(x) - h(y)) <= 1e-12:
            results["h_homomorphism"] += 1
        act = random_action(rng, max_size=7)
        order = act.order()
        if cardinality(weak_quotient(act.domain_size, act)) == Fraction(act.domain_size, order):
            results["weak_quotient"] += 1
    return {
        "trials": trials,
        "passed": results,
        "ok": all(v == trials for v in results.values()),
    }
