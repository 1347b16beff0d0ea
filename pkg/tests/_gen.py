"""Random exact data shared by the property suites."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from gradred import GradedFunction, PoissonBivector, Polynomial

COEFFS = [Fraction(k, d) for k in range(-3, 4) for d in (1, 2) if k]


def names(n: int) -> tuple:
    return tuple(f"x{i + 1}" for i in range(n))


def rand_poly(rng: random.Random, V: tuple, degree: int = 2, terms: int = 3, min_terms: int = 0) -> Polynomial:
    n = len(V)
    out = {}
    for _ in range(rng.randint(min_terms, terms)):
        exp = [0] * n
        for _ in range(rng.randint(0, degree)):
            exp[rng.randrange(n)] += 1
        out[tuple(exp)] = rng.choice(COEFFS)
    return Polynomial(V, out)


def rand_graded(rng: random.Random, V: tuple, k: int, degree: int = 2, terms: int = 3, min_terms: int = 0) -> GradedFunction:
    """Homogeneous element of odd degree k."""
    monos = list(itertools.combinations(range(len(V)), k))
    chosen = rng.sample(monos, min(len(monos), rng.randint(1, 3)))
    return GradedFunction(V, {m: rand_poly(rng, V, degree, terms, min_terms) for m in chosen})


def rand_bivector(rng: random.Random, V: tuple, degree: int = 2, min_terms: int = 0) -> PoissonBivector:
    pairs = list(itertools.combinations(range(len(V)), 2))
    return PoissonBivector(V, {p: rand_poly(rng, V, degree, 2, min_terms) for p in pairs})


# hypothesis front end: draw a seed and a size, then reuse the generators above
@st.composite
def contexts(draw, max_n: int = 4):
    return names(draw(st.integers(1, max_n)))


@st.composite
def polys(draw, V, degree: int = 3):
    return rand_poly(random.Random(draw(st.integers(0, 2**32))), V, degree)


@st.composite
def graded(draw, V, k=None, degree: int = 3):
    if k is None:
        k = draw(st.integers(0, len(V)))
    return rand_graded(random.Random(draw(st.integers(0, 2**32))), V, k, degree)
