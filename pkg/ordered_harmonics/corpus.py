"""Seeded random trigonometric polynomials for the verification suite."""

from __future__ import annotations

import numpy as np

from ordered_harmonics.ordered_group import Box
from ordered_harmonics.trigpoly import TrigPoly

# (max terms, max degree) per dimension; other dimensions use the default pair
CORPUS_LIMITS = {1: (30, 8)}
DEFAULT_CORPUS_LIMITS = (10, 3)


def random_symbol(
    rng: np.random.Generator, n: int, max_terms: int, degree: int
) -> TrigPoly:
    """Polynomial with 1..max_terms terms at distinct points of [-d, d]ⁿ.

    The degree bound d is drawn uniformly from 1..degree for each symbol so a corpus
    mixes narrow and wide supports. Coefficients are standard complex normal.
    """
    symbol_degree = int(rng.integers(1, degree + 1))
    points = list(Box.symmetric(n, symbol_degree).points())
    terms = int(rng.integers(1, min(max_terms, len(points)) + 1))
    chosen = rng.choice(len(points), size=terms, replace=False)
    values = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    return TrigPoly(
        n, {points[int(i)]: complex(v) for i, v in zip(chosen, values, strict=True)}
    )


def symbol_corpus(
    seed: int,
    n: int,
    count: int,
    max_terms: int | None = None,
    degree: int | None = None,
) -> list[TrigPoly]:
    default_terms, default_degree = CORPUS_LIMITS.get(n, DEFAULT_CORPUS_LIMITS)
    max_terms = max_terms or default_terms
    degree = degree or default_degree
    rng = np.random.default_rng(seed)
    return [random_symbol(rng, n, max_terms, degree) for _ in range(count)]
