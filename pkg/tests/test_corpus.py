import numpy as np

from ordered_harmonics.corpus import (
    CORPUS_LIMITS,
    DEFAULT_CORPUS_LIMITS,
    random_symbol,
    symbol_corpus,
)


def test_symbol_corpus_is_deterministic():
    assert symbol_corpus(seed=5, n=2, count=6) == symbol_corpus(seed=5, n=2, count=6)


def test_symbol_corpus_seed_changes_symbols():
    assert symbol_corpus(seed=1, n=1, count=4) != symbol_corpus(seed=2, n=1, count=4)


def test_symbol_corpus_respects_bounds():
    corpus = symbol_corpus(seed=0, n=3, count=20, max_terms=4, degree=1)
    assert len(corpus) == 20  # noqa: PLR2004
    for phi in corpus:
        assert phi.n == 3  # noqa: PLR2004
        assert 1 <= len(phi) <= 4  # noqa: PLR2004
        assert phi.max_degree() <= 1


def test_random_symbol_caps_terms_at_box_size():
    rng = np.random.default_rng(0)
    phi = random_symbol(rng, n=1, max_terms=50, degree=1)
    assert len(phi) <= 3  # noqa: PLR2004


def test_symbol_corpus_one_variable_covers_wide_supports():
    corpus = symbol_corpus(seed=0, n=1, count=200)
    max_terms, degree = CORPUS_LIMITS[1]
    degrees = {phi.max_degree() for phi in corpus}
    assert max(degrees) == degree
    assert min(degrees) <= 2  # noqa: PLR2004
    assert max(len(phi) for phi in corpus) > 10  # noqa: PLR2004
    assert all(1 <= len(phi) <= max_terms for phi in corpus)


def test_symbol_corpus_higher_dimension_defaults():
    max_terms, degree = DEFAULT_CORPUS_LIMITS
    for phi in symbol_corpus(seed=0, n=2, count=20):
        assert 1 <= len(phi) <= max_terms
        assert phi.max_degree() <= degree
