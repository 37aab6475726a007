import json

import numpy as np
import pytest
from click.testing import CliRunner

from ordered_harmonics.checks import VerifyContext
from ordered_harmonics.config import Config
from ordered_harmonics.corpus import symbol_corpus
from ordered_harmonics.ordered_group import OrderSpec
from ordered_harmonics.trigpoly import GridSpec, TrigPoly


@pytest.fixture(autouse=True)
def _test_env(monkeypatch):
    monkeypatch.setenv("SENTRY_DSN", "None")
    monkeypatch.setenv("WORKSPACE", "test")
    monkeypatch.setenv("WARNING_ONLY_LOGGERS", "smart_open")
    monkeypatch.setenv("ORDERED_HARMONICS_THREADS", "1")


@pytest.fixture
def config_instance():
    return Config()


@pytest.fixture
def runner():
    return CliRunner()


# Orders ######################################
@pytest.fixture
def lex1():
    return OrderSpec.lex(1)


@pytest.fixture
def lex2():
    return OrderSpec.lex(2)


@pytest.fixture
def lex3():
    return OrderSpec.lex(3)


@pytest.fixture
def functional2():
    return OrderSpec.functional([1.0, np.sqrt(2)])


# Grids #######################################
@pytest.fixture
def grid1():
    return GridSpec(256, 1)


@pytest.fixture
def grid2():
    return GridSpec(64, 2)


# Symbols #####################################
@pytest.fixture
def chi_minus_1():
    return TrigPoly.character((-1,))


@pytest.fixture
def chi_1():
    return TrigPoly.character((1,))


@pytest.fixture
def cos_poly():
    return TrigPoly(1, {(-1,): 0.5, (1,): 0.5})


@pytest.fixture
def sin_poly():
    return TrigPoly(1, {(-1,): 0.5j, (1,): -0.5j})


@pytest.fixture
def mixed_poly2():
    return TrigPoly(
        2,
        {(-1, 2): 1 + 2j, (0, -1): -0.5, (0, 0): 3, (1, -3): 0.25j, (2, 1): -1 - 1j},
    )


@pytest.fixture
def corpus1():
    return symbol_corpus(seed=0, n=1, count=12)


@pytest.fixture
def corpus2():
    return symbol_corpus(seed=0, n=2, count=8, max_terms=6, degree=2)


# Contexts ####################################
@pytest.fixture
def lex1_context(lex1):
    return VerifyContext(
        order=lex1, corpus=symbol_corpus(seed=0, n=1, count=6), grid=GridSpec(256, 1)
    )


@pytest.fixture
def lex2_context(lex2):
    return VerifyContext(
        order=lex2,
        corpus=symbol_corpus(seed=0, n=2, count=4, max_terms=5, degree=2),
        grid=GridSpec(64, 2),
    )


@pytest.fixture
def functional_context(functional2):
    return VerifyContext(
        order=functional2,
        corpus=symbol_corpus(seed=0, n=2, count=4, max_terms=5, degree=2),
        grid=GridSpec(64, 2),
    )


# Files #######################################
@pytest.fixture
def symbol_file(tmp_path, chi_minus_1):
    path = tmp_path / "symbol.json"
    path.write_text(json.dumps(chi_minus_1.to_symbol_dict()))
    return str(path)


@pytest.fixture
def sin_symbol_file(tmp_path, sin_poly):
    path = tmp_path / "sin.json"
    path.write_text(json.dumps(sin_poly.to_symbol_dict()))
    return str(path)


@pytest.fixture
def sandwich_symbol_file(tmp_path):
    path = tmp_path / "sandwich.json"
    path.write_text(json.dumps(TrigPoly(1, {(-1,): 1, (1,): 1}).to_symbol_dict()))
    return str(path)


@pytest.fixture
def symbol_file_2d(tmp_path, mixed_poly2):
    path = tmp_path / "symbol2.json"
    path.write_text(json.dumps(mixed_poly2.to_symbol_dict()))
    return str(path)


@pytest.fixture
def corrupted_symbol_file(tmp_path):
    path = tmp_path / "corrupted.json"
    path.write_text('{"n": 1, "terms": [{"k": [1], "re": ')
    return str(path)


@pytest.fixture
def run_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {"order": {"kind": "lex", "n": 1}, "tol": 1e-9, "seed": 7, "format": "csv"}
        )
    )
    return str(path)
