"""
Shared fixtures: the lambda-calculus signature, the alpha/beta/eta theory and
its compiled NEoL counterpart.
"""

import os
import sys
from pathlib import Path

import pytest

# Add project root to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from nominal.core.environments import Flavour, empty_theory
from nominal.corpus import CORPUS_DIR, lambda_abe_theory, lambda_signature
from nominal.kernel.theory_compiler import compile_theory


@pytest.fixture(scope="session")
def sig():
    return lambda_signature()


@pytest.fixture(scope="session")
def abe():
    return lambda_abe_theory()


@pytest.fixture(scope="session")
def abe_compiled(abe):
    return compile_theory(abe)


@pytest.fixture(scope="session")
def empty_nel(sig):
    return empty_theory(sig, Flavour.NEL)


@pytest.fixture(scope="session")
def empty_neol(sig):
    return empty_theory(sig, Flavour.NEOL)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR
