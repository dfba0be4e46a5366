"""Shared fixtures: generator sets are expensive enough to cache per session."""

from functools import lru_cache

import pytest

from liechan import repgen


@lru_cache(maxsize=None)
def su(n):
    return repgen.gell_mann(n)


@lru_cache(maxsize=None)
def spin(two_s):
    return repgen.spin_rep(two_s)


@lru_cache(maxsize=None)
def g2():
    return repgen.g2_rep()


@lru_cache(maxsize=None)
def clifford():
    return repgen.clifford_weyl()


@lru_cache(maxsize=None)
def su_tensors(n):
    return repgen.structure_tensors(n)


@pytest.fixture
def reps():
    """Accessor bundle so tests can grab cached representations."""
    return {
        "su": su,
        "spin": spin,
        "g2": g2,
        "clifford": clifford,
        "su_tensors": su_tensors,
    }
