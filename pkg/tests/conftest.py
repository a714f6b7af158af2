import sys
import os

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from app.ds.meromorphic import PrincipalPart, extremal_area_function, make_meromorphic  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


@pytest.fixture
def simple_pole():
    """1/(z - p) with an optional Taylor head."""

    def build(p=0.5, a=1.0, taylor=(0.0,)):
        return make_meromorphic(p, [a], taylor)

    return build


@pytest.fixture
def extremal():
    """R(z) + a0 + a1 z/(1 - p z) with R = 1/(z - p)."""

    def build(k=0.4, p=0.3, a0=0.0, a1=None):
        principal = PrincipalPart(pole_location=p, coefficients=[1.0])
        return extremal_area_function(principal, a0, k if a1 is None else a1)

    return build
