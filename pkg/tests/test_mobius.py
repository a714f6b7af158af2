import numpy as np
import pytest

from app.ds.mobius import (
    disk_automorphism,
    identity_map,
    is_identity,
    mobius,
    mobius_apply,
    mobius_compose,
    mobius_derivative,
    mobius_inverse,
)
from app.exceptions import DegenerateMapError, DomainError


def test_normalized_determinant():
    phi = mobius(2.0, 1.0, 1.0, 3.0)
    assert phi.determinant == pytest.approx(1.0, abs=1e-15)
    assert mobius_apply(phi, 1.0) == pytest.approx(3.0 / 4.0)


def test_degenerate_map():
    with pytest.raises(DegenerateMapError):
        mobius(1.0, 2.0, 2.0, 4.0)


def test_inverse_and_compose():
    phi = mobius(1.0 + 1.0j, 0.5, -0.25, 2.0)
    assert is_identity(mobius_compose(phi, mobius_inverse(phi)))
    z = 0.3 - 0.2j
    assert mobius_apply(mobius_inverse(phi), mobius_apply(phi, z)) == pytest.approx(z, abs=1e-14)
    assert is_identity(identity_map())
    assert not is_identity(phi)


def test_disk_automorphism_preserves_unit_circle():
    phi = disk_automorphism(0.6)
    assert mobius_apply(phi, 0.0) == pytest.approx(0.6)
    circle = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 33))
    np.testing.assert_allclose(np.abs(mobius_apply(phi, circle)), 1.0, atol=1e-14)
    assert mobius_derivative(phi, 0.0) == pytest.approx(1.0 - 0.36)
    with pytest.raises(DomainError):
        disk_automorphism(1.0)


def test_jet_refuses_the_pole():
    phi = mobius(1.0, 0.0, 1.0, -0.5)
    with pytest.raises(DomainError):
        phi.jet(0.5)
