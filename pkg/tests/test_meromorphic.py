import numpy as np
import pytest

from app.ds.meromorphic import (
    PrincipalPart,
    default_laurent_order,
    derivative_f,
    evaluate_f,
    exterior_form,
    extremal_area_function,
    from_spec,
    function_digest,
    laurent_quadrature_oracle,
    laurent_recentre,
    make_meromorphic,
    principal_value,
    to_spec,
)
from app.ds.series import evaluate
from app.exceptions import DomainError, PoleProximityError

PRINCIPAL_HEADS = [1.0, 0.5 - 0.25j, 0.3]


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_recentred_coefficients_match_contour_quadrature(p, m):
    f = make_meromorphic(p, PRINCIPAL_HEADS[:m])
    K = 40
    recentred = laurent_recentre(f, K).coefficients
    quadrature = laurent_quadrature_oracle(f, 0.9, K)
    np.testing.assert_allclose(recentred, quadrature, rtol=0.0, atol=1e-8)


def test_simple_pole_recentres_to_geometric_coefficients():
    f = make_meromorphic(0.5, [1.0])
    c = laurent_recentre(f, 30).coefficients
    np.testing.assert_allclose(c.real, 0.5 ** np.arange(30), rtol=1e-12, atol=0.0)
    assert np.all(c.imag == 0.0)


def test_pole_at_origin_terminates():
    tail = laurent_recentre(make_meromorphic(0.0, [1.0, 2.0]), 5)
    assert tail.tail_estimate == 0.0
    assert tail.coefficients.tolist() == [1.0, 2.0, 0.0, 0.0, 0.0]


def test_laurent_partial_sum_reproduces_principal_part():
    f = make_meromorphic(0.3, [1.0, 0.5j])
    tail = laurent_recentre(f)
    z = 0.95 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 17))
    np.testing.assert_allclose(tail.evaluate(z), principal_value(f.principal, z), atol=1e-10)


def test_default_laurent_order_needs_radius_past_pole():
    principal = PrincipalPart(pole_location=0.5, coefficients=[1.0])
    assert default_laurent_order(principal, 0.9) >= 1
    with pytest.raises(DomainError):
        default_laurent_order(principal, 0.5)


@pytest.mark.parametrize("p", [0.0, 0.3, 0.6])
def test_exterior_form_matches_principal_part_at_reciprocal(p):
    f = make_meromorphic(p, [1.0, -0.4, 0.2j])
    series = exterior_form(f)
    zeta = 0.75 * np.exp(2j * np.pi * np.arange(12) / 12)
    np.testing.assert_allclose(evaluate(series, zeta), principal_value(f.principal, 1.0 / zeta), atol=1e-10)


def test_principal_part_validation():
    with pytest.raises(DomainError):
        PrincipalPart(pole_location=1.0, coefficients=[1.0])
    with pytest.raises(DomainError):
        PrincipalPart(pole_location=-0.1, coefficients=[1.0])
    with pytest.raises(DomainError):
        PrincipalPart(pole_location=0.2, coefficients=[1.0, 0.0])
    assert PrincipalPart(pole_location=0.2, coefficients=[0.0, 3.0]).order == 2


def test_pole_guard():
    f = make_meromorphic(0.4, [1.0])
    with pytest.raises(PoleProximityError):
        evaluate_f(f, 0.4 + 1e-12)
    # the guard is a DomainError too
    with pytest.raises(DomainError):
        principal_value(f.principal, np.array([0.0, 0.4]))


def test_derivative_of_simple_pole():
    f = make_meromorphic(0.25, [2.0], [1.0, 3.0])
    z = 0.5 + 0.5j
    assert derivative_f(f, z) == pytest.approx(-2.0 / (z - 0.25) ** 2 + 3.0, abs=1e-14)


def test_extremal_area_function_taylor_part():
    principal = PrincipalPart(pole_location=0.3, coefficients=[1.0])
    f = extremal_area_function(principal, 0.1, 0.4)
    z = 0.6 - 0.2j
    assert evaluate(f.taylor, z) == pytest.approx(0.1 + 0.4 * z / (1.0 - 0.3 * z), abs=1e-14)
    assert f.taylor.tail is not None


def test_spec_round_trip_and_digest():
    f = make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.05])
    document = to_spec(f)
    assert document["pole"] == {"p": 0.2, "m": 2, "principal": [[0.0, 0.0], [1.0, 0.0]]}
    g = from_spec(document)
    assert function_digest(g) == function_digest(f)
    assert function_digest(make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.06])) != function_digest(f)


def test_from_spec_rejects_order_mismatch():
    document = {"pole": {"p": 0.2, "m": 1, "principal": [[0.0, 0.0], [1.0, 0.0]]}}
    with pytest.raises(DomainError):
        from_spec(document)
