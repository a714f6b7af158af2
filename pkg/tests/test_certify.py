import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.config import ToleranceSettings
from app.ds.meromorphic import PrincipalPart, extremal_area_function, make_meromorphic
from app.ds.series import from_coefficients
from app.exceptions import DomainError, MismatchError
from app.lab.certify import (
    cauchy_schwarz_chain,
    certify_hadamard,
    check_area_coefficient_bound,
    check_area_inequality,
    check_first_coefficient,
    check_omega_derivative_bound,
    check_sufficient_membership,
    hadamard_alpha,
    hadamard_product,
    make_certificate,
)
from app.schema import CriterionId, Verdict


def test_margin_snaps_to_equality():
    loose = make_certificate(CriterionId.SUFFICIENT_MEMBERSHIP, 1.0, 1.0 + 5e-13)
    assert loose.margin == 0.0
    assert loose.verdict == Verdict.PASS
    strict = make_certificate(CriterionId.FIRST_COEFFICIENT_BOUND, 1.0, 1.0 + 5e-13, strict=True)
    assert strict.margin == -1e-12
    assert strict.verdict == Verdict.FAIL


def test_snap_follows_tolerance_override():
    tol = ToleranceSettings(equality_snap=1e-6)
    certificate = make_certificate(CriterionId.SUFFICIENT_MEMBERSHIP, 1.0, 1.0 - 1e-7, tol=tol)
    assert certificate.passed


def test_margin_sign_matches_verdict():
    failing = make_certificate(CriterionId.AREA_COEFFICIENT_BOUND, 2.0, 1.0)
    assert failing.margin == -1.0 and not failing.passed
    record = failing.to_record()
    assert record["criterion_id"] == "AreaCoefficientBound"
    assert record["verdict"] == "fail"


@pytest.mark.parametrize("k", [0.2, 0.4, 0.7])
@pytest.mark.parametrize("p", [0.0, 0.3, 0.5])
def test_extremal_family_meets_derived_inequality_with_equality(k, p):
    f = extremal_area_function(PrincipalPart(pole_location=p, coefficients=[1.0]), 0.0, k)
    as_printed, derived = check_area_inequality(f, k)

    assert derived.value == pytest.approx(k**2 / (1 - p**2) ** 2, rel=1e-12)
    assert derived.margin == 0.0
    assert derived.passed and not derived.advisory

    # the printed form falls short by k^2 T
    assert as_printed.advisory
    assert as_printed.verdict == Verdict.FAIL
    assert as_printed.margin == pytest.approx(-(k**4) / (1 - p**2) ** 2, rel=1e-9)


def test_area_inequality_holds_strictly_inside_class():
    f = make_meromorphic(0.3, [1.0], [0.0, 0.1])
    _, derived = check_area_inequality(f, 0.4)
    assert derived.passed and derived.margin > 0


def test_first_coefficient_bound_is_strict():
    f = make_meromorphic(0.0, [1.0], [0.0, 0.4])
    certificate = check_first_coefficient(f, 0.4)
    assert certificate.verdict == Verdict.FAIL
    assert certificate.margin == -1e-12
    assert check_first_coefficient(f, 0.41).passed


def test_first_coefficient_bound_scales_with_pole_order():
    f = make_meromorphic(0.5, [0.0, 1.0], [0.0, 0.6])
    certificate = check_first_coefficient(f, 0.4)
    assert certificate.bound == pytest.approx(0.4 / 0.75**2)
    assert certificate.passed


def test_sufficient_membership():
    f = make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.05])
    certificate = check_sufficient_membership(f, 0.5)
    assert certificate.bound == pytest.approx(0.5 / 1.2**3)
    assert certificate.value == pytest.approx(0.05)
    assert certificate.passed

    crowded = make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.1, 0.2])
    assert not check_sufficient_membership(crowded, 0.5).passed


def test_sufficient_membership_uses_top_coefficient():
    f = make_meromorphic(0.0, [10.0, 0.5], [0.0, 0.1])
    certificate = check_sufficient_membership(f, 0.5)
    assert certificate.bound == pytest.approx(0.5 * 0.5)


def test_area_coefficient_bound():
    f = make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.05])
    certificate = check_area_coefficient_bound(f, 0.5)
    assert certificate.value == pytest.approx(0.0025)
    assert certificate.bound == pytest.approx(0.25 / 0.96**4)
    assert certificate.passed


def test_k_outside_unit_interval():
    f = make_meromorphic(0.0, [1.0])
    for check in (check_first_coefficient, check_sufficient_membership, check_area_coefficient_bound):
        with pytest.raises(DomainError):
            check(f, 1.0)


def test_omega_derivative_bound():
    f = make_meromorphic(0.2, [1.0])
    small = check_omega_derivative_bound(f, from_coefficients([0.0, 0.05]), 0.5)
    assert small.value == pytest.approx(0.05, rel=1e-12)
    assert small.passed
    large = check_omega_derivative_bound(f, from_coefficients([0.0, 0.2, 0.2]), 0.5)
    assert large.value == pytest.approx(0.6, rel=1e-9)
    assert not large.passed


def _single(p, taylor, a=1.0, m=1):
    principal = [0.0] * (m - 1) + [a]
    return make_meromorphic(p, principal, taylor)


def test_hadamard_product_coefficients():
    spec = hadamard_product(_single(0.3, [1.0, 0.4, 0.2], a=2.0), _single(0.3, [3.0, 0.5], a=0.5))
    assert spec.product.principal.coefficients.tolist() == [1.0]
    assert spec.product.taylor.coefficients.tolist() == [3.0, 0.2]


def test_hadamard_alpha_passes_below_one():
    f = _single(0.3, [0.0, 0.4])
    spec = hadamard_product(f, f)
    assert hadamard_alpha(spec, 0.4, 0.4) == pytest.approx(0.16 / 0.49, rel=1e-12)
    certificate = certify_hadamard(spec, 0.4, 0.4)
    assert certificate.passed
    assert "cauchy_schwarz_slack" in certificate.notes


def test_hadamard_alpha_equal_to_one_fails():
    f = _single(0.5, [0.0, 0.5])
    certificate = certify_hadamard(hadamard_product(f, f), 0.5, 0.5)
    assert certificate.value == 1.0
    assert certificate.verdict == Verdict.FAIL


def test_hadamard_is_symmetric():
    f = _single(0.3, [0.0, 0.4], a=1.5, m=2)
    g = _single(0.3, [0.0, 0.1, 0.2], a=0.5, m=2)
    left = certify_hadamard(hadamard_product(f, g), 0.3, 0.6)
    right = certify_hadamard(hadamard_product(g, f), 0.6, 0.3)
    assert left.value == pytest.approx(right.value, rel=1e-15)
    assert left.verdict == right.verdict


def test_hadamard_needs_shared_pole():
    with pytest.raises(MismatchError):
        hadamard_product(_single(0.3, [0.0]), _single(0.4, [0.0]))
    with pytest.raises(MismatchError):
        hadamard_product(_single(0.3, [0.0]), _single(0.3, [0.0], m=2))


def test_hadamard_needs_single_coefficient_form():
    with pytest.raises(DomainError):
        hadamard_product(make_meromorphic(0.3, [1.0, 1.0]), _single(0.3, [0.0], m=2))


moderate = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-6, max_value=2.0),
    st.floats(min_value=-2.0, max_value=-1e-6),
)
coefficient_vectors = st.lists(moderate, min_size=1, max_size=20)


@settings(max_examples=80, deadline=None)
@given(coefficient_vectors, coefficient_vectors)
def test_cauchy_schwarz_chain_ordering(a, b):
    mixed, product = cauchy_schwarz_chain(np.array(a), np.array(b))
    assert mixed <= product * (1 + 1e-12) + 1e-300


def test_sufficient_condition_implies_first_coefficient_bound(rng):
    for _ in range(100):
        p = float(rng.uniform(0.0, 0.9))
        m = int(rng.integers(1, 4))
        k = float(rng.uniform(0.05, 0.95))
        principal = list(rng.uniform(-1.0, 1.0, size=m - 1)) + [1.0]
        n = np.arange(1, 7)
        taylor = rng.normal(size=6) + 1j * rng.normal(size=6)
        budget = k / (1.0 + p) ** (m + 1) * rng.uniform(0.1, 0.99)
        taylor *= budget / np.sum(n * np.abs(taylor))
        f = make_meromorphic(p, principal, np.concatenate([[0.0], taylor]))
        assert check_sufficient_membership(f, k).passed
        assert check_first_coefficient(f, k).passed
