import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.ds.series import (
    TailBound,
    TruncatedSeries,
    binomial_expand,
    cauchy_product,
    differentiate,
    dilate,
    evaluate,
    from_coefficients,
    geometric_tail_estimate,
    jet,
    monomial,
    scale,
    series_add,
)
from app.exceptions import DomainError

small_complex = st.builds(
    complex,
    st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
    st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
)
coefficient_lists = st.lists(small_complex, min_size=1, max_size=12)


def test_evaluate_horner():
    s = from_coefficients([1.0, 2.0, 3.0])
    assert evaluate(s, 0.5) == pytest.approx(2.75)
    values = evaluate(s, np.array([0.0, 0.5j]))
    assert values[0] == 1.0
    assert values[1] == pytest.approx(1.0 + 1.0j - 0.75)


def test_evaluate_rejects_points_outside_declared_radius():
    s = from_coefficients([1.0, 1.0], declared_radius=0.5)
    with pytest.raises(DomainError):
        evaluate(s, 0.6)
    # the radius slack is relative and tiny
    evaluate(s, 0.5 * (1.0 + 1e-13))


def test_series_validation():
    with pytest.raises(DomainError):
        TruncatedSeries(coefficients=[])
    with pytest.raises(DomainError):
        TruncatedSeries(coefficients=[1.0, math.nan])
    with pytest.raises(DomainError):
        TruncatedSeries(coefficients=[1.0], declared_radius=1.5)


def test_coefficients_are_read_only():
    values = np.array([1.0, 2.0])
    s = from_coefficients(values)
    values[0] = 99.0
    assert s.coefficients[0] == 1.0
    with pytest.raises(ValueError):
        s.coefficients[0] = 3.0


def test_differentiate_and_jet():
    s = from_coefficients([0.0, 0.0, 0.0, 1.0])
    assert differentiate(s).coefficients.tolist() == [0.0, 0.0, 3.0]
    value, d1, d2, d3 = jet(s, 0.5)
    assert value == pytest.approx(0.125)
    assert d1 == pytest.approx(0.75)
    assert d2 == pytest.approx(3.0)
    assert d3 == pytest.approx(6.0)
    # short series pad with zeros
    assert jet(from_coefficients([2.0, 1.0]), 0.1)[2:] == (0j, 0j)
    with pytest.raises(DomainError):
        differentiate(from_coefficients([1.0]))


def test_cauchy_product_geometric_series():
    ones = from_coefficients(np.ones(10))
    one_minus_z = from_coefficients([1.0, -1.0] + [0.0] * 8)
    product = cauchy_product(ones, one_minus_z)
    assert product.coefficients.tolist() == [1.0] + [0.0] * 9


def test_cauchy_product_truncates_to_shorter_order():
    product = cauchy_product(from_coefficients([1.0, 1.0, 1.0]), from_coefficients([1.0, 1.0]))
    assert product.truncation_order == 1


@settings(max_examples=60, deadline=None)
@given(coefficient_lists, coefficient_lists)
def test_cauchy_product_is_exactly_commutative(a, b):
    left = cauchy_product(from_coefficients(a), from_coefficients(b))
    right = cauchy_product(from_coefficients(b), from_coefficients(a))
    assert np.array_equal(left.coefficients, right.coefficients)


def test_add_scale_monomial_dilate():
    a = from_coefficients([1.0, 2.0, 3.0])
    b = from_coefficients([1.0, 1.0])
    assert series_add(a, b).coefficients.tolist() == [2.0, 3.0]
    assert scale(a, 2j).coefficients.tolist() == [2j, 4j, 6j]
    assert monomial(2, 4).coefficients.tolist() == [0, 0, 1, 0, 0]
    assert dilate(a, 0.5).coefficients.tolist() == [1.0, 1.0, 0.75]
    with pytest.raises(DomainError):
        monomial(3, 2)
    with pytest.raises(DomainError):
        dilate(a, 1.5)


def test_binomial_expand_small_cases():
    assert binomial_expand(2, 0.5, 3).coefficients.tolist() == [1.0, 1.0, 0.75, 0.5]
    geometric = binomial_expand(1, 0.3, 20).coefficients.real
    assert np.allclose(geometric, 0.3 ** np.arange(21), rtol=1e-14, atol=0.0)


def test_binomial_expand_recurrence_matches_exact_binomials():
    terms = binomial_expand(3, 0.9, 100).coefficients.real
    for l in (70, 80, 100):
        exact = math.comb(l + 2, l) * 0.9**l
        assert terms[l] == pytest.approx(exact, rel=1e-12)


def test_binomial_tail_bound_is_exact_for_geometric_series():
    tail = binomial_expand(1, 0.5, 10).tail
    assert tail is not None
    assert tail.bound_value(1.0) == pytest.approx(0.5**10, rel=1e-14)


def test_binomial_expand_rejects_bad_arguments():
    with pytest.raises(DomainError):
        binomial_expand(0, 0.5, 4)
    with pytest.raises(DomainError):
        binomial_expand(1, 1.0, 4)


def test_tail_bound_diverges_past_ratio():
    tail = TailBound(geometric_ratio=0.5, leading_bound=1.0, order=3)
    assert tail.bound_value(0.5) == pytest.approx(0.5**4 / 0.75)
    assert tail.bound_value(2.0) == math.inf


def test_geometric_tail_estimate():
    assert geometric_tail_estimate(np.array([])) == 0.0
    assert geometric_tail_estimate(np.array([1.0])) == math.inf
    assert geometric_tail_estimate(np.array([1.0, 0.5, 0.25, 0.125])) == pytest.approx(0.125)
    assert geometric_tail_estimate(np.array([1.0, 0.0, 0.0])) == 0.0
    assert geometric_tail_estimate(np.array([1.0, 1.0, 1.0])) == math.inf


unit_coefficients = st.lists(
    st.builds(
        complex,
        st.floats(min_value=-0.7, max_value=0.7, allow_nan=False),
        st.floats(min_value=-0.7, max_value=0.7, allow_nan=False),
    ),
    min_size=2,
    max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(
    unit_coefficients,
    st.floats(min_value=0.0, max_value=0.9),
    st.floats(min_value=0.0, max_value=2 * math.pi),
)
def test_derivative_matches_central_difference(coefficients, radius, angle):
    s = from_coefficients(coefficients)
    z = radius * complex(math.cos(angle), math.sin(angle))
    h = 1e-5
    central = (evaluate(s, z + h) - evaluate(s, z - h)) / (2 * h)
    assert abs(evaluate(differentiate(s), z) - central) <= 1e-7


@pytest.mark.parametrize("j", [1, 2, 3, 5])
@pytest.mark.parametrize("p", [0.1, 0.3, 0.5])
@pytest.mark.parametrize("N", [10, 20, 40, 80])
def test_binomial_partial_sums_within_tail_bound(j, p, N):
    s = binomial_expand(j, p, N)
    partial = math.fsum(s.coefficients.real)
    exact = (1 - p) ** -j
    remainder = exact - partial
    assert remainder >= -1e-14 * exact
    assert remainder <= s.tail.bound_value(1.0) + 1e-14 * exact
