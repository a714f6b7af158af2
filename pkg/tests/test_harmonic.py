import math

import numpy as np
import pytest

from app.ds.domains import disk, polygon
from app.ds.series import from_coefficients
from app.exceptions import DegenerateEta, DomainError
from app.lab.harmonic import (
    HarmonicMapSpec,
    bilipschitz_sample_check,
    check_extension_condition,
    co_lipschitz_estimate,
    dilatation_omega_f,
    sup_omega_f,
)

IDENTITY = from_coefficients([0.0, 1.0])
SQUARE = [-0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j, -0.5 + 0.5j]


def _spec(g_scale=0.15, domain=None, h=IDENTITY):
    g = from_coefficients([0.0, 0.0, g_scale])
    return HarmonicMapSpec(h=h, g=g, domain=domain or disk())


def test_condition_margin_on_unit_disk():
    certificate = check_extension_condition(_spec(), IDENTITY, 0.45)
    assert certificate.value == pytest.approx(0.3, abs=1e-12)
    assert certificate.bound == pytest.approx(0.45)
    assert certificate.margin == pytest.approx(0.15, abs=1e-12)
    assert certificate.passed


def test_condition_fails_for_small_k():
    certificate = check_extension_condition(_spec(), IDENTITY, 0.2)
    assert certificate.margin == pytest.approx(-0.1, abs=1e-12)
    assert not certificate.passed


def test_margin_shrinks_as_g_grows():
    margins = [
        check_extension_condition(_spec(scale), IDENTITY, 0.45).margin for scale in (0.05, 0.1, 0.2, 0.3)
    ]
    assert all(a > b for a, b in zip(margins, margins[1:]))


def test_condition_on_square():
    certificate = check_extension_condition(_spec(domain=polygon(SQUARE)), IDENTITY, 0.45)
    assert certificate.margin == pytest.approx(0.45 - 0.3 * math.sqrt(0.5), abs=1e-12)


def test_co_lipschitz_constants():
    eta = from_coefficients([0.0, 1.0, 0.2])
    estimate = co_lipschitz_estimate(eta, disk())
    assert estimate.K_lower == pytest.approx(0.6, abs=1e-12)
    assert estimate.M_upper == pytest.approx(1.4, abs=1e-12)
    assert estimate.argmin_z == pytest.approx(-1.0)


def test_degenerate_comparison_map():
    with pytest.raises(DegenerateEta):
        co_lipschitz_estimate(from_coefficients([0.0, 0.0, 1.0]), disk())


def test_interior_grid_minimum():
    with pytest.raises(DomainError):
        co_lipschitz_estimate(IDENTITY, disk(), grid=32)


def test_k_outside_unit_interval():
    with pytest.raises(DomainError):
        check_extension_condition(_spec(), IDENTITY, 1.0)


def test_spec_construction_errors():
    # not sense-preserving
    with pytest.raises(DomainError):
        HarmonicMapSpec(h=IDENTITY, g=from_coefficients([0.0, 1.2]), domain=disk())
    # domain reaches past the trusted radius
    with pytest.raises(DomainError):
        _spec(h=from_coefficients([0.0, 1.0], declared_radius=0.5))
    # clockwise polygon
    with pytest.raises(DomainError):
        polygon(SQUARE[::-1])


def test_second_dilatation():
    spec = _spec()
    assert dilatation_omega_f(spec, 0.5j) == pytest.approx(0.3 * 0.5j)
    sup, argmax = sup_omega_f(spec)
    assert sup == pytest.approx(0.3, abs=1e-12)
    assert abs(argmax) == pytest.approx(1.0)


def test_bilipschitz_clean_inside_class():
    report = bilipschitz_sample_check(_spec(), IDENTITY, 0.45, seed=11)
    assert report.clean
    assert report.lower_constant == pytest.approx(0.55)
    assert report.upper_constant == pytest.approx(1.45)
    assert 0.55 <= report.min_ratio <= report.max_ratio <= 1.45


def test_bilipschitz_ratio_is_one_for_analytic_identity():
    spec = HarmonicMapSpec(h=IDENTITY, g=from_coefficients([0.0]), domain=disk())
    report = bilipschitz_sample_check(spec, IDENTITY, 0.3)
    assert report.min_ratio == pytest.approx(1.0, abs=1e-12)
    assert report.max_ratio == pytest.approx(1.0, abs=1e-12)


def test_bilipschitz_violations_outside_class():
    spec = HarmonicMapSpec(h=IDENTITY, g=from_coefficients([0.0, 0.9]), domain=disk())
    report = bilipschitz_sample_check(spec, IDENTITY, 0.45, seed=5)
    assert report.lower_violations > 0
    assert report.upper_violations > 0
    assert not report.clean


def test_bilipschitz_is_seeded():
    spec = _spec()
    first = bilipschitz_sample_check(spec, IDENTITY, 0.45, seed=2)
    assert first == bilipschitz_sample_check(spec, IDENTITY, 0.45, seed=2)
    with pytest.raises(DomainError):
        bilipschitz_sample_check(spec, IDENTITY, 0.45, pairs=10)
