import numpy as np
import pytest

from app.ds.meromorphic import make_meromorphic
from app.ds.mobius import disk_automorphism, identity_map, mobius
from app.ds.series import from_coefficients
from app.exceptions import CriticalPointError, DomainError
from app.lab.schwarzian import (
    ComposedMap,
    check_schwarzian_bound,
    conjugate_schwarzian,
    f0_series,
    fp_map,
    schwarzian_at,
    schwarzian_fd,
    schwarzian_norm,
)


def test_mobius_maps_have_vanishing_schwarzian():
    phi = mobius(2.0 + 1.0j, -0.5, 0.3j, 1.0)
    z = np.array([0.1, -0.4 + 0.2j, 0.7j])
    np.testing.assert_allclose(schwarzian_at(phi, z), 0.0, atol=1e-12)


def test_f0_schwarzian_at_origin():
    for k in (0.1, 0.5, 0.9):
        assert schwarzian_at(f0_series(k), 0.0) == pytest.approx(6 * k, rel=1e-14)


def test_f0_schwarzian_closed_form():
    k = 0.5
    z = np.array([0.3, 0.2 + 0.6j, -0.8j])
    np.testing.assert_allclose(schwarzian_at(f0_series(k), z), 6 * k / (1 + k * z**2) ** 2, rtol=1e-12)


def test_jet_and_contour_schwarzian_agree():
    f = f0_series(0.5)
    for z in (0.3, -0.2 + 0.4j):
        assert schwarzian_fd(f, z) == pytest.approx(schwarzian_at(f, z), abs=1e-6)


def test_schwarzian_of_meromorphic_function():
    f = make_meromorphic(0.3, [1.0])
    # a simple pole with no Taylor part is Mobius
    assert abs(schwarzian_at(f, 0.7j)) < 1e-12
    g = make_meromorphic(0.3, [1.0], [0.0, 0.2, 0.1])
    assert schwarzian_fd(g, 0.6j) == pytest.approx(schwarzian_at(g, 0.6j), abs=1e-6)


def test_composition_law_on_random_triples(rng):
    families = [f0_series(k) for k in (0.2, 0.4, 0.6)]
    families.append(make_meromorphic(0.9, [1.0], [0.0, 0.05, 0.02]))
    worst = 0.0
    for _ in range(100):
        f = families[int(rng.integers(len(families)))]
        phi = disk_automorphism(float(rng.uniform(0.0, 0.5)))
        z = 0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        direct, law = conjugate_schwarzian(f, phi, z)
        worst = max(worst, abs(direct - law))
    assert worst <= 1e-8


def test_identity_conjugation_is_plain_schwarzian():
    f = f0_series(0.4)
    direct, law = conjugate_schwarzian(f, identity_map(), 0.3 + 0.2j)
    assert direct == law == schwarzian_at(f, 0.3 + 0.2j)


def test_critical_point():
    with pytest.raises(CriticalPointError):
        schwarzian_at(from_coefficients([0.0, 0.0, 1.0]), 0.0)
    with pytest.raises(CriticalPointError):
        schwarzian_at(from_coefficients([0.0, 0.0, 1.0]), np.array([0.5, 0.0]))


@pytest.mark.parametrize("k", [0.2, 0.4, 0.5, 0.6])
def test_f0_norm_is_attained_at_origin(k):
    report = schwarzian_norm(f0_series(k))
    assert report.norm_estimate == pytest.approx(6 * k, abs=1e-4)
    assert report.argmax_z == 0
    assert report.convergence_flag
    assert report.weighted.shape == (128 * 512,)


@pytest.mark.parametrize(
    "phi", [disk_automorphism(0.5), mobius(1.0, 0.2, 0.1, 1.0), mobius(2.0 + 1.0j, -0.5, 0.3j, 1.0)]
)
def test_mobius_norm_vanishes(phi):
    assert schwarzian_norm(phi).norm_estimate <= 1e-10


@pytest.mark.parametrize("p", [0.2, 0.3, 0.5])
def test_fp_norm_and_argmax(p):
    k = 0.5
    fp = fp_map(k, p)
    assert schwarzian_at(fp, p) == pytest.approx(6 * k / (1 - p**2) ** 2, rel=1e-10)
    report = schwarzian_norm(fp)
    assert report.norm_estimate == pytest.approx(6 * k, rel=1e-3)
    assert report.norm_estimate <= 6 * k + 1e-9
    assert abs(report.argmax_z - p) < 2e-2


def test_schwarzian_bound_certificate():
    f = f0_series(0.4)
    certificate = check_schwarzian_bound(f, 0.4, 0.0)
    assert certificate.passed
    assert certificate.bound == pytest.approx(2.4 + 1e-6)
    assert check_schwarzian_bound(f, 0.3, 0.0).verdict.value == "fail"


def test_schwarzian_bound_domain():
    with pytest.raises(DomainError):
        check_schwarzian_bound(f0_series(0.4), 1.0, 0.0)
    with pytest.raises(DomainError):
        f0_series(1.0)


def test_composed_map_chain_rule():
    inner = disk_automorphism(0.2)
    outer = from_coefficients([0.0, 1.0, 0.5])
    z = 0.1 + 0.2j
    value, d1, d2, d3 = ComposedMap(outer, inner).jet(z)
    w, dw, ddw, _ = inner.jet(z)
    assert value == pytest.approx(w + 0.5 * w**2)
    assert d1 == pytest.approx((1 + w) * dw)
    assert d2 == pytest.approx(dw**2 + (1 + w) * ddw)


def test_bound_notes_explain_slack_of_conjugated_family():
    k, p = 0.4, 0.3
    certificate = check_schwarzian_bound(fp_map(k, p), k, p)
    assert certificate.passed
    assert certificate.value == pytest.approx(6 * k, rel=1e-3)
    assert certificate.margin == pytest.approx(6 * k / (1 - p**2) ** 2 - 6 * k, abs=3e-3)
    assert "6k=2.4" in certificate.notes
    assert "slack" not in check_schwarzian_bound(f0_series(k), k, 0.0).notes
