"""Boundary eta-form: three routes, series identities, and integrals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnindex.errors import GenericityError
from tnindex.eta import (ROUTES, FormScalar, SeriesSpec, cosine_series_value,
                         eta_bernoulli, eta_form, eta_integral, eta_mode_sum,
                         eta_poisson, poisson_check, route_table,
                         vertical_spectrum, write_route_csv)
from tnindex.gauge import InstantonChannel, InstantonData

GENERIC = st.floats(min_value=0.02, max_value=0.98).filter(
    lambda x: min(x, 1.0 - x) > 0.02)


# ---------------------------------------------------------------------------
# FormScalar ring


def test_formscalar_nilpotent_product():
    a = FormScalar(2.0, 3.0)
    b = FormScalar(-1.0, 0.5)
    prod = a * b
    assert prod.a0 == pytest.approx(-2.0)
    assert prod.a2 == pytest.approx(2.0 * 0.5 + 3.0 * (-1.0))


def test_formscalar_exp():
    x = FormScalar(1.0, 0.25)
    e = x.exp()
    assert e.a0 == pytest.approx(np.e)
    assert e.a2 == pytest.approx(np.e * 0.25)


# ---------------------------------------------------------------------------
# Vertical spectrum


def test_spectrum_small_window():
    assert vertical_spectrum(0.25, 1) == [-1.25, -0.25, 0.75]


def test_spectrum_minimum():
    spec = vertical_spectrum(0.25, 50)
    assert min(abs(x) for x in spec) == pytest.approx(0.25)


def test_spectrum_shift_invariant_as_set():
    a = vertical_spectrum(0.3, 100)
    b = vertical_spectrum(1.3, 101)
    assert set(np.round(a, 12)) <= set(np.round(b, 12))


def test_spectrum_rejects_integer():
    with pytest.raises(GenericityError):
        vertical_spectrum(3.0, 10)


# ---------------------------------------------------------------------------
# Closed form route


def test_bernoulli_values():
    half = eta_bernoulli(0.5)
    assert half.a0 == pytest.approx(0.0)
    assert half.a2 == pytest.approx(-1.0 / 12.0)
    quarter = eta_bernoulli(0.25)
    assert quarter.a0 == pytest.approx(-0.25)
    assert quarter.a2 == pytest.approx(-1.0 / 48.0)
    assert eta_bernoulli(1.25) == eta_bernoulli(0.25)


@given(lam=GENERIC)
@settings(max_examples=30, deadline=None)
def test_bernoulli_reflection(lam):
    a = eta_bernoulli(lam)
    b = eta_bernoulli(1.0 - lam)
    assert a.a0 + b.a0 == pytest.approx(0.0, abs=1e-12)
    assert a.a2 == pytest.approx(b.a2, abs=1e-12)


# ---------------------------------------------------------------------------
# Mode sum route


def test_mode_sum_odd_spectrum_zero():
    assert abs(eta_mode_sum(0.5).a0) < 1e-8


def test_mode_sum_matches_bernoulli():
    a = eta_mode_sum(0.25)
    b = eta_bernoulli(0.25)
    assert a.a0 == pytest.approx(b.a0, abs=1e-6)
    assert a.a2 == pytest.approx(b.a2, abs=1e-6)


def test_mode_sum_reflection():
    assert eta_mode_sum(0.3).a0 == pytest.approx(-eta_mode_sum(0.7).a0,
                                                 abs=1e-8)


# ---------------------------------------------------------------------------
# Poisson route


def test_poisson_zero_at_half():
    assert eta_poisson(0.5).a0 == pytest.approx(0.0, abs=1e-14)


def test_poisson_quarter():
    assert eta_poisson(0.25).a0 == pytest.approx(-0.25, abs=1e-9)


def test_basel_limit_of_cosine_series():
    assert cosine_series_value(0.0) == pytest.approx(1.0 / 6.0, abs=1e-3)


def test_poisson_check_examples():
    lhs, rhs = poisson_check(0.0, 0.05)
    assert lhs == pytest.approx(0.0, abs=1e-14)
    assert rhs == pytest.approx(0.0, abs=1e-14)
    lhs, rhs = poisson_check(0.25, 0.02)
    assert abs(lhs - rhs) < 1e-10
    lhs1, rhs1 = poisson_check(1.25, 0.02)
    assert lhs1 == pytest.approx(lhs, abs=1e-12)
    assert rhs1 == pytest.approx(rhs, abs=1e-12)


# ---------------------------------------------------------------------------
# Route cross-validation


@pytest.mark.parametrize("lam", [0.1, 0.25, 0.4, 0.6, 0.9])
def test_routes_agree(lam):
    ref = eta_bernoulli(lam)
    for route in ("mode_sum", "poisson"):
        got = eta_form(lam, route)
        assert got.a0 == pytest.approx(ref.a0, abs=1e-6)
        assert got.a2 == pytest.approx(ref.a2, abs=1e-6)


@pytest.mark.parametrize("route", ROUTES)
def test_periodicity(route):
    a = eta_form(0.35, route)
    b = eta_form(2.35, route)
    assert a.a0 == pytest.approx(b.a0, abs=1e-9)
    assert a.a2 == pytest.approx(b.a2, abs=1e-9)


# ---------------------------------------------------------------------------
# Integrated eta over the boundary sphere


def test_integral_quarter_channel():
    data = InstantonData([InstantonChannel(0.25, 0.0, 0)])
    res = eta_integral(data)
    assert res.integrated == pytest.approx(-1.0 / 96.0)


def test_integral_half_channel_with_flux():
    data = InstantonData([InstantonChannel(0.5, 0.0, 3)])
    assert eta_integral(data).integrated == pytest.approx(-1.0 / 24.0)


def test_integral_two_channels():
    data = InstantonData([InstantonChannel(0.25, 0.0, 1),
                          InstantonChannel(0.75, 0.0, -1)])
    assert eta_integral(data).integrated == pytest.approx(0.5 - 1.0 / 48.0)


def test_integral_additive():
    a = InstantonData([InstantonChannel(0.25, 0.0, 1)])
    b = InstantonData([InstantonChannel(0.6, 0.0, -2)])
    total = eta_integral(a.concat(b)).integrated
    assert total == pytest.approx(eta_integral(a).integrated
                                  + eta_integral(b).integrated)


@given(lam=GENERIC, shift=st.integers(min_value=-3, max_value=3),
       chern=st.integers(min_value=-3, max_value=3))
@settings(max_examples=25, deadline=None)
def test_integral_holonomy_shift_invariant(lam, shift, chern):
    a = InstantonData([InstantonChannel(lam, 0.0, chern)])
    b = InstantonData([InstantonChannel(lam + shift, 0.0, chern)])
    assert eta_integral(a).integrated == pytest.approx(
        eta_integral(b).integrated, abs=1e-12)


# ---------------------------------------------------------------------------
# Series spec and CSV


def test_series_spec_validation():
    with pytest.raises(ValueError):
        SeriesSpec(k_cutoff=10)
    with pytest.raises(ValueError):
        SeriesSpec(p_cutoff=5)
    with pytest.raises(ValueError):
        SeriesSpec(u_min=0.1)
    with pytest.raises(ValueError):
        SeriesSpec(u_max=10.0)


def test_route_csv(tmp_path):
    rows = route_table([0.5])
    path = tmp_path / "routes.csv"
    write_route_csv(path, rows)
    lines = path.read_text().split("\n")
    assert lines[0] == "lambda,route,a0,a2coeff,integrated,error"
    assert len(lines) == 5  # header + 3 routes + trailing newline
    for line in lines[1:4]:
        a0 = float(line.split(",")[2])
        assert abs(a0) < 1e-6
