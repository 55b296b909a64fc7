"""Model instanton channels: connections, duality, bulk action, boundary
data."""

import numpy as np
import pytest

from tnindex.errors import ChartError, GenericityError
from tnindex.gauge import (InstantonChannel, InstantonData, boundary_data,
                           bulk_action, bulk_action_closed_form,
                           connection_coefficient, field_strength_at,
                           field_strength_coeff, model_connection_at)
from tnindex.geometry import Point
from tnindex.quadrature import QuadratureSpec

RNG = np.random.default_rng(11)


def random_point(r_lo=0.2, r_hi=20.0):
    return Point.from_polar(float(RNG.uniform(r_lo, r_hi)),
                            float(RNG.uniform(0.3, np.pi - 0.3)),
                            float(RNG.uniform(0.0, 2.0 * np.pi)))


# ---------------------------------------------------------------------------
# Channel and data validation


def test_chern_must_be_integer():
    with pytest.raises(ValueError):
        InstantonChannel(lam=0.3, mcharge=1.0, chern=0.5)


def test_genericity_rejected_on_demand():
    ch = InstantonChannel(lam=1.0000001, mcharge=0.5)
    with pytest.raises(GenericityError):
        ch.check_generic()


def test_lambdas_pairwise_distinct():
    with pytest.raises(ValueError):
        InstantonData([InstantonChannel(0.3, 1.0), InstantonChannel(0.3, 2.0)])


# ---------------------------------------------------------------------------
# Connection coefficient and 1-form


def test_coefficient_substitution():
    # (dtau + omega) coefficient at lam = 0, m = 1, r = 0.5 equals 1/2
    ch = InstantonChannel(lam=0.0, mcharge=1.0)
    a = model_connection_at(ch, Point.from_polar(0.5, 1.0, 0.2))
    assert a[3] == pytest.approx(0.5)


def test_lam_equals_m_fiber_only_form_is_constant():
    """Without the monopole term, lam = m collapses to a = -i lam (dtau+omega)
    with an r-independent coefficient."""
    ch = InstantonChannel(lam=1.3, mcharge=1.3)
    for r in (0.2, 1.0, 7.0):
        p = Point.from_polar(r, 1.1, 0.4)
        a = model_connection_at(ch, p, monopole=False)
        assert a[3] == pytest.approx(1.3, abs=1e-14)
        assert connection_coefficient(ch, r) == pytest.approx(1.3)


def test_asymptotic_coefficient_is_lambda():
    ch = InstantonChannel(lam=0.4, mcharge=2.0)
    a = model_connection_at(ch, Point.from_polar(1e7, 1.0, 0.1))
    assert a[3] == pytest.approx(0.4, abs=1e-6)


def test_connection_axis_chart_error():
    ch = InstantonChannel(lam=0.3, mcharge=1.0)
    with pytest.raises(ChartError):
        model_connection_at(ch, Point(0.0, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Field strength


def test_lam_equals_m_field_fiber_only():
    """eta = 0 form: F = -i lam d(omega) when lam = m."""
    ch = InstantonChannel(lam=0.7, mcharge=0.7)
    p = random_point()
    g = field_strength_coeff(ch, p, monopole=False)
    from tnindex.geometry import star3
    grad_v = -0.5 * p.xyz() / p.r**3
    expected = np.zeros((4, 4))
    expected[:3, :3] = 0.7 * star3(grad_v)
    assert np.allclose(g, expected, atol=1e-12)


def test_lam_equals_m_field_vanishes_with_monopole_term():
    ch = InstantonChannel(lam=0.7, mcharge=0.7)
    g = field_strength_coeff(ch, random_point())
    assert np.abs(g).max() < 1e-14


def test_field_strength_is_closed():
    """Numeric dF at a random point: sum of cyclic derivatives < 1e-10."""
    ch = InstantonChannel(lam=0.37, mcharge=1.4)
    p = random_point(1.0, 5.0)
    x = np.append(p.xyz(), p.tau)
    h = 1e-3

    def coeff(x4):
        return field_strength_coeff(ch, Point(*x4[:3], x4[3]))

    worst = 0.0
    for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]:
        total = 0.0
        for (i, (j, k)) in [(a, (b, c)), (b, (c, a)), (c, (a, b))]:
            vals = []
            for step in (2 * h, h, -h, -2 * h):
                xs = x.copy()
                xs[i] += step
                vals.append(coeff(xs)[j, k])
            total += (-vals[0] + 8 * vals[1] - 8 * vals[2] + vals[3]) \
                / (12.0 * h)
        worst = max(worst, abs(total))
    assert worst < 1e-10


def test_duality_at_fifty_random_points():
    defects = []
    types = set()
    ch = InstantonChannel(lam=0.37, mcharge=1.3)
    for _ in range(50):
        s = field_strength_at(ch, random_point())
        defects.append(min(s.asd_defect, s.sd_defect) / s.norm)
        types.add(s.duality_type)
    assert max(defects) < 1e-8
    assert len(types) == 1


# ---------------------------------------------------------------------------
# Bulk action


def test_bulk_vanishes_for_lam_equals_m():
    data = InstantonData([InstantonChannel(1.3, 1.3),
                          InstantonChannel(0.6, 0.6)])
    value, _ = bulk_action(data, QuadratureSpec(n_r=64))
    assert abs(value) < 1e-8


def test_bulk_matches_closed_form_within_estimate():
    quad = QuadratureSpec()
    data = InstantonData([InstantonChannel(0.25, 1.0)])
    value, error = bulk_action(data, quad)
    exact = bulk_action_closed_form(data)
    assert exact == pytest.approx(-0.5 * (0.25 - 1.0) ** 2)
    assert abs(value - exact) <= error


def test_bulk_fiber_only_closed_form():
    quad = QuadratureSpec()
    data = InstantonData([InstantonChannel(0.25, 1.0)])
    value, error = bulk_action(data, quad, monopole=False)
    exact = bulk_action_closed_form(data, monopole=False)
    assert exact == pytest.approx(0.5 * (1.0 - 0.25**2))
    assert abs(value - exact) <= error


def test_bulk_stable_under_grid_doubling():
    data = InstantonData([InstantonChannel(0.0, 1.0)])
    v1, _ = bulk_action(data, QuadratureSpec(n_r=128))
    v2, _ = bulk_action(data, QuadratureSpec(n_r=256))
    assert np.isfinite(v1)
    assert abs(v2 - v1) < 1e-4


def test_bulk_additive_over_channels():
    quad = QuadratureSpec(n_r=64)
    a = InstantonData([InstantonChannel(0.25, 1.0)])
    b = InstantonData([InstantonChannel(0.6, -0.5)])
    v_a, _ = bulk_action(a, quad)
    v_b, _ = bulk_action(b, quad)
    v_ab, _ = bulk_action(a.concat(b), quad)
    assert v_ab == pytest.approx(v_a + v_b, abs=1e-12)


# ---------------------------------------------------------------------------
# Boundary data


def test_gap_examples():
    _, _, delta = boundary_data(InstantonData([InstantonChannel(0.3, 0.0),
                                               InstantonChannel(0.7, 0.0)]))
    assert delta == pytest.approx(0.15)
    _, _, delta = boundary_data(InstantonData([InstantonChannel(0.95, 0.0)]))
    assert delta == pytest.approx(0.025)


def test_reduction_mod_one():
    lams, cherns, delta = boundary_data(
        InstantonData([InstantonChannel(1.25, 0.0, 2)]))
    assert lams == [pytest.approx(0.25)]
    assert cherns == [2]
    assert delta == pytest.approx(0.125)


def test_boundary_rejects_integer_lambda_with_index():
    data = InstantonData([InstantonChannel(0.5, 0.0),
                          InstantonChannel(2.0 + 1e-9, 0.0)])
    with pytest.raises(GenericityError) as err:
        boundary_data(data)
    assert "channel 1" in str(err.value)
