"""Pontryagin density, its radial integral, and tail bounds."""

import numpy as np
import pytest

from tnindex.charclasses import (convergence_table, cs_tail_bound,
                                 pontryagin_density, pontryagin_integral,
                                 pontryagin_scalar, write_convergence_csv)
from tnindex.errors import IsotropyError
from tnindex.geometry import BlendProfile, MetricSpec, Variant
from tnindex.quadrature import QuadratureSpec

TARGET = 1.0 / 12.0


def exact_d_spec(kind="quintic"):
    return MetricSpec(variant=Variant.EXACT_D, blend=BlendProfile(kind=kind))


def test_zero_curvature_gives_zero_scalar():
    assert np.allclose(pontryagin_scalar(np.zeros((3, 4, 4, 4, 4))), 0.0)


def test_density_is_isotropic_and_decays():
    quad = QuadratureSpec()
    spec = exact_d_spec()
    rho_mid = pontryagin_density(spec, 3.0, quad)
    assert rho_mid != 0.0
    rho_far = pontryagin_density(spec, 60.0, quad)
    rho_farther = pontryagin_density(spec, 120.0, quad)
    assert abs(rho_farther) < abs(rho_far) < 1e-4 * abs(rho_mid)


def test_integral_reaches_one_twelfth():
    quad = QuadratureSpec(n_r=128)
    value, error, tail = pontryagin_integral(exact_d_spec(), quad)
    assert value == pytest.approx(TARGET, abs=1e-3)
    assert tail < 1e-4


def test_tail_bound_decreases_with_cut():
    quad = QuadratureSpec()
    spec = exact_d_spec()
    bounds = [cs_tail_bound(spec, r_cut, quad)
              for r_cut in (80.0, 120.0, 160.0)]
    assert bounds[0] < 1e-4
    assert bounds[0] > bounds[1] > bounds[2] >= 0.0


def test_tail_bound_requires_cut_past_blend():
    quad = QuadratureSpec()
    with pytest.raises(ValueError):
        cs_tail_bound(exact_d_spec(), 3.0, quad)


def test_blend_independence():
    quad = QuadratureSpec(n_r=128)
    v_q, e_q, t_q = pontryagin_integral(exact_d_spec("quintic"), quad)
    v_s, e_s, t_s = pontryagin_integral(exact_d_spec("septic"), quad)
    assert abs(v_q - v_s) < 2.0 * (e_q + e_s + t_q + t_s) + 1e-4


def test_isotropy_violation_detected():
    """A deliberately tight tolerance flags the (tiny) angular spread."""
    quad = QuadratureSpec(tol=1e-16)
    with pytest.raises(IsotropyError):
        pontryagin_density(exact_d_spec(), 3.0, quad)


def test_convergence_table_csv(tmp_path):
    quad = QuadratureSpec(n_r=64)
    rows = convergence_table(exact_d_spec(), quad, n_r_values=[32, 64])
    path = tmp_path / "table.csv"
    write_convergence_csv(path, rows)
    text = path.read_text()
    lines = text.split("\n")
    assert lines[0] == "N_r,value,error_estimate,tail_bound"
    assert len(lines) == 4 and lines[-1] == ""
    assert "\r" not in text
    n, value, err, tail = lines[1].split(",")
    assert int(n) == 32
    assert float(value) == pytest.approx(rows[0][1])
