"""Numerical verification of an L2-index formula for Dirac operators
twisted by anti-self-dual abelian instantons on Taub-NUT space.

The package computes, at desk scale, every piece of the index formula:
the blended metric family and its curvature, the normalized tr(R ^ R)
integral (= 1/12), model instanton fields with exact duality diagnostics,
the boundary eta-form by three independent routes, and the assembled
index with integrality checks.
"""

from .charclasses import (convergence_table, cs_tail_bound,
                          pontryagin_density, pontryagin_integral,
                          pontryagin_profile, pontryagin_scalar,
                          write_convergence_csv)
from .errors import (ChartError, ConsistencyError, ConvergenceError,
                     DomainError, GenericityError, IsotropyError,
                     TNIndexError)
from .eta import (ROUTES, EtaResult, FormScalar, SeriesSpec,
                  cosine_series_value, eta_bernoulli, eta_form, eta_integral,
                  eta_mode_sum, eta_poisson, poisson_check, route_table,
                  write_route_csv)
from .gauge import (InstantonChannel, InstantonData, boundary_data,
                    bulk_action, bulk_action_closed_form,
                    connection_coefficient, field_strength_at,
                    field_strength_coeff, model_connection_at)
from .geometry import (BlendProfile, CurvatureSample, Gauge, MetricSample,
                       MetricSpec, Point, Variant, curvature_at, hodge_star,
                       metric_at, metric_y_chart, potential_and_omega,
                       radial_coefficients, star3, wedge4)
from .index import (IndexReport, assemble, index_formula,
                    index_formula_full_flux, integrality_check)
from .quadrature import QuadratureSpec, integrate_radial, sample_density

__version__ = "1.0.0"

__all__ = [
    "BlendProfile", "ChartError", "ConsistencyError", "ConvergenceError",
    "CurvatureSample", "DomainError", "EtaResult", "FormScalar", "Gauge",
    "GenericityError", "IndexReport", "InstantonChannel", "InstantonData",
    "IsotropyError", "MetricSample", "MetricSpec", "Point", "QuadratureSpec",
    "ROUTES", "SeriesSpec", "TNIndexError", "Variant", "assemble",
    "boundary_data", "bulk_action", "bulk_action_closed_form",
    "connection_coefficient", "convergence_table", "cosine_series_value",
    "cs_tail_bound", "curvature_at", "eta_bernoulli", "eta_form",
    "eta_integral", "eta_mode_sum", "eta_poisson", "field_strength_at",
    "field_strength_coeff", "hodge_star", "index_formula",
    "index_formula_full_flux", "integrality_check", "integrate_radial",
    "metric_at", "metric_y_chart", "model_connection_at", "poisson_check",
    "pontryagin_density", "pontryagin_integral", "pontryagin_profile",
    "pontryagin_scalar", "potential_and_omega", "radial_coefficients",
    "route_table", "sample_density", "star3", "wedge4",
    "write_convergence_csv", "write_route_csv",
]
