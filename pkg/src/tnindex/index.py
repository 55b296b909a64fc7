"""Assembly of the L2-index from bulk, gravitational, and boundary
contributions, with integrality diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .charclasses import pontryagin_integral
from .errors import ConsistencyError
from .eta import SeriesSpec, eta_integral
from .gauge import InstantonData, boundary_data, bulk_action
from .geometry import BlendProfile, MetricSpec, Variant
from .quadrature import QuadratureSpec

GRAV_MODES = ("numeric", "lemma")
GRAV_LEMMA_CONSTANT = 1.0 / 12.0


@dataclass
class IndexReport:
    """Assembled index with per-term provenance.

    index_value = bulk + grav - eta_contribution, and the integrality
    defect is the distance to nearest_integer (ties to even)."""

    bulk: float
    grav: float
    eta_contribution: float
    index_value: float
    nearest_integer: int
    integrality_defect: float
    route: str
    grav_mode: str
    bulk_error: float
    grav_error: float
    eta_error: float
    cancellation_residual: float
    quadrature: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": "index-report/1",
            "bulk": self.bulk,
            "grav": self.grav,
            "eta_contribution": self.eta_contribution,
            "index_value": self.index_value,
            "nearest_integer": self.nearest_integer,
            "integrality_defect": self.integrality_defect,
            "route": self.route,
            "grav_mode": self.grav_mode,
            "errors": {
                "bulk": self.bulk_error,
                "grav": self.grav_error,
                "eta": self.eta_error,
                "cancellation_residual": self.cancellation_residual,
            },
            "quadrature": self.quadrature,
            "series": self.series,
        }


def index_formula(data: InstantonData, bulk: float) -> float:
    """bulk + sum_j ({lam_j} - 1/2) c_j - (1/2) sum_j ({lam_j}^2 - {lam_j}),
    reading the boundary traces channel by channel."""
    lambdas, cherns, _ = boundary_data(data)
    total = bulk
    for lam, c in zip(lambdas, cherns):
        total += (lam - 0.5) * c - 0.5 * (lam * lam - lam)
    return total


def index_formula_full_flux(data: InstantonData, bulk: float) -> float:
    """Variant of index_formula whose flux term couples to the full boundary
    flux {lam_j} + c_j instead of the bundle degree c_j alone.

    For the exact (anti-)self-dual model with integer mcharge m_j and
    induced degree c_j = -m_j this evaluates to the integer
    -sum_j m_j (m_j - 1)/2 independently of the holonomy parameters."""
    lambdas, cherns, _ = boundary_data(data)
    total = bulk
    for lam, c in zip(lambdas, cherns):
        total += (lam - 0.5) * (lam + c) - 0.5 * (lam * lam - lam)
    return total


def integrality_check(value: float, tol: float):
    """(nearest integer, defect, pass); half-integer ties round to even."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    nearest = int(np.rint(value))  # rint rounds half to even
    defect = abs(value - nearest)
    return nearest, defect, defect <= tol


def _grav_term(rank: int, quad: QuadratureSpec, grav_mode: str,
               metric: MetricSpec | None):
    """(value, error_estimate) of the gravitational contribution."""
    if grav_mode == "lemma":
        return rank * GRAV_LEMMA_CONSTANT, 0.0
    if metric is None:
        metric = MetricSpec(variant=Variant.EXACT_D, blend=BlendProfile())
    value, error, tail = pontryagin_integral(metric, quad)
    return rank * value, rank * (error + tail)


def assemble(data: InstantonData, quad: QuadratureSpec,
             route: str = "bernoulli", grav_mode: str = "numeric",
             series: SeriesSpec | None = None,
             metric: MetricSpec | None = None, l: float = 1.0,
             monopole: bool = True) -> IndexReport:
    """Full pipeline: bulk action quadrature, gravitational term (numeric
    integration or the certified 1/12 constant), and the boundary term, with
    a hard consistency check that the assembled value reproduces
    index_formula up to 1e-9 plus the quadrature error budget (the rank/12
    gravitational constant against the rank/2 * 1/6 boundary constant)."""
    if grav_mode not in GRAV_MODES:
        raise ValueError(f"unknown grav mode {grav_mode!r}")
    series = series if series is not None else SeriesSpec()

    bulk, bulk_err = bulk_action(data, quad, l, monopole)
    grav, grav_err = _grav_term(data.rank, quad, grav_mode, metric)
    eta = eta_integral(data, route, series)
    eta_total = eta.integrated
    eta_err = eta.error_estimate

    index_value = bulk + grav - eta_total
    formula_value = index_formula(data, bulk)
    residual = abs(index_value - formula_value)
    budget = 1e-9 + grav_err + eta_err
    if residual > budget:
        raise ConsistencyError(
            f"assembled index differs from the closed formula by "
            f"{residual:.3e}, beyond the error budget {budget:.3e}; "
            "formula transcription bug")

    nearest, defect, _ = integrality_check(index_value, max(quad.tol, 1e-12))
    return IndexReport(
        bulk=bulk, grav=grav, eta_contribution=eta_total,
        index_value=index_value, nearest_integer=nearest,
        integrality_defect=defect, route=route, grav_mode=grav_mode,
        bulk_error=bulk_err, grav_error=grav_err, eta_error=eta_err,
        cancellation_residual=residual,
        quadrature={"r_min": quad.r_min, "r_max": quad.r_max,
                    "n_r": quad.n_r, "n_ang": quad.n_ang,
                    "scheme": quad.scheme, "tol": quad.tol},
        series={"k_cutoff": series.k_cutoff, "p_cutoff": series.p_cutoff,
                "u_min": series.u_min, "u_max": series.u_max,
                "n_u": series.n_u, "tol": series.tol},
    )
