"""Boundary circle-family spectral asymmetry: the eta-hat form on the Hopf
fibration computed by three independent routes.

The eta-hat form on the two-sphere base has a degree-0 part and a degree-2
part proportional to the fiber curvature R = -(1/2) vol.  Both are carried
in a ``FormScalar``: ``a0`` is the degree-0 value and ``a2`` the real factor
multiplying R/(2i), so that

    eta_hat(lambda) = a0 + a2 * R / (2i).

Routes:
  * mode_sum  - direct numerical evaluation of the superconnection heat
                integral over the Fourier modes, with the 2-form direction
                propagated as a nilpotent perturbation;
  * poisson   - the Poisson-resummed sine/cosine series with Abel
                regularization and Richardson extrapolation;
  * bernoulli - the exact closed form via fractional-part polynomials.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ConvergenceError, GenericityError
from .gauge import InstantonData, LAMBDA_TOL, boundary_data, \
    dist_to_integers, frac_part

ROUTES = ("mode_sum", "poisson", "bernoulli")

# Flux of the fiber curvature R = dw = -(1/2) vol over the base sphere.
R_FLUX = -2.0 * np.pi


@dataclass(frozen=True)
class FormScalar:
    """Even-form scalar a0 + a2 * eps with nilpotent eps (vol ^ vol = 0)."""

    a0: float
    a2: float = 0.0

    def __add__(self, other):
        o = self._coerce(other)
        return FormScalar(self.a0 + o.a0, self.a2 + o.a2)

    __radd__ = __add__

    def __neg__(self):
        return FormScalar(-self.a0, -self.a2)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FormScalar(self.a0 * o.a0, self.a0 * o.a2 + self.a2 * o.a0)

    __rmul__ = __mul__

    def exp(self) -> "FormScalar":
        e = float(np.exp(self.a0))
        return FormScalar(e, e * self.a2)

    @staticmethod
    def _coerce(x):
        if isinstance(x, FormScalar):
            return x
        return FormScalar(float(x), 0.0)


@dataclass(frozen=True)
class SeriesSpec:
    k_cutoff: int = 1500          # Fourier mode window |k| <= K
    p_cutoff: int = 20000         # Poisson index cutoff
    u_min: float = 1e-4
    u_max: float = 1e4
    n_u: int = 601                # u-grid size (odd, for nested halving)
    tol: float = 1e-8

    def __post_init__(self):
        if self.k_cutoff < 50 or self.p_cutoff < 20:
            raise ValueError("cutoffs too small (need K >= 50, P >= 20)")
        if not (self.u_min < 1e-3 and self.u_max > 1e3):
            raise ValueError("u-grid must span [<1e-3, >1e3]")
        if self.tol <= 0:
            raise ValueError("series tolerance must be positive")


@dataclass
class EtaResult:
    """Per-channel eta-hat values and their integral over the boundary
    sphere, with route provenance."""

    per_channel: list
    integrated: float
    route: str
    error_estimate: float


def _require_generic(lam: float):
    if dist_to_integers(lam) < LAMBDA_TOL:
        raise GenericityError(
            f"lambda = {lam} is within {LAMBDA_TOL} of an integer")


# ---------------------------------------------------------------------------
# Spectrum


def vertical_spectrum(lam: float, k_cutoff: int):
    """Eigenvalues {k - lambda : |k| <= K} of the fiber Dirac operator."""
    _require_generic(lam)
    return [float(k - lam) for k in range(-k_cutoff, k_cutoff + 1)]


# ---------------------------------------------------------------------------
# Route 1: direct mode sum


def _u_grid(s: SeriesSpec):
    """Uniform grid in v = log u with trapezoid weights for du/(2 sqrt u);
    the integrand decays double-exponentially at the left end and like a
    Gaussian in u at the right end, so the trapezoid rule is spectral."""
    n = s.n_u if s.n_u % 2 == 1 else s.n_u + 1
    v = np.linspace(np.log(s.u_min), np.log(s.u_max), n)
    h = v[1] - v[0]
    u = np.exp(v)
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    # du = u dv; measure du / (2 sqrt(u)) -> sqrt(u)/2 dv
    return u, w * np.sqrt(u) / 2.0


def eta_mode_sum(lam: float, s: SeriesSpec | None = None) -> FormScalar:
    """Heat-kernel mode sum for eta-hat, with the 2-form direction carried
    as a nilpotent (first-order) complex perturbation of the spectrum."""
    s = s or SeriesSpec()
    _require_generic(lam)
    u, w = _u_grid(s)
    k = np.arange(-s.k_cutoff, s.k_cutoff + 1, dtype=float)
    x = (k - lam)[None, :]                      # (1, nk)
    uu = u[:, None]                             # (nu, 1)
    # z = x + nil * eps with nil = -i/(4u)  (eps stands for the 2-form R)
    nil = np.broadcast_to(-0.25j / uu, (u.size, k.size))
    # w(z) = z * exp(-u z^2), propagated to first order in eps
    val_q = -uu * x * x
    nil_q = -uu * 2.0 * x * nil
    e_val = np.exp(val_q)
    term_val = x * e_val
    term_nil = nil * e_val + x * nil_q * e_val
    sum_val = term_val.sum(axis=1)
    sum_nil = term_nil.sum(axis=1)
    integrand_scale = np.abs(sum_val[-1]) + np.abs(sum_nil[-1])
    if integrand_scale * np.sqrt(u[-1]) > s.tol:
        raise ConvergenceError(
            f"u-integral tail {integrand_scale:.3e} at u_max={u[-1]:.1e} "
            "exceeds the series tolerance; increase u_max")
    inv_sqrt_pi = 1.0 / np.sqrt(np.pi)
    a0_c = inv_sqrt_pi * np.dot(sum_val, w)
    nil_c = inv_sqrt_pi * np.dot(sum_nil, w)
    # eta_2 = nil_c * R; report the factor against R/(2i)
    a2_c = nil_c * 2.0j
    if abs(np.imag(a0_c)) > s.tol or abs(np.imag(a2_c)) > s.tol:
        raise ConsistencyError(
            "mode-sum eta acquired a spurious imaginary part")
    return FormScalar(float(np.real(a0_c)), float(np.real(a2_c)))


# ---------------------------------------------------------------------------
# Route 2: Poisson-resummed series


def abel_extrapolate(terms_of_q, base: float = 0.25, levels: int = 8):
    """Neville extrapolation of an Abel-regularized sum to q -> 1.

    ``terms_of_q`` maps q in (0,1) to the damped partial sum.  Returns
    (value, error_estimate)."""
    xs = np.array([base * 0.5**j for j in range(levels)])
    ys = np.array([terms_of_q(1.0 - x) for x in xs])
    tableau = ys.copy()
    for m in range(1, levels):
        for i in range(levels - 1, m - 1, -1):
            tableau[i] = tableau[i] + (tableau[i] - tableau[i - 1]) \
                * xs[i] / (xs[i - m] - xs[i])
    return float(tableau[-1]), float(abs(tableau[-1] - tableau[-2]))


def eta_poisson(lam: float, s: SeriesSpec | None = None) -> FormScalar:
    """Poisson-route evaluation: a0 from the sine series (Abel regularized,
    it converges only conditionally), a2 from the cosine series."""
    s = s or SeriesSpec()
    _require_generic(lam)
    p = np.arange(1, s.p_cutoff + 1, dtype=float)
    sin_terms = np.sin(2.0 * np.pi * p * lam) / (np.pi * p)
    cos_terms = np.cos(2.0 * np.pi * p * lam) / (np.pi**2 * p * p)
    a0, _ = abel_extrapolate(lambda q: -float(np.dot(sin_terms, q**p)))
    a2, _ = abel_extrapolate(lambda q: float(np.dot(cos_terms, q**p)))
    return FormScalar(a0, a2)


def cosine_series_value(lam: float, s: SeriesSpec | None = None) -> float:
    """Abel value of sum_p cos(2 pi p lambda) / (pi^2 p^2); defined for all
    lambda (at integers it is the Basel value 1/6)."""
    s = s or SeriesSpec()
    p = np.arange(1, s.p_cutoff + 1, dtype=float)
    cos_terms = np.cos(2.0 * np.pi * p * lam) / (np.pi**2 * p * p)
    value, _ = abel_extrapolate(lambda q: float(np.dot(cos_terms, q**p)))
    return value


# ---------------------------------------------------------------------------
# Route 3: Bernoulli closed form


def eta_bernoulli(lam: float) -> FormScalar:
    """Exact closed form: a0 = {lambda} - 1/2, a2 = {lambda}^2 - {lambda}
    + 1/6, fractional parts in (0, 1)."""
    _require_generic(lam)
    f = frac_part(lam)
    return FormScalar(f - 0.5, f * f - f + 1.0 / 6.0)


# ---------------------------------------------------------------------------
# Poisson summation identity (standalone check)


def poisson_check(a: float, s_param: float, k_cutoff: int = 2000,
                  p_cutoff: int = 200):
    """Both sides of the Gaussian Poisson-summation identity

        sum_k (k+a) e^(-4 pi^2 s (k+a)^2)
            = sum_{p>=1} 2 p sin(2 pi p a) (4 pi s)^(-3/2) e^(-p^2/(4s)).
    """
    if s_param <= 0:
        raise ValueError("s must be positive")
    k = np.arange(-k_cutoff, k_cutoff + 1, dtype=float)
    lhs = float(np.sum((k + a) * np.exp(-4.0 * np.pi**2 * s_param
                                        * (k + a) ** 2)))
    p = np.arange(1, p_cutoff + 1, dtype=float)
    with np.errstate(under="ignore"):
        rhs = float(np.sum(2.0 * p * np.sin(2.0 * np.pi * p * a)
                           * (4.0 * np.pi * s_param) ** -1.5
                           * np.exp(-p * p / (4.0 * s_param))))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Channel evaluation and the boundary integral


def eta_form(lam: float, route: str, series: SeriesSpec | None = None
             ) -> FormScalar:
    if route == "mode_sum":
        return eta_mode_sum(lam, series)
    if route == "poisson":
        return eta_poisson(lam, series)
    if route == "bernoulli":
        return eta_bernoulli(lam)
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def route_error_estimate(route: str, series: SeriesSpec | None = None
                         ) -> float:
    series = series or SeriesSpec()
    return 0.0 if route == "bernoulli" else series.tol


def eta_integral(data: InstantonData, route: str = "bernoulli",
                 series: SeriesSpec | None = None) -> EtaResult:
    """(1/2 pi i) oint eta-hat over the boundary sphere, trace-summed over
    channels, including the degree-2 coupling to the channel fluxes.

    Per channel: -a0 * chern + a2 / 2, from the fluxes oint R = -2 pi and
    (1/2 pi i) oint F^W = chern."""
    lambdas, cherns, _ = boundary_data(data)
    per_channel = []
    total = 0.0
    for lam_red, chern in zip(lambdas, cherns):
        form = eta_form(lam_red, route, series)
        per_channel.append(form)
        total += -form.a0 * chern + 0.5 * form.a2
    return EtaResult(per_channel=per_channel, integrated=total, route=route,
                     error_estimate=route_error_estimate(route, series)
                     * max(1, data.rank))


# ---------------------------------------------------------------------------
# Route comparison table


def route_table(lambdas, series: SeriesSpec | None = None):
    """Rows (lambda, route, a0, a2, integrated_at_chern0, error)."""
    rows = []
    for lam in lambdas:
        for route in ROUTES:
            form = eta_form(lam, route, series)
            rows.append((lam, route, form.a0, form.a2, 0.5 * form.a2,
                         route_error_estimate(route, series)))
    return rows


def write_route_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["lambda", "route", "a0", "a2coeff", "integrated",
                         "error"])
        for lam, route, a0, a2, integ, err in rows:
            writer.writerow([repr(float(lam)), route, repr(float(a0)),
                             repr(float(a2)), repr(float(integ)),
                             repr(float(err))])
