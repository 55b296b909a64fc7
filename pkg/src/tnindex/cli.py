"""Batch command-line front end: JSON configuration in, JSON/CSV reports
out, for the five verification workflows."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .charclasses import convergence_table, write_convergence_csv
from .errors import TNIndexError
from .eta import ROUTES, SeriesSpec, route_table, write_route_csv
from .gauge import InstantonChannel, InstantonData
from .geometry import (BlendProfile, MetricSpec, Point, Variant,
                       curvature_at, hodge_star, potential_and_omega, star3)
from .index import assemble
from .quadrature import QuadratureSpec

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

MODES = ("index", "eta", "geometry-check", "pontryagin", "convergence")

PONT_TARGET = 1.0 / 12.0


class ConfigError(Exception):
    """Validation failure of an otherwise well-formed configuration."""


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _build_metric(section: dict) -> MetricSpec:
    blend_cfg = section.get("blend", {})
    blend = BlendProfile(r_in=float(blend_cfg.get("r_in", 2.0)),
                         r_out=float(blend_cfg.get("r_out", 4.0)),
                         kind=blend_cfg.get("kind", "quintic"))
    try:
        variant = Variant(section.get("variant", "ExactD"))
    except ValueError:
        raise ConfigError(
            f"unknown metric variant {section.get('variant')!r}") from None
    return MetricSpec(variant=variant, t=float(section.get("t", 0.0)),
                      blend=blend, l=float(section.get("l", 1.0)))


def _build_quad(section: dict) -> QuadratureSpec:
    return QuadratureSpec(
        r_min=float(section.get("r_min", 1e-4)),
        r_max=float(section.get("r_max", 80.0)),
        n_r=int(section.get("n_r", 256)),
        n_ang=int(section.get("n_ang", 8)),
        scheme=section.get("scheme", "gauss-legendre-composite"),
        tol=float(section.get("tol", 1e-3)))


def _build_series(section: dict) -> SeriesSpec:
    return SeriesSpec(
        k_cutoff=int(section.get("k_cutoff", 1500)),
        p_cutoff=int(section.get("p_cutoff", 20000)),
        u_min=float(section.get("u_min", 1e-4)),
        u_max=float(section.get("u_max", 1e4)),
        n_u=int(section.get("n_u", 601)),
        tol=float(section.get("tol", 1e-8)))


def _build_instanton(section: dict) -> InstantonData:
    channels = section.get("channels")
    _require(isinstance(channels, list) and channels,
             "instanton.channels must be a non-empty list")
    built = []
    for ch in channels:
        built.append(InstantonChannel(lam=float(ch["lam"]),
                                      mcharge=float(ch.get("mcharge", 0.0)),
                                      chern=int(ch.get("chern", 0))))
    return InstantonData(built)


def load_config(raw: dict, overrides: argparse.Namespace) -> dict:
    mode = overrides.mode or raw.get("mode")
    _require(mode in MODES, f"mode must be one of {MODES}, got {mode!r}")
    cfg = {
        "mode": mode,
        "metric": _build_metric(raw.get("metric", {})),
        "quad": _build_quad(raw.get("quad", {})),
        "series": _build_series(raw.get("series", {})),
        "route": overrides.route or raw.get("route", "bernoulli"),
        "grav": overrides.grav or raw.get("grav", "numeric"),
        "out": Path(overrides.out or raw.get("out", ".")),
        "lambdas": raw.get("lambdas", [0.1, 0.25, 0.4, 0.6, 0.9]),
        "sweep": raw.get("sweep", [64, 128, 256]),
        "seed": int(raw.get("seed", 7)),
    }
    if overrides.tol is not None:
        _require(overrides.tol > 0, "--tol must be positive")
        cfg["quad"] = QuadratureSpec(cfg["quad"].r_min, cfg["quad"].r_max,
                                     cfg["quad"].n_r, cfg["quad"].n_ang,
                                     cfg["quad"].scheme, overrides.tol)
    _require(cfg["route"] in ROUTES + ("all",),
             f"route must be one of {ROUTES + ('all',)}")
    _require(cfg["grav"] in ("numeric", "lemma"),
             "grav must be 'numeric' or 'lemma'")
    if mode in ("index", "eta") and "instanton" in raw:
        cfg["instanton"] = _build_instanton(raw["instanton"])
    if mode == "index":
        _require("instanton" in cfg, "mode 'index' requires an instanton "
                 "section with channels")
    return cfg


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _run_index(cfg: dict) -> int:
    route = cfg["route"]
    if route == "all":
        route = "bernoulli"
    report = assemble(cfg["instanton"], cfg["quad"], route=route,
                      grav_mode=cfg["grav"], series=cfg["series"],
                      metric=cfg["metric"], l=cfg["metric"].l)
    _write_json(cfg["out"] / "index_report.json", report.to_dict())
    return EXIT_OK


def _run_eta(cfg: dict) -> int:
    if "instanton" in cfg:
        lambdas = [ch.lam for ch in cfg["instanton"].channels]
    else:
        lambdas = [float(x) for x in cfg["lambdas"]]
    rows = route_table(lambdas, cfg["series"])
    if cfg["route"] != "all":
        rows = [row for row in rows if row[1] == cfg["route"]]
    cfg["out"].mkdir(parents=True, exist_ok=True)
    write_route_csv(cfg["out"] / "eta_routes.csv", rows)
    return EXIT_OK


def _run_geometry_check(cfg: dict) -> int:
    rng = np.random.default_rng(cfg["seed"])
    spec = MetricSpec(variant=Variant.TN, l=cfg["metric"].l)
    rows = []

    ricci_worst = 0.0
    star_worst = 0.0
    for _ in range(20):
        p = Point.from_polar(float(rng.uniform(0.3, 10.0)),
                             float(rng.uniform(0.3, np.pi - 0.3)),
                             float(rng.uniform(0.0, 2.0 * np.pi)))
        sample = curvature_at(spec, p)
        ricci_worst = max(ricci_worst, float(np.abs(sample.ricci).max()))
        two_form = np.triu(rng.standard_normal((4, 4)), 1)
        two_form = two_form - two_form.T
        twice = hodge_star(sample.metric, hodge_star(sample.metric, two_form))
        star_worst = max(star_worst,
                         float(np.abs(twice - two_form).max()))
    rows.append(("ricci_flatness_max", ricci_worst, 1e-6))
    rows.append(("hodge_involution_max", star_worst, 1e-12))

    # d(omega) = *3 dV via central differences of the gauge potential
    h = 1e-5
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(0.5, 5.0, size=3) * rng.choice([-1.0, 1.0], size=3)
        if x[0] ** 2 + x[1] ** 2 < 0.25:
            x[0] += 1.0
        domega = np.zeros((3, 3))
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                xp = x.copy()
                xp[i] += h
                xm = x.copy()
                xm[i] -= h
                wp = potential_and_omega(Point(*xp, 0.0))[1][j]
                wm = potential_and_omega(Point(*xm, 0.0))[1][j]
                domega[i, j] += (wp - wm) / (2.0 * h)
        domega = domega - domega.T  # antisymmetrize: (d omega)_ij
        r = float(np.linalg.norm(x))
        grad_v = -0.5 * x / r**3
        worst = max(worst, float(np.abs(domega - star3(grad_v)).max()))
    rows.append(("monopole_field_residual", worst, 1e-8))

    # oint_{S^2} d(omega) against -2 pi
    xs, ws = np.polynomial.legendre.leggauss(64)
    th = 0.5 * np.pi * (xs + 1.0)
    flux = float(np.dot(-0.5 * np.sin(th), ws) * 0.5 * np.pi * 2.0 * np.pi)
    rows.append(("monopole_flux_vs_minus_2pi", abs(flux + 2.0 * np.pi),
                 1e-6))

    cfg["out"].mkdir(parents=True, exist_ok=True)
    ok = True
    with open(cfg["out"] / "geometry_check.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["check", "residual", "bound", "pass"])
        for name, value, bound in rows:
            passed = value < bound
            ok = ok and passed
            writer.writerow([name, repr(float(value)), repr(float(bound)),
                             str(passed).lower()])
    return EXIT_OK if ok else EXIT_NUMERICAL


def _run_pontryagin(cfg: dict) -> int:
    rows = convergence_table(cfg["metric"], cfg["quad"],
                             n_r_values=cfg["sweep"])
    cfg["out"].mkdir(parents=True, exist_ok=True)
    write_convergence_csv(cfg["out"] / "pontryagin_convergence.csv", rows)
    final = rows[-1][1]
    return EXIT_OK if abs(final - PONT_TARGET) < cfg["quad"].tol \
        else EXIT_NUMERICAL


def _run_convergence(cfg: dict) -> int:
    rows = convergence_table(cfg["metric"], cfg["quad"],
                             n_r_values=cfg["sweep"])
    cfg["out"].mkdir(parents=True, exist_ok=True)
    write_convergence_csv(cfg["out"] / "convergence_sweep.csv", rows)
    values = [row[1] for row in rows]
    monotone_settled = abs(values[-1] - values[-2]) <= \
        abs(values[1] - values[0]) + cfg["quad"].tol
    return EXIT_OK if monotone_settled else EXIT_NUMERICAL


_RUNNERS = {
    "index": _run_index,
    "eta": _run_eta,
    "geometry-check": _run_geometry_check,
    "pontryagin": _run_pontryagin,
    "convergence": _run_convergence,
}


def run(cfg: dict) -> int:
    return _RUNNERS[cfg["mode"]](cfg)


def _emit_error(kind: str, message: str):
    json.dump({"error": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tn-index",
        description="Numerical verification of an L2-index formula on "
                    "Taub-NUT space: curvature integrals, eta-form routes, "
                    "and index assembly.")
    parser.add_argument("--config", type=str, default=None,
                        help="path to a JSON configuration document")
    parser.add_argument("--mode", choices=MODES, default=None)
    parser.add_argument("--grav", choices=("lemma", "numeric"), default=None)
    parser.add_argument("--route", choices=ROUTES + ("all",), default=None)
    parser.add_argument("--out", type=str, default=None,
                        help="output directory for reports")
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--threads", type=int, default=None,
                        help="BLAS thread cap; results are independent of "
                             "this value (all reductions are ordered)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK

    threads = args.threads
    if threads is None and os.environ.get("TN_INDEX_THREADS"):
        try:
            threads = int(os.environ["TN_INDEX_THREADS"])
        except ValueError:
            _emit_error("ConfigError", "TN_INDEX_THREADS must be an integer")
            return EXIT_VALIDATION
    if threads is not None and threads < 1:
        _emit_error("ConfigError", "thread count must be >= 1")
        return EXIT_VALIDATION

    raw = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _emit_error("ParseError", str(exc))
            return EXIT_PARSE
    if not isinstance(raw, dict):
        _emit_error("ParseError", "configuration root must be a JSON object")
        return EXIT_PARSE

    try:
        cfg = load_config(raw, args)
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        _emit_error("ValidationError", str(exc))
        return EXIT_VALIDATION

    try:
        return run(cfg)
    except TNIndexError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
