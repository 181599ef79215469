"""Batch verification runner: executes the full check suite for one
configuration and emits reports plus plot-ready CSV tables.

Tolerances for checks that compare against truncated coherent states
(factorization, eigen-relations, pairing) carry an explicit
truncation-tail term on top of the configured base, so the runner stays
honest at small dimensions where the tail, not roundoff, limits what the
identity can show.
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from pathlib import Path

import numpy as np

from .algebra import (
    ladder_check,
    make_pair,
    number_operator_check,
    theta_conjugacy_check,
    vacua,
    vacua_from_map,
)
from .bicoherent import (
    coherent_tail_bound,
    eigen_check,
    make_quadrature,
    rbcs,
    resolution_of_identity,
    series_route,
)
from .config import RunConfig, build_map
from .coordinate import cross_validate
from .displacement import (
    bch_factorization_check,
    in_accuracy_regime,
    intertwining_check,
    power_similarity_check,
)
from .errors import (
    ConditioningError,
    ConfigError,
    DegenerateKernelError,
    NotInvertibleError,
    OrthogonalVacuaError,
    UnderResolvedError,
    UnderResolvedWarning,
)
from .fock import SafeSubspace, commutator, identity, restrict
from .reports import CheckReport, format_report_table, reports_to_json
from .riesz import biorthogonal_family, metric_operator, theta_rank_one_sums

__all__ = ["run_suite", "convergence_study", "suite_failed"]


def _format_z(z: complex) -> str:
    return f"{z.real:g}{z.imag:+g}j"


class _Recorder:
    """Collects reports with per-check wall time and pass/fail status."""

    def __init__(self, config: RunConfig, cond: float):
        self.config = config
        self.cond = cond
        self.reports: list[CheckReport] = []

    def add(self, name: str, residual: float, *, params: dict | None = None,
            in_regime: bool = True, wall_time: float = 0.0, extra_tol: float = 0.0):
        tol = self.config.tolerance(name, self.cond) + extra_tol
        if not in_regime:
            status = "out-of-regime"
        else:
            status = "pass" if residual <= tol else "fail"
        self.reports.append(
            CheckReport(
                check_id=name,
                params=params or {},
                residual=float(residual),
                tolerance=tol,
                status=status,
                wall_time=wall_time,
            )
        )

    def run(self, name: str, fn, *, params: dict | None = None, in_regime: bool = True,
            extra_tol: float = 0.0):
        start = time.perf_counter()
        residual = fn()
        self.add(name, residual, params=params, in_regime=in_regime,
                 wall_time=time.perf_counter() - start, extra_tol=extra_tol)


def _phase_aligned_distance(v: np.ndarray, w: np.ndarray) -> float:
    """Distance between unit vectors modulo a global phase."""
    overlap = np.vdot(v, w)
    if abs(overlap) == 0.0:
        return float(np.linalg.norm(v - w))
    return float(np.linalg.norm(v * (overlap / abs(overlap)) - w))


def run_suite(config: RunConfig) -> list[CheckReport]:
    """Execute every check for one configuration.

    Construction failures (singular or too-ill-conditioned maps) surface
    as failed reports rather than exceptions.  Reports are assembled in a
    deterministic order (sorted by check id, then parameters) and written
    to ``config.outputs`` as a human-readable table, a JSON record list,
    and a flat CSV.
    """
    out_dir = Path(config.outputs)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out_dir} is not writable: {exc}") from exc

    try:
        riesz = build_map(config)
    except (NotInvertibleError, ConditioningError) as exc:
        reports = [
            CheckReport(
                check_id="riesz_construction",
                params={"error": str(exc)},
                residual=float("inf"),
                tolerance=0.0,
                status="fail",
            )
        ]
        _write_outputs(out_dir, reports)
        return reports

    rec = _Recorder(config, riesz.cond)
    dim = riesz.dim
    space = riesz.space
    eye = np.eye(dim)

    rec.run("riesz_construction",
            lambda: np.linalg.norm(riesz.S.mat @ riesz.S_inv.mat - eye, 2))

    fam = biorthogonal_family(riesz)
    rec.run("biorthogonality", lambda: np.abs(fam.gram() - eye).max())

    met = metric_operator(riesz)
    rec.run("theta_family",
            lambda: np.linalg.norm(met.theta.mat @ fam.phi - fam.psi, axis=0).max())

    theta_sum, theta_inv_sum = theta_rank_one_sums(fam)
    rec.run("rank_one_theta", lambda: np.linalg.norm(theta_sum.mat - met.theta.mat, 2))
    rec.run("rank_one_theta_inv",
            lambda: np.linalg.norm(theta_inv_sum.mat - met.theta_inv.mat, 2))

    A, B = riesz.frame_bounds

    def positivity_residual():
        eigs = np.linalg.eigvalsh(met.theta.mat)
        return max(0.0, 1.0 / B - eigs[0], eigs[-1] - 1.0 / A)

    rec.run("theta_positivity", positivity_residual)

    pair = make_pair(riesz)
    sub_top = SafeSubspace(space, dim - 1)
    rec.run("ccr", lambda: np.linalg.norm(
        restrict(commutator(pair.a, pair.b) - identity(space), sub_top), 2))

    cf = vacua_from_map(riesz)
    start = time.perf_counter()
    try:
        extracted = vacua(pair)
    except (DegenerateKernelError, OrthogonalVacuaError) as exc:
        rec.add("vacuum_match", float("inf"), params={"error": str(exc)},
                wall_time=time.perf_counter() - start)
    else:
        r_phi = _phase_aligned_distance(extracted.phi0, cf.phi0 / np.linalg.norm(cf.phi0))
        psi_dir = extracted.psi0 / np.linalg.norm(extracted.psi0)
        r_psi = _phase_aligned_distance(psi_dir, cf.psi0 / np.linalg.norm(cf.psi0))
        rec.add("vacuum_match", max(r_phi, r_psi),
                wall_time=time.perf_counter() - start)
        rec.run("vacuum_pairing",
                lambda: abs(np.vdot(extracted.phi0, extracted.psi0) - 1.0))

    rec.run("ladder",
            lambda: max(r.residual for r in ladder_check(pair, fam)))
    rec.run("number_operator",
            lambda: max(r.residual for r in number_operator_check(pair, fam)))

    def spectrum_residual():
        eigs = np.sort_complex(np.linalg.eigvals(pair.b.mat @ pair.a.mat))[: dim - 1]
        return np.abs(eigs - np.arange(dim - 1)).max()

    rec.run("number_spectrum", spectrum_residual)

    rec.run("theta_conjugacy",
            lambda: theta_conjugacy_check(pair, met, sub_top).residual)

    for z in config.z_samples:
        in_regime = in_accuracy_regime(space, z)
        zp = {"z": _format_z(z)}
        tail = coherent_tail_bound(dim, z)
        # factorization needs a top margin beyond the coherent excursion;
        # the half-space is used whenever the margin allows it
        bch_cutoff = max(1, min(dim // 2, dim - math.ceil(4 * abs(z) ** 2) - 6))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # regime warnings are encoded in the status
            rec.run("power_similarity",
                    lambda z=z: max(r.residual for r in power_similarity_check(riesz, z)),
                    params=zp, in_regime=in_regime)
            start = time.perf_counter()
            bch = bch_factorization_check(riesz, z, SafeSubspace(space, bch_cutoff))
            dt = time.perf_counter() - start
            for record in bch:
                rec.add(record.check, record.residual,
                        params={**zp, "cutoff": bch_cutoff},
                        in_regime=in_regime, wall_time=dt)
            rec.run("intertwining",
                    lambda z=z: intertwining_check(riesz, z, sub_top).residual,
                    params=zp, in_regime=in_regime)

            bc = rbcs(riesz, z)
            rec.run("rbcs_pairing",
                    lambda bc=bc: abs(np.vdot(bc.eta, bc.xi) - 1.0),
                    params=zp, in_regime=in_regime,
                    extra_tol=4.0 * riesz.cond * tail**2)

            def two_route_residual(z=z, bc=bc):
                phi_s, psi_s = series_route(riesz, z, cf)
                return max(np.linalg.norm(phi_s - bc.eta), np.linalg.norm(psi_s - bc.xi))

            rec.run("two_route", two_route_residual, params=zp, in_regime=in_regime)

            start = time.perf_counter()
            r_eta, r_xi = eigen_check(pair, bc)
            dt = time.perf_counter() - start
            eigen_tail = 10.0 * np.sqrt(dim) * riesz.cond * tail
            rec.add("eigen_eta", r_eta, params=zp, in_regime=in_regime,
                    wall_time=dt, extra_tol=eigen_tail)
            rec.add("eigen_xi", r_xi, params=zp, in_regime=in_regime,
                    wall_time=dt, extra_tol=eigen_tail)

    start = time.perf_counter()
    try:
        quad = make_quadrature(dim, config.radial_count, config.angular_count)
    except UnderResolvedError as exc:
        rec.add("resolution_identity", float("inf"), params={"error": str(exc)},
                wall_time=time.perf_counter() - start)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnderResolvedWarning)
            rec.add("resolution_identity", resolution_of_identity(riesz, quad),
                    params={"radial": quad.radial_count, "angular": quad.angular_count},
                    wall_time=time.perf_counter() - start)

    if config.map_spec.kind == "projector" and config.map_spec.u_index == 0:
        for z in config.z_samples:
            if abs(z) ** 2 > dim / 4.0:
                continue  # closed-form comparison needs a suppressed tail
            zp = {"z": _format_z(z)}
            start = time.perf_counter()
            cv = cross_validate(z, dim)
            dt = time.perf_counter() - start
            rec.add("coordinate_l2", max(cv.l2_dev_phi, cv.l2_dev_psi),
                    params=zp, wall_time=dt)
            rec.add("coordinate_pairing", abs(cv.pairing - 1.0), params=zp, wall_time=dt)

    reports = sorted(rec.reports, key=lambda r: (r.check_id, str(sorted(r.params.items()))))
    _write_outputs(out_dir, reports)
    return reports


def suite_failed(reports: list[CheckReport], strict: bool = False) -> bool:
    """True when any check failed (with ``strict``, out-of-regime runs
    count as failures too)."""
    bad = {"fail", "out-of-regime"} if strict else {"fail"}
    return any(r.status in bad for r in reports)


def _write_outputs(out_dir: Path, reports: list[CheckReport]):
    (out_dir / "report.txt").write_text(format_report_table(reports) + "\n")
    (out_dir / "report.json").write_text(reports_to_json(reports) + "\n")
    with (out_dir / "residuals.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check_id", "params", "residual", "tolerance", "status"])
        for r in reports:
            params = ";".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            writer.writerow([r.check_id, params, f"{r.residual:.6e}", f"{r.tolerance:.6e}", r.status])


def convergence_study(config: RunConfig, dims: list[int]) -> tuple[Path, Path]:
    """Residual decay tables over a sweep of truncation dimensions.

    Writes two CSVs into the output directory and returns their paths:

    * ``convergence.csv`` with columns ``dim, z, in_regime, cutoff,
      bch_residual, eigen_eta, eigen_xi, resolution_deviation`` (the
      factorization is compared at a cutoff fixed across the sweep so
      the rows are comparable);
    * ``quadrature.csv`` with columns ``dim, radial_count,
      angular_count, deviation`` including deliberately under-resolved
      rows that show where exactness is lost.
    """
    if list(dims) != sorted(dims) or len(dims) == 0:
        raise ConfigError(f"dims must be a non-empty ascending list, got {dims}")
    if dims[0] < 4:
        raise ConfigError(f"dims must all be >= 4, got {dims}")
    out_dir = Path(config.outputs)
    out_dir.mkdir(parents=True, exist_ok=True)

    z = next((z for z in config.z_samples if z != 0), 1.0 + 0.0j)
    cutoff = max(2, dims[0] // 2)

    conv_path = out_dir / "convergence.csv"
    quad_path = out_dir / "quadrature.csv"
    with conv_path.open("w", newline="") as fh, quad_path.open("w", newline="") as qfh:
        conv = csv.writer(fh)
        quad_writer = csv.writer(qfh)
        conv.writerow(["dim", "z", "in_regime", "cutoff", "bch_residual",
                       "eigen_eta", "eigen_xi", "resolution_deviation"])
        quad_writer.writerow(["dim", "radial_count", "angular_count", "deviation"])
        for dim in dims:
            riesz = build_map(config, dim=dim)
            pair = make_pair(riesz)
            space = riesz.space
            in_regime = in_accuracy_regime(space, z)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                bch = max(
                    r.residual
                    for r in bch_factorization_check(riesz, z, SafeSubspace(space, cutoff))
                )
                r_eta, r_xi = eigen_check(pair, rbcs(riesz, z))
                quad = make_quadrature(dim, dim, 2 * dim + 1)
                deviation = resolution_of_identity(riesz, quad)
                conv.writerow([dim, _format_z(z), in_regime, cutoff,
                               f"{bch:.6e}", f"{r_eta:.6e}", f"{r_xi:.6e}", f"{deviation:.6e}"])
                for radial in sorted({max(2, dim // 4), max(2, dim // 2), dim}):
                    reduced = make_quadrature(radial, radial, 2 * dim + 1)
                    dev = resolution_of_identity(riesz, reduced)
                    quad_writer.writerow([dim, radial, 2 * dim + 1, f"{dev:.6e}"])
    return conv_path, quad_path
