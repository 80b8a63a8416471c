"""Verification suites over the family registry.

``run_suite`` samples a deterministic grid in a family's chart box and runs
every check the family's metadata calls for, returning a JSON-serializable
report.  ``cross_relation_check`` ties the suspension construction, the
codimension-2 normalization and the Calabi product together through one
shared set of constants.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .jets import jet_eval
from .hypersurface import (
    blaschke_residuals,
    curvature,
    decompose,
    fundamental_residuals,
    is_affine_sphere,
    reconstruction_residual,
)
from .paracomplex import (
    involutivity_check,
    normalize_affine_normal2,
    paracontact_residuals,
    CodimTwoSurface,
)
from .families import (
    _COMPONENTS,
    calabi_lambda,
    cp,
    jtangency_check,
    jtangency_complex_check,
    lambda_from_alpha,
    linear_map,
    matrix_A,
    named_family,
    pair,
    sphere_constant,
    suspend,
)


@dataclass
class CheckResult:
    """One named check: worst residual over the grid against a tolerance."""

    name: str
    max_residual: float
    tolerance: float
    passed: bool
    witness: list | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "name": self.name,
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
            "witness": None if self.witness is None
            else [float(x) for x in self.witness],
        }
        if self.details:
            d["details"] = {k: float(v) for k, v in self.details.items()}
        return d


@dataclass
class VerificationReport:
    """All checks for one family on one grid; serialization is deterministic
    apart from the wall time."""

    family: str
    grid: int
    seed: int
    checks: list
    constants: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "family": self.family,
            "parameters": [],
            "grid": int(self.grid),
            "seed": int(self.seed),
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "constants": {k: float(v) for k, v in sorted(self.constants.items())},
            "wall_time_s": float(self.wall_time_s),
        }


def grid_points(box, per_axis, seed=0, cap=40, shrink=0.02):
    """Deterministic cartesian grid in the open box, subsampled to ``cap``.

    Endpoint shrinkage keeps every point strictly interior.  Grids with
    per-axis counts n and 2n - 1 are nested, so refining the grid can only
    grow the sampled residual set.
    """
    axes = []
    for lo, hi in box:
        pad = shrink * (hi - lo)
        axes.append(np.linspace(lo + pad, hi - pad, per_axis))
    pts = [list(p) for p in itertools.product(*axes)]
    if len(pts) > cap:
        rng = np.random.default_rng(seed)
        idx = sorted(rng.choice(len(pts), size=cap, replace=False))
        pts = [pts[i] for i in idx]
    return pts


def _worst(points, fn):
    """Max residual of fn over points, tracking the witness point."""
    worst, witness = -1.0, None
    for p in points:
        r = float(fn(p))
        if r > worst:
            worst, witness = r, p
    return worst, witness


def _check(name, points, fn, tol):
    worst, witness = _worst(points, fn)
    return CheckResult(name, worst, tol, worst <= tol, witness)


def _surface_checks(fam, points, curvature_points):
    surface = fam.surface
    checks = [
        _check("reconstruction", points,
               lambda p: reconstruction_residual(surface, p), 1e-10),
    ]
    fr = {k: (-1.0, None) for k in ("gauss", "codazzi_h", "codazzi_s", "ricci")}
    for p in points:
        res = fundamental_residuals(surface, p)
        for k in fr:
            r = float(getattr(res, k))
            if r > fr[k][0]:
                fr[k] = (r, p)
    for k, (worst, witness) in fr.items():
        checks.append(CheckResult(f"fundamental-{k}", worst, 1e-9,
                                  worst <= 1e-9, witness))

    tau, vol = blaschke_residuals(surface, points)
    checks.append(CheckResult("blaschke-apolarity", tau, 1e-10, tau <= 1e-10))
    checks.append(CheckResult("blaschke-volume", vol, 1e-10, vol <= 1e-10))

    if fam.kind == "improper":
        def shape_norm(p):
            return float(np.max(np.abs(decompose(surface, p).S)))
        checks.append(_check("improper-shape-operator", points, shape_norm, 1e-10))
    else:
        flag, lam = is_affine_sphere(surface, points, tol=1e-8)
        resid = abs(lam - fam.lambda_expected) if fam.lambda_expected else 0.0
        checks.append(CheckResult(
            "affine-sphere", resid, 1e-8, flag and resid <= 1e-8,
            details={"lambda": lam}))

    if fam.flat:
        checks.append(_check(
            "flat-metric", curvature_points,
            lambda p: float(np.max(np.abs(curvature(surface, p).riemann_metric))),
            1e-6))
    if fam.parallel_cubic:
        checks.append(_check(
            "parallel-cubic", curvature_points,
            lambda p: curvature(surface, p).cubic_parallel_residual, 1e-6))
    return checks


def _paracontact_checks(fam, points):
    surface = fam.surface
    checks = [
        _check("swap-tangency", points,
               lambda p: jtangency_check(surface, p), 1e-10),
        _check("paracontact-identities", points,
               lambda p: float(np.max(paracontact_residuals(surface, p))), 1e-9),
    ]
    flag, worst = involutivity_check(surface, points, fields=fam.d_fields)
    checks.append(CheckResult(
        "involutivity" if fam.involutive else "non-involutivity-witness",
        worst, np.inf if not fam.involutive else 1e-9,
        flag == fam.involutive,
        details={"worst_eta_bracket": worst}))
    return checks


def _quadric_checks(fam, points):
    fmap = fam.map
    checks = [
        _check("defining-equation", points,
               lambda p: abs(fam.defining_value(fmap(p)) - 1.0), 1e-12),
        _check("complex-tangency", points,
               lambda p: abs(jtangency_complex_check(fam.gradient, fmap(p))),
               1e-10),
    ]
    ok = fmap.is_immersion(points)
    checks.append(CheckResult("immersion", 0.0 if ok else 1.0, 0.5, ok))
    return checks


def run_suite(name, grid=3, seed=0):
    """Run every applicable check for a registry family."""
    start = time.perf_counter()
    fam = named_family(name)
    dim = len(fam.box)
    points = grid_points(fam.box, grid, seed=seed, cap=12 if dim >= 4 else 40)
    curvature_points = grid_points(fam.box, grid, seed=seed,
                                   cap=3 if dim >= 3 else 8)
    checks = []
    if fam.surface is not None:
        checks += _surface_checks(fam, points, curvature_points)
    if fam.swap_tangent:
        checks += _paracontact_checks(fam, points)
    if fam.kind == "quadric":
        checks += _quadric_checks(fam, points)
    report = VerificationReport(family=name, grid=grid, seed=seed,
                                checks=checks, constants=dict(fam.constants))
    report.wall_time_s = time.perf_counter() - start
    return report


def cross_relation_check(c1="ellipse", c2="ellipse", grid=3, seed=0, tol=1e-8):
    """Tie the three constructions together on components ``c1``, ``c2``.

    Verifies (a) the suspension of the glued pair equals a constant linear
    image of the Calabi product, (b) the hypersurface sphere constant
    matches the closed product formula, and (c) the codimension-2
    normalization constant reproduces the same value through the exponent
    relation.  All three pipelines must agree below ``tol``.
    """
    start = time.perf_counter()
    f1, f2 = _COMPONENTS[c1](), _COMPONENTS[c2]()
    n = f1.domain_dim
    g = pair(f1, f2)
    susp = suspend(g)
    product = cp(_COMPONENTS[c1](), _COMPONENTS[c2]())
    image = linear_map(matrix_A(n), product)

    points = grid_points(susp.domain_box, grid, seed=seed)

    def pointwise(p):
        return float(np.max(np.abs(susp(p) - image(p))))

    worst, witness = _worst(points, pointwise)
    checks = [CheckResult("suspension-equals-linear-calabi", worst, 1e-12,
                          worst <= 1e-12, witness)]

    alpha, beta = sphere_constant(c1), sphere_constant(c2)
    lam_formula = calabi_lambda(alpha, beta, n)
    fam = named_family({"ellipse": {"ellipse": "f1", "hyperbola": "f3"},
                        "hyperbola": {"ellipse": "f4", "hyperbola": "f2"}}[c1][c2])
    flag, lam_measured = is_affine_sphere(
        fam.surface, grid_points(fam.box, grid, seed=seed, cap=10), tol=tol)
    resid = abs(lam_measured - lam_formula)
    checks.append(CheckResult("lambda-product-formula", resid, tol,
                              flag and resid <= tol,
                              details={"lambda": lam_measured,
                                       "alpha": alpha, "beta": beta}))

    gs = CodimTwoSurface(g, None)
    pts2 = grid_points(g.domain_box, grid, seed=seed, cap=10)
    result = normalize_affine_normal2(gs, pts2, tol=tol)
    resid2 = abs(lambda_from_alpha(result.alpha, n) - abs(lam_formula))
    checks.append(CheckResult("lambda-exponent-relation", resid2, tol,
                              result.is_sphere and resid2 <= tol,
                              details={"alpha_codim2": result.alpha}))

    report = VerificationReport(family=f"relation({c1},{c2})", grid=grid,
                                seed=seed, checks=checks,
                                constants={"lambda": lam_formula,
                                           "alpha": alpha, "beta": beta,
                                           "alpha_codim2": result.alpha})
    report.wall_time_s = time.perf_counter() - start
    return report
