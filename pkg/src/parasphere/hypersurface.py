"""Codimension-1 induced affine geometry.

Given an immersion f: M^m -> R^(m+1) with a transversal field C, the flat
ambient derivative decomposes as

    d_i d_j f = Gamma^k_ij f_k + h_ij C        (Gauss)
    d_i C     = -S^k_i f_k + tau_i C           (Weingarten)

All induced objects are obtained by solving the frame system with jet
coefficients, so their derivatives (needed by the fundamental equations
and curvature) are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jets import (
    Jet,
    JetError,
    SingularSystemError,
    SmoothMap,
    absolute,
    is_coordinate_seed,
    jet_det,
    jet_solve,
    power,
    MAX_ORDER,
)


class FrameError(ValueError):
    """Tangent frame plus transversal field is singular at the point."""


class DegenerateMetricError(ValueError):
    """The second fundamental form is (numerically) degenerate."""


class NotBlaschkeError(ValueError):
    """Operation requires a Blaschke (affine normal) transversal field."""


DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Hypersurface:
    """An immersion together with a transversal field.

    ``f`` maps R^m -> R^(m+1); ``transversal`` has the same domain and
    codomain.  The orientation is the ordered coordinate basis.
    """

    f: SmoothMap
    transversal: SmoothMap

    @property
    def dim(self):
        return self.f.domain_dim


class InducedJets:
    """Jet-valued induced objects; thin container filled by decompose."""

    def __init__(self, gamma, h, S, tau, theta, det_h):
        self.gamma = gamma   # gamma[i][j][k] = Gamma^k_ij, scalar jets
        self.h = h           # h[i][j]
        self.S = S           # S[k][i] = S^k_i (output index first)
        self.tau = tau       # tau[i]
        self.theta = theta
        self.det_h = det_h


@dataclass
class InducedObjects:
    """Pointwise induced objects of a hypersurface with a transversal field.

    gamma[i, j, k] = Gamma^k_ij; S[k, i] = S^k_i (column i is the image of
    the i-th coordinate field).  ``omega_h`` is |det h|^(1/2) in the
    coordinate basis; ``theta`` is det[f_*d_1, ..., f_*d_m, C].
    """

    gamma: np.ndarray
    h: np.ndarray
    S: np.ndarray
    tau: np.ndarray
    theta: float
    omega_h: float
    jets: InducedJets | None = field(default=None, repr=False)


@dataclass
class CurvatureData:
    """Curvature of the induced connection and of the affine metric h.

    ``riemann_affine[l, i, j, k]`` is the l-component of R(d_i, d_j) d_k for
    the induced connection; ``riemann_metric`` the same for the Levi-Civita
    connection of h.  ``cubic`` is (nabla h)_ijk with the derivative index
    first; ``cubic_parallel_residual`` is the max component of the
    Levi-Civita derivative of the cubic form.
    """

    riemann_affine: np.ndarray
    levi_civita: np.ndarray
    riemann_metric: np.ndarray
    cubic: np.ndarray
    cubic_parallel_residual: float
    pick: float


def _frame_jets(surface, p, order):
    """Frame columns [f_*d_1 ... f_*d_m, C] and f/C component jets."""
    m = surface.dim
    fj = surface.f.jet(p, order + 2)
    cj = surface.transversal.jet(p, order + 1)
    tang = [[fj[a].d(i) for a in range(m + 1)] for i in range(m)]
    frame = [[tang[i][a] for i in range(m)] + [cj[a].truncated(order + 1)]
             for a in range(m + 1)]
    vals = np.array([[e.value for e in row] for row in frame])
    scale = np.prod(np.linalg.norm(vals, axis=0))
    if scale < DEGENERACY_TOL or abs(np.linalg.det(vals)) < 1e-10 * scale:
        raise FrameError("transversal field is tangent (singular frame)")
    return fj, cj, tang, frame


def decompose(surface, p, order=0):
    """All induced objects of the Gauss/Weingarten decomposition at ``p``.

    ``order`` is the jet order of the returned objects (0 gives plain
    values); the immersion is differentiated to ``order + 2``.
    """
    m = surface.dim
    fj, cj, tang, frame = _frame_jets(surface, p, order)

    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    gauss_rhs = [[fj[a].d(i).d(j) for (i, j) in pairs] for a in range(m + 1)]
    wein_rhs = [[cj[a].d(i) for i in range(m)] for a in range(m + 1)]
    rhs = [gr + wr for gr, wr in zip(gauss_rhs, wein_rhs)]
    sol = jet_solve(frame, rhs)

    ncols = len(pairs)
    gamma = [[[None] * m for _ in range(m)] for _ in range(m)]
    h = [[None] * m for _ in range(m)]
    for col, (i, j) in enumerate(pairs):
        for k in range(m):
            gamma[i][j][k] = sol[k][col]
            gamma[j][i][k] = sol[k][col]
        h[i][j] = sol[m][col]
        h[j][i] = sol[m][col]
    S = [[-sol[k][ncols + i] for i in range(m)] for k in range(m)]
    tau = [sol[m][ncols + i] for i in range(m)]

    theta = jet_det(frame)
    try:
        det_h = jet_det(h)
    except SingularSystemError as err:
        raise DegenerateMetricError("det h vanishes at the point") from err
    if abs(det_h.value) < DEGENERACY_TOL:
        raise DegenerateMetricError("|det h| below 1e-12")

    jets = InducedJets(gamma, h, S, tau, theta, det_h)
    return InducedObjects(
        gamma=np.array([[[gamma[i][j][k].value for k in range(m)]
                         for j in range(m)] for i in range(m)]),
        h=np.array([[h[i][j].value for j in range(m)] for i in range(m)]),
        S=np.array([[S[k][i].value for i in range(m)] for k in range(m)]),
        tau=np.array([t.value for t in tau]),
        theta=theta.value,
        omega_h=abs(det_h.value) ** 0.5,
        jets=jets if order > 0 else None,
    )


def reconstruction_residual(surface, p):
    """Relative residual of d_i d_j f = Gamma^k_ij f_k + h_ij C at ``p``."""
    m = surface.dim
    fj, cj, tang, _ = _frame_jets(surface, p, 0)
    ind = decompose(surface, p)
    cvals = np.array([c.value for c in cj])
    tvals = np.array([[tang[i][a].value for a in range(m + 1)] for i in range(m)])
    worst = 0.0
    for i in range(m):
        for j in range(m):
            second = np.array([fj[a].d(i).d(j).value for a in range(m + 1)])
            recon = ind.gamma[i, j] @ tvals + ind.h[i, j] * cvals
            denom = max(np.max(np.abs(second)), 1.0)
            worst = max(worst, np.max(np.abs(second - recon)) / denom)
    return worst


@dataclass
class FundamentalResiduals:
    gauss: float
    codazzi_h: float
    codazzi_s: float
    ricci: float

    def max(self):
        return max(self.gauss, self.codazzi_h, self.codazzi_s, self.ricci)


def fundamental_residuals(surface, p):
    """Max-norm residuals of the Gauss, Codazzi (h and S) and Ricci equations.

    These are identities for any transversal field, so nonzero residuals
    measure the engine, not the geometry.
    """
    m = surface.dim
    ind = decompose(surface, p, order=1)
    jets = ind.jets
    dgamma = np.array([[[[jets.gamma[i][j][k].d(a).value for k in range(m)]
                         for j in range(m)] for i in range(m)] for a in range(m)])
    dh = np.array([[[jets.h[i][j].d(a).value for j in range(m)]
                    for i in range(m)] for a in range(m)])
    dS = np.array([[[jets.S[k][i].d(a).value for i in range(m)]
                    for k in range(m)] for a in range(m)])
    dtau = np.array([[jets.tau[i].d(a).value for i in range(m)] for a in range(m)])
    gamma, h, S, tau = ind.gamma, ind.h, ind.S, ind.tau

    # R(d_i, d_j) d_k = (d_i Gamma^l_jk - d_j Gamma^l_ik
    #                    + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik) d_l
    riemann = np.zeros((m, m, m, m))  # [l, i, j, k]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                term = dgamma[i, j, k] - dgamma[j, i, k]
                term = term + gamma[i].T @ gamma[j, k] - gamma[j].T @ gamma[i, k]
                riemann[:, i, j, k] = term

    gauss = 0.0
    for i in range(m):
        for j in range(m):
            for k in range(m):
                rhs = h[j, k] * S[:, i] - h[i, k] * S[:, j]
                gauss = max(gauss, np.max(np.abs(riemann[:, i, j, k] - rhs)))

    # (nabla_i h)(j, k) = d_i h_jk - Gamma^l_ij h_lk - Gamma^l_ik h_jl
    nabla_h = np.zeros((m, m, m))
    for i in range(m):
        nabla_h[i] = dh[i] - gamma[i] @ h - (gamma[i] @ h).T
    codazzi_h = 0.0
    for i in range(m):
        for j in range(m):
            lhs = nabla_h[i, j] + tau[i] * h[j]
            rhs = nabla_h[j, i] + tau[j] * h[i]
            codazzi_h = max(codazzi_h, np.max(np.abs(lhs - rhs)))

    # (nabla_i S)(d_j) = d_i S^l_j + Gamma^l_im S^m_j - Gamma^m_ij S^l_m
    nabla_S = np.zeros((m, m, m))  # [i, l, j]
    for i in range(m):
        nabla_S[i] = dS[i] + gamma[i].T @ S - S @ gamma[i].T
    codazzi_s = 0.0
    for i in range(m):
        for j in range(m):
            lhs = nabla_S[i, :, j] - tau[i] * S[:, j]
            rhs = nabla_S[j, :, i] - tau[j] * S[:, i]
            codazzi_s = max(codazzi_s, np.max(np.abs(lhs - rhs)))

    ricci = 0.0
    hS = h @ S  # h(d_i, S d_j) = (h S)[i, j]
    for i in range(m):
        for j in range(m):
            ricci = max(ricci, abs(hS[i, j] - hS[j, i] - (dtau[i, j] - dtau[j, i])))

    return FundamentalResiduals(gauss, codazzi_h, codazzi_s, ricci)


def blaschke_normalize(fmap, trial, base_point, sign=None):
    """The Blaschke (affine normal) field, from any trial transversal field.

    Two-step renormalization: the unimodular scaling
    phi = |det h / theta^2|^(1/(m+2)) followed by the tangential correction
    Z solving h(Z, .) = -(d phi + phi tau).  The returned field satisfies
    tau = 0 and omega_h = |theta|; the sign makes theta positive at
    ``base_point`` unless ``sign`` is given explicitly.
    """
    m = fmap.domain_dim
    trial_surface = Hypersurface(fmap, trial)

    def normalized_jets(p, order):
        if order + 3 > MAX_ORDER:
            raise JetError("Blaschke field supports jet orders 0 and 1 only")
        fj = fmap.jet(p, order + 3)
        cj = trial.jet(p, order + 1)
        tang = [[fj[a].d(i) for a in range(m + 1)] for i in range(m)]
        frame = [[tang[i][a] for i in range(m)] + [cj[a]] for a in range(m + 1)]
        vals = np.array([[e.value for e in row] for row in frame])
        if abs(np.linalg.det(vals)) < 1e-10 * max(np.prod(np.linalg.norm(vals, axis=0)), DEGENERACY_TOL):
            raise FrameError("trial transversal field is tangent")
        pairs = [(i, j) for i in range(m) for j in range(i, m)]
        rhs = [[fj[a].d(i).d(j) for (i, j) in pairs] + [cj[a].d(i) for i in range(m)]
               for a in range(m + 1)]
        sol = jet_solve(frame, rhs)
        h = [[None] * m for _ in range(m)]
        for col, (i, j) in enumerate(pairs):
            h[i][j] = sol[m][col]
            h[j][i] = sol[m][col]
        tau = [sol[m][len(pairs) + i] for i in range(m)]
        theta = jet_det(frame)
        det_h = jet_det(h)
        if abs(det_h.value) < DEGENERACY_TOL:
            raise DegenerateMetricError("|det h| below 1e-12 during normalization")
        phi = power(absolute(det_h * (theta * theta).reciprocal()), 1.0 / (m + 2))
        zrhs = [[-(phi.d(i) + phi * tau[i])] for i in range(m)]
        z = jet_solve([[h[i][j].truncated(order) for j in range(m)] for i in range(m)],
                      [[r[0].truncated(order)] for r in zrhs])
        comps = []
        for a in range(m + 1):
            out = phi * cj[a]
            for k in range(m):
                out = out + z[k][0] * tang[k][a]
            comps.append(out.truncated(order))
        return comps

    if sign is None:
        # theta of the normalized field at the base point fixes the sign
        probe = [c.value for c in normalized_jets(base_point, 0)]
        fj = fmap.jet(base_point, 1)
        cols = [[fj[a].d(i).value for a in range(m + 1)] for i in range(m)]
        theta0 = np.linalg.det(np.column_stack([np.array(c) for c in cols] + [np.array(probe)]))
        sign = 1.0 if theta0 > 0 else -1.0

    def body(*xs):
        if not is_coordinate_seed(xs):
            raise JetError("Blaschke field must be evaluated on coordinate seeds")
        order = xs[0].order
        p = [x.value for x in xs]
        return [c * sign for c in normalized_jets(p, order)]

    return SmoothMap(m, m + 1, body, domain_box=fmap.domain_box,
                     name=f"blaschke({fmap.name or 'f'})")


def blaschke_residuals(surface, points):
    """(max |tau|, max ||theta| - omega_h|) over the sampled points."""
    max_tau = 0.0
    max_vol = 0.0
    for p in points:
        ind = decompose(surface, p)
        max_tau = max(max_tau, np.max(np.abs(ind.tau)))
        max_vol = max(max_vol, abs(abs(ind.theta) - ind.omega_h))
    return max_tau, max_vol


def is_affine_sphere(surface, points, tol=1e-8):
    """(flag, lambda): S = lambda * Id with lambda constant over the region.

    Refuses (NotBlaschkeError) when the attached transversal field is not a
    Blaschke field.  lambda = 0 signals an improper sphere.
    """
    max_tau, max_vol = blaschke_residuals(surface, points)
    if max(max_tau, max_vol) > tol:
        raise NotBlaschkeError(
            f"transversal field is not Blaschke (tau {max_tau:.2e}, volume {max_vol:.2e})")
    m = surface.dim
    lambdas = []
    max_dev = 0.0
    for p in points:
        ind = decompose(surface, p)
        lam = np.trace(ind.S) / m
        lambdas.append(lam)
        max_dev = max(max_dev, np.max(np.abs(ind.S - lam * np.eye(m))))
    lambdas = np.array(lambdas)
    lam = float(np.mean(lambdas))
    flag = max_dev < tol and float(np.std(lambdas)) < tol
    return flag, lam


def curvature(surface, p):
    """Curvature data of the induced connection and the affine metric at ``p``."""
    m = surface.dim
    ind = decompose(surface, p, order=2)
    jets = ind.jets
    gamma, h = ind.gamma, ind.h

    hj = [[jets.h[i][j].truncated(2) for j in range(m)] for i in range(m)]
    ident = [[Jet.constant(m, 2, 1.0 if i == j else 0.0) for j in range(m)]
             for i in range(m)]
    hinv = jet_solve(hj, ident)

    # Levi-Civita christoffels of h, jet-valued to order 1
    lc = [[[None] * m for _ in range(m)] for _ in range(m)]  # lc[i][j][k] = Ghat^k_ij
    for i in range(m):
        for j in range(m):
            for k in range(m):
                acc = Jet.constant(m, 1, 0.0)
                for l in range(m):
                    acc = acc + hinv[k][l].truncated(1) * (
                        hj[j][l].d(i) + hj[i][l].d(j) - hj[i][j].d(l)) * 0.5
                lc[i][j][k] = acc
    lc_vals = np.array([[[lc[i][j][k].value for k in range(m)]
                         for j in range(m)] for i in range(m)])

    def riemann_of(chr_vals, dchr):
        out = np.zeros((m, m, m, m))
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    term = dchr[i, j, k] - dchr[j, i, k]
                    term = term + chr_vals[i].T @ chr_vals[j, k] \
                        - chr_vals[j].T @ chr_vals[i, k]
                    out[:, i, j, k] = term
        return out

    dgamma = np.array([[[[jets.gamma[i][j][k].d(a).value for k in range(m)]
                         for j in range(m)] for i in range(m)] for a in range(m)])
    dlc = np.array([[[[lc[i][j][k].d(a).value for k in range(m)]
                      for j in range(m)] for i in range(m)] for a in range(m)])
    riemann_affine = riemann_of(gamma, dgamma)
    riemann_metric = riemann_of(lc_vals, dlc)

    # cubic form C_ijk = (nabla_i h)(j, k), jet-valued to order 1
    cubic_jets = [[[None] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                acc = hj[j][k].d(i)
                for l in range(m):
                    acc = acc - jets.gamma[i][j][l].truncated(1) * hj[l][k].truncated(1) \
                              - jets.gamma[i][k][l].truncated(1) * hj[j][l].truncated(1)
                cubic_jets[i][j][k] = acc
    cubic = np.array([[[cubic_jets[i][j][k].value for k in range(m)]
                       for j in range(m)] for i in range(m)])
    dcubic = np.array([[[[cubic_jets[i][j][k].d(a).value for k in range(m)]
                         for j in range(m)] for i in range(m)] for a in range(m)])

    # Levi-Civita derivative of the cubic form
    res = 0.0
    for a in range(m):
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    val = dcubic[a, i, j, k]
                    for l in range(m):
                        val -= lc_vals[a, i, l] * cubic[l, j, k]
                        val -= lc_vals[a, j, l] * cubic[i, l, k]
                        val -= lc_vals[a, k, l] * cubic[i, j, l]
                    res = max(res, abs(val))

    # Pick invariant: h-norm^2 of the difference tensor K = nabla - nabla_hat
    hinv_vals = np.array([[hinv[i][j].value for j in range(m)] for i in range(m)])
    K = gamma - lc_vals                       # K[i, j, k] = K^k_ij
    K_low = np.einsum("ijl,lk->ijk", K, h)    # all indices down
    pick = float(np.einsum("ijk,abc,ia,jb,kc->", K_low, K_low,
                           hinv_vals, hinv_vals, hinv_vals))
    if m > 1:
        pick /= m * (m - 1)

    return CurvatureData(
        riemann_affine=riemann_affine,
        levi_civita=lc_vals,
        riemann_metric=riemann_metric,
        cubic=cubic,
        cubic_parallel_residual=res,
        pick=pick,
    )


def sectional_curvature(surface, p, i=0, j=1):
    """Sectional curvature of the affine metric in the (d_i, d_j) plane."""
    curv = curvature(surface, p)
    h = decompose(surface, p).h
    num = h[:, i] @ curv.riemann_metric[:, i, j, j]
    den = h[i, i] * h[j, j] - h[i, j] ** 2
    return num / den
