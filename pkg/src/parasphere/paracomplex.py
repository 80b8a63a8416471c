"""Para-complex structure, induced paracontact structure, codim-2 engine.

The ambient involution swaps the two coordinate blocks of R^(2n+2).  For a
hypersurface whose transversal field C stays tangent after the swap
(a "swap-tangent" field), the swap of a tangent vector decomposes as

    Jt f_* X = f_*(phi X) + eta(X) C,        xi = Jt C,

which yields the induced almost paracontact triple (phi, xi, eta) directly
from one frame solve.  The codimension-2 engine decomposes second
derivatives against the frame {g_*d_1, ..., g_*d_2n, zeta, Jt zeta}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jets import Jet, SmoothMap, jet_solve, sqrt
from .hypersurface import DEGENERACY_TOL, DegenerateMetricError, FrameError


class NotSwapTangentError(ValueError):
    """The transversal field does not stay tangent under the block swap."""


class StructureError(ValueError):
    """The swap-invariant distribution does not have the expected dimension."""


def jtilde(v):
    """Block swap (x, y) -> (y, x) on an even-dimensional ambient vector."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] % 2 != 0:
        raise ValueError("block swap needs an even ambient dimension")
    half = v.shape[-1] // 2
    return np.concatenate([v[..., half:], v[..., :half]], axis=-1)


def jtilde_jets(comps):
    """Block swap on a list of ambient component jets."""
    if len(comps) % 2 != 0:
        raise ValueError("block swap needs an even ambient dimension")
    half = len(comps) // 2
    return list(comps[half:]) + list(comps[:half])


@dataclass(frozen=True)
class ParaStructure:
    """The standard para-complex involution on R^(2 * half_dim)."""

    half_dim: int

    @property
    def matrix(self):
        k = self.half_dim
        return np.block([[np.zeros((k, k)), np.eye(k)],
                         [np.eye(k), np.zeros((k, k))]])

    def __call__(self, v):
        return jtilde(v)


@dataclass
class ParacontactFrame:
    """The triple (phi, xi, eta) in coordinate components at a point.

    phi[k, i] = phi^k_i (column i is the image of d_i); jet-valued copies
    are kept when requested.
    """

    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    phi_jet: list | None = field(default=None, repr=False)
    xi_jet: list | None = field(default=None, repr=False)
    eta_jet: list | None = field(default=None, repr=False)


def _paracontact_jets(surface, p, order):
    """phi, xi, eta as jets from a single frame solve."""
    m = surface.dim
    fj = surface.f.jet(p, order + 1)
    cj = surface.transversal.jet(p, order)
    tang = [[fj[a].d(i) for a in range(m + 1)] for i in range(m)]
    frame = [[tang[i][a] for i in range(m)] + [cj[a]] for a in range(m + 1)]
    vals = np.array([[e.value for e in row] for row in frame])
    scale = max(np.prod(np.linalg.norm(vals, axis=0)), DEGENERACY_TOL)
    if abs(np.linalg.det(vals)) < 1e-10 * scale:
        raise FrameError("transversal field is tangent (singular frame)")

    jt_tang = [jtilde_jets([tang[i][a] for a in range(m + 1)]) for i in range(m)]
    jt_c = jtilde_jets(cj)
    rhs = [[jt_tang[i][a] for i in range(m)] + [jt_c[a]] for a in range(m + 1)]
    sol = jet_solve(frame, rhs)

    # last column: Jt C = f_* xi + (transversal part); tangency required
    trans = sol[m][m].value
    if abs(trans) > 1e-10 * max(1.0, np.linalg.norm([c.value for c in jt_c])):
        raise NotSwapTangentError(
            f"swapped transversal field has transversal part {trans:.2e}")
    xi = [sol[k][m] for k in range(m)]
    phi = [[sol[k][i] for i in range(m)] for k in range(m)]  # phi[k][i]
    eta = [sol[m][i] for i in range(m)]
    return phi, xi, eta


def induced_paracontact(surface, p, order=0):
    """The induced almost paracontact structure (phi, xi, eta) at ``p``."""
    phi, xi, eta = _paracontact_jets(surface, p, order)
    m = surface.dim
    return ParacontactFrame(
        phi=np.array([[phi[k][i].value for i in range(m)] for k in range(m)]),
        xi=np.array([x.value for x in xi]),
        eta=np.array([e.value for e in eta]),
        phi_jet=phi if order > 0 else None,
        xi_jet=xi if order > 0 else None,
        eta_jet=eta if order > 0 else None,
    )


def distribution_basis(surface, p, order=0, pivots=None):
    """A basis of the maximal swap-invariant distribution at ``p``.

    Coordinate fields are projected by (I +/- phi)/2 and orthonormalized
    (Gram-Schmidt, fixed auxiliary Euclidean metric) inside each
    eigendistribution.  ``pivots`` fixes the selected columns so the basis
    varies smoothly over a region; when omitted they are chosen at ``p``.
    Returns (basis, pivots): ``basis`` is a list of coefficient jets
    (2n fields, plus-eigenvectors first).
    """
    m = surface.dim
    if m % 2 != 1:
        raise StructureError("hypersurface dimension must be odd")
    n = (m - 1) // 2
    phi, xi, eta = _paracontact_jets(surface, p, order)
    one = Jet.constant(m, order, 1.0)

    basis = []
    chosen_pivots = []
    for sign_idx, sgn in enumerate((1.0, -1.0)):
        # columns of (I + sgn * phi)/2
        cols = []
        for i in range(m):
            col = [(phi[k][i] * sgn + (one if k == i else 0.0)) * 0.5
                   for k in range(m)]
            cols.append(col)
        if pivots is not None:
            idx = pivots[sign_idx]
        else:
            vals = np.array([[c.value for c in col] for col in cols]).T
            idx = _greedy_pivots(vals)[:n]
        chosen_pivots.append(tuple(idx))
        sel = [cols[i] for i in idx]
        ortho = []
        for col in sel:
            v = list(col)
            for u in ortho:
                proj = _dot(u, v)
                v = [vi - proj * ui for vi, ui in zip(v, u)]
            nrm = sqrt(_dot(v, v))
            if abs(nrm.value) < 1e-8:
                raise StructureError("eigen-projection rank drop")
            inv = nrm.reciprocal()
            ortho.append([vi * inv for vi in v])
        basis.extend(ortho)
    if len(basis) != 2 * n:
        raise StructureError(f"distribution dimension {len(basis)} != {2 * n}")
    return basis, tuple(chosen_pivots), eta


def _dot(u, v):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def _greedy_pivots(a):
    """Column indices of a greedy rank-revealing Gram-Schmidt sweep."""
    a = a.copy()
    piv = []
    for _ in range(a.shape[1]):
        norms = np.linalg.norm(a, axis=0)
        j = int(np.argmax(norms))
        if norms[j] < 1e-12:
            break
        piv.append(j)
        u = a[:, j] / norms[j]
        a = a - np.outer(u, u @ a)
    return piv


def distribution_D(surface, p):
    """Plain-value basis vectors of the swap-invariant distribution at ``p``."""
    basis, _, eta = distribution_basis(surface, p, order=0)
    return [np.array([c.value for c in field_]) for field_ in basis]


def bracket_values(x_jets, y_jets):
    """[X, Y] coordinate components from order-1 coefficient jets."""
    m = len(x_jets)
    out = np.zeros(m)
    for k in range(m):
        for i in range(m):
            out[k] += x_jets[i].value * y_jets[k].d(i).value
            out[k] -= y_jets[i].value * x_jets[k].d(i).value
    return out


def eta_bracket(surface, p, x_field, y_field):
    """eta([X, Y]) at ``p`` for coefficient-function fields X, Y.

    ``x_field(coords)`` returns the coordinate components of X as jets
    built from the coordinate jets ``coords``.
    """
    m = surface.dim
    _, _, eta = _paracontact_jets(surface, p, order=0)
    seeds = [Jet.variable(m, 1, i, x) for i, x in enumerate(p)]
    xj = [_as_jet(c, m) for c in x_field(seeds)]
    yj = [_as_jet(c, m) for c in y_field(seeds)]
    br = bracket_values(xj, yj)
    return float(np.array([e.value for e in eta]) @ br)


def _as_jet(c, m, order=1):
    if isinstance(c, Jet):
        return c
    return Jet.constant(m, order, c)


def involutivity_check(surface, points, fields=None, tol=1e-9):
    """(flag, max |eta([X, Y])|) over pairs of distribution fields.

    With ``fields`` given (list of coefficient-function callables) those
    are used; otherwise a smooth orthonormalized eigen-projection basis is
    built, with pivot columns frozen at the first point.
    """
    worst = 0.0
    pivots = None
    for p in points:
        if fields is not None:
            m = surface.dim
            _, _, eta = _paracontact_jets(surface, p, order=0)
            eta_vals = np.array([e.value for e in eta])
            seeds = [Jet.variable(m, 1, i, x) for i, x in enumerate(p)]
            jets = [[_as_jet(c, m) for c in fld(seeds)] for fld in fields]
        else:
            basis, pivots, eta = distribution_basis(surface, p, order=1, pivots=pivots)
            eta_vals = np.array([e.value for e in eta])
            jets = basis
        for a in range(len(jets)):
            for b in range(a + 1, len(jets)):
                br = bracket_values(jets[a], jets[b])
                worst = max(worst, abs(float(eta_vals @ br)))
    return worst < tol, worst


def paracontact_residuals(surface, p, fields=None):
    """Max residuals of the six induced-paracontact identities at ``p``.

    Identities relate eta, phi, xi to the induced connection, h, S and tau;
    all first derivatives (terms like X(eta(Y))) come from exact jets.
    ``fields`` defaults to the coordinate fields.
    """
    from .hypersurface import decompose

    m = surface.dim
    ind = decompose(surface, p, order=1)
    phi, xi, eta = _paracontact_jets(surface, p, order=1)
    gamma, h, S, tau = ind.gamma, ind.h, ind.S, ind.tau
    jets = ind.jets

    seeds = [Jet.variable(m, 1, i, x) for i, x in enumerate(p)]
    if fields is None:
        flds = [[Jet.constant(m, 1, 1.0 if k == i else 0.0) for k in range(m)]
                for i in range(m)]
    else:
        flds = [[_as_jet(c, m) for c in fld(seeds)] for fld in fields]

    phi_vals = np.array([[phi[k][i].value for i in range(m)] for k in range(m)])
    xi_vals = np.array([x.value for x in xi])
    eta_vals = np.array([e.value for e in eta])
    dxi = np.array([[xi[k].d(a).value for k in range(m)] for a in range(m)])
    dtau_ = np.array([[jets.tau[i].d(a).value for i in range(m)] for a in range(m)])

    def nabla(xc, yj):
        """(nabla_X Y)^k values for X coefficients ``xc`` and Y jets ``yj``."""
        yv = np.array([y.value for y in yj])
        out = np.zeros(m)
        for k in range(m):
            for i in range(m):
                out[k] += xc[i] * yj[k].d(i).value
                out[k] += xc[i] * (yv @ gamma[i])[k]
        return out

    def x_of(xc, scalar_jet):
        return sum(xc[i] * scalar_jet.d(i).value for i in range(m))

    def phi_apply_jets(yj):
        """(phi Y)^k as order-1 jets."""
        out = []
        for k in range(m):
            acc = phi[k][0] * yj[0]
            for i in range(1, m):
                acc = acc + phi[k][i] * yj[i]
            out.append(acc)
        return out

    def eta_of_jets(yj):
        acc = eta[0] * yj[0]
        for i in range(1, m):
            acc = acc + eta[i] * yj[i]
        return acc

    def tau_of(xc):
        return float(tau @ xc)

    res = np.zeros(6)
    xi_jets = xi
    for xj in flds:
        xc = np.array([c.value for c in xj])
        # eq 5: eta(nabla_X xi) = tau(X)
        r5 = abs(float(eta_vals @ nabla(xc, xi_jets)) - tau_of(xc))
        # eq 6: eta(S X) = -h(X, xi)
        r6 = abs(float(eta_vals @ (S @ xc)) + float(xc @ h @ xi_vals))
        res[4] = max(res[4], r5)
        res[5] = max(res[5], r6)
        for yj in flds:
            yc = np.array([c.value for c in yj])
            phi_y = phi_apply_jets(yj)
            phi_x = phi_apply_jets(xj)
            eta_y = eta_of_jets(yj)
            eta_x = eta_of_jets(xj)
            h_x_phiy = float(xc @ h @ np.array([c.value for c in phi_y]))
            h_y_phix = float(yc @ h @ np.array([c.value for c in phi_x]))
            nab = nabla(xc, yj)
            # eq 1: eta(nabla_X Y) = h(X, phi Y) + X(eta(Y)) + eta(Y) tau(X)
            r1 = abs(float(eta_vals @ nab)
                     - (h_x_phiy + x_of(xc, eta_y) + eta_y.value * tau_of(xc)))
            # eq 2: phi(nabla_X Y) = nabla_X (phi Y) - eta(Y) S X - h(X, Y) xi
            lhs2 = phi_vals @ nab
            rhs2 = nabla(xc, phi_y) - eta_y.value * (S @ xc) \
                - float(xc @ h @ yc) * xi_vals
            r2 = float(np.max(np.abs(lhs2 - rhs2)))
            # eq 3: eta([X, Y]) = h(X, phiY) - h(Y, phiX) + X(eta Y) - Y(eta X)
            #                     + eta(Y) tau(X) - eta(X) tau(Y)
            br = bracket_values(xj, yj)
            r3 = abs(float(eta_vals @ br)
                     - (h_x_phiy - h_y_phix + x_of(xc, eta_y) - x_of(yc, eta_x)
                        + eta_y.value * tau_of(xc) - eta_x.value * tau_of(yc)))
            # eq 4: phi([X, Y]) = nabla_X phiY - nabla_Y phiX + eta(X) SY - eta(Y) SX
            lhs4 = phi_vals @ br
            rhs4 = nabla(xc, phi_y) - nabla(yc, phi_x) \
                + eta_x.value * (S @ yc) - eta_y.value * (S @ xc)
            r4 = float(np.max(np.abs(lhs4 - rhs4)))
            res[0] = max(res[0], r1)
            res[1] = max(res[1], r2)
            res[2] = max(res[2], r3)
            res[3] = max(res[3], r4)
    return res


# -- codimension 2 ---------------------------------------------------------


@dataclass(frozen=True)
class CodimTwoSurface:
    """A para-holomorphic immersion g: R^2n -> R^(2n+2) with transversal zeta.

    The transversal frame is {zeta, Jt zeta}.
    """

    g: SmoothMap
    zeta: SmoothMap

    @property
    def dim(self):
        return self.g.domain_dim


@dataclass
class CodimTwoInduced:
    """Induced objects of the codim-2 Gauss/Weingarten decomposition.

    ``H_zeta`` is det h1 in a theta-unimodular basis, i.e.
    det(h1) / theta_zeta^2.
    """

    gamma: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    S: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    theta_zeta: float
    H_zeta: float


def holomorphy_residual(gs, p):
    """Max transversal part of Jt g_* d_i (zero for para-holomorphic g)."""
    m = gs.dim
    gj = gs.g.jet(p, 1)
    zj = gs.zeta.jet(p, 0)
    tang_vals = np.array([[gj[a].d(i).value for a in range(m + 2)] for i in range(m)])
    zv = np.array([z.value for z in zj])
    frame = np.column_stack(list(tang_vals) + [zv, jtilde(zv)])
    worst = 0.0
    for i in range(m):
        sol = np.linalg.solve(frame, jtilde(tang_vals[i]))
        worst = max(worst, float(np.max(np.abs(sol[m:]))))
    return worst


def decompose2(gs, p, order=0):
    """Induced objects of a codim-2 surface with frame {zeta, Jt zeta}."""
    m = gs.dim
    gj = gs.g.jet(p, order + 2)
    zj = gs.zeta.jet(p, order + 1)
    tang = [[gj[a].d(i) for a in range(m + 2)] for i in range(m)]
    jt_z = jtilde_jets(zj)
    frame = [[tang[i][a] for i in range(m)] + [zj[a], jt_z[a]]
             for a in range(m + 2)]
    vals = np.array([[e.value for e in row] for row in frame])
    scale = max(np.prod(np.linalg.norm(vals, axis=0)), DEGENERACY_TOL)
    if abs(np.linalg.det(vals)) < 1e-10 * scale:
        raise FrameError("codim-2 frame is singular")

    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    rhs = [[gj[a].d(i).d(j) for (i, j) in pairs] + [zj[a].d(i) for i in range(m)]
           for a in range(m + 2)]
    sol = jet_solve(frame, rhs)

    gamma = np.zeros((m, m, m))
    h1 = np.zeros((m, m))
    h2 = np.zeros((m, m))
    for col, (i, j) in enumerate(pairs):
        for k in range(m):
            gamma[i, j, k] = gamma[j, i, k] = sol[k][col].value
        h1[i, j] = h1[j, i] = sol[m][col].value
        h2[i, j] = h2[j, i] = sol[m + 1][col].value
    ncols = len(pairs)
    S = np.array([[-sol[k][ncols + i].value for i in range(m)] for k in range(m)])
    tau1 = np.array([sol[m][ncols + i].value for i in range(m)])
    tau2 = np.array([sol[m + 1][ncols + i].value for i in range(m)])

    theta = float(np.linalg.det(vals))
    det_h1 = float(np.linalg.det(h1))
    if abs(det_h1) < DEGENERACY_TOL:
        raise DegenerateMetricError("h1 is degenerate")
    return CodimTwoInduced(gamma=gamma, h1=h1, h2=h2, S=S, tau1=tau1, tau2=tau2,
                           theta_zeta=theta, H_zeta=det_h1 / theta ** 2)


@dataclass
class AffineNormal2Result:
    zeta: SmoothMap
    alpha: float
    is_sphere: bool
    max_tau1: float
    max_tau2: float
    max_H_deviation: float


def normalize_affine_normal2(gs, points, tol=1e-8):
    """Affine normal field of a centro-affine para-holomorphic surface.

    Handles radial scalings only: starting from the attached transversal
    (or zeta_0 = -g when none is attached; either gives S proportional to
    Id and tau1 = tau2 = 0), the scaling zeta' = alpha zeta_0 with
    alpha = |H_{zeta_0}|^(1/(2n+4)) makes |H| = 1.  Feeding the returned
    field back reports alpha = 1.  Reports alpha and whether S is a
    constant multiple of Id on the region.
    """
    m = gs.dim
    g = gs.g

    def neg_body(*xs):
        return [-c for c in g.body(*xs)]

    zeta0 = gs.zeta if gs.zeta is not None else SmoothMap(
        g.domain_dim, g.codomain_dim, neg_body,
        domain_box=g.domain_box, name="-g")
    base = CodimTwoSurface(g, zeta0)
    hol = max(holomorphy_residual(base, p) for p in points)
    if hol > 1e-8:
        raise NotSwapTangentError(f"surface is not para-holomorphic ({hol:.2e})")

    hs = [decompose2(base, p) for p in points]
    H_vals = np.array([ind.H_zeta for ind in hs])
    alpha = float(np.mean(np.abs(H_vals))) ** (1.0 / (m + 4))

    def zeta_body(*xs):
        return [c * alpha for c in zeta0.body(*xs)]

    zeta = SmoothMap(g.domain_dim, g.codomain_dim, zeta_body,
                     domain_box=g.domain_box, name=f"{alpha}*{zeta0.name}")
    scaled = CodimTwoSurface(g, zeta)
    max_tau1 = max_tau2 = max_H = max_S = 0.0
    for p in points:
        ind = decompose2(scaled, p)
        max_tau1 = max(max_tau1, float(np.max(np.abs(ind.tau1))))
        max_tau2 = max(max_tau2, float(np.max(np.abs(ind.tau2))))
        max_H = max(max_H, abs(abs(ind.H_zeta) - 1.0))
        ratio = float(np.trace(ind.S)) / m
        max_S = max(max_S, float(np.max(np.abs(ind.S - ratio * np.eye(m)))))
    is_sphere = max(max_tau1, max_tau2, max_H, max_S) < tol
    return AffineNormal2Result(zeta=zeta, alpha=alpha, is_sphere=is_sphere,
                               max_tau1=max_tau1, max_tau2=max_tau2,
                               max_H_deviation=max_H)
