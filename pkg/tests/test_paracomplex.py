"""Swap structure, paracontact frames, the distribution and the codim-2 engine."""

import numpy as np
import pytest

from parasphere.jets import SmoothMap, jet_eval
from parasphere.hypersurface import Hypersurface, decompose
from parasphere.paracomplex import (
    CodimTwoSurface,
    NotSwapTangentError,
    ParaStructure,
    decompose2,
    distribution_D,
    eta_bracket,
    holomorphy_residual,
    induced_paracontact,
    involutivity_check,
    jtilde,
    normalize_affine_normal2,
    paracontact_residuals,
)
from parasphere.families import ellipse, named_family, pair, scale_map


def test_jtilde_block_swap():
    assert np.array_equal(jtilde([1, 2, 3, 4]), [3, 4, 1, 2])
    rng = np.random.default_rng(1)
    for _ in range(10):
        v = rng.normal(size=6)
        assert np.allclose(jtilde(jtilde(v)), v)
        fixed = jtilde(v) + v
        assert np.allclose(jtilde(fixed), fixed)


def test_para_structure_invariants():
    for n in range(4):
        j = ParaStructure(n + 1).matrix
        dim = 2 * (n + 1)
        assert np.array_equal(j @ j, np.eye(dim))
        assert np.trace(j) == 0
        assert abs(np.linalg.det(j) - (-1.0) ** (n + 1)) < 1e-12
        eig = np.sort(np.linalg.eigvalsh(j))
        assert np.allclose(eig[: n + 1], -1.0)
        assert np.allclose(eig[n + 1:], 1.0)


def test_frame_invariants_random_points():
    rng = np.random.default_rng(5)
    for name in ("f3", "example-noninvolutive"):
        fam = named_family(name)
        for _ in range(50):
            p = [rng.uniform(lo * 0.8, hi * 0.8) for lo, hi in fam.box]
            fr = induced_paracontact(fam.surface, p)
            m = len(p)
            assert np.max(np.abs(fr.phi @ fr.phi
                                 - np.eye(m) + np.outer(fr.xi, fr.eta))) < 1e-10
            assert abs(fr.eta @ fr.xi - 1.0) < 1e-10
            assert np.max(np.abs(fr.phi @ fr.xi)) < 1e-10
            assert np.max(np.abs(fr.eta @ fr.phi)) < 1e-10


def test_xi_is_vertical_for_suspension():
    """For the ellipse-pair suspension with C = -lambda f, xi = lambda d/dz."""
    fam = named_family("f1")
    lam = fam.lambda_expected
    for p in ([0.0, 0.0, 0.0], [0.4, -0.3, 0.6]):
        fr = induced_paracontact(fam.surface, p)
        assert np.max(np.abs(fr.xi - [0.0, 0.0, lam])) < 1e-12


def test_distribution_is_kernel_of_eta():
    fam = named_family("f2")
    for p in ([0.1, -0.2, 0.3], [0.5, 0.5, -0.5]):
        basis = distribution_D(fam.surface, p)
        fr = induced_paracontact(fam.surface, p)
        assert len(basis) == 2
        for vec in basis:
            assert abs(fr.eta @ vec) < 1e-10
        assert np.linalg.matrix_rank(np.array(basis), tol=1e-8) == 2


def test_distribution_at_origin():
    """At the origin of the ellipse-pair suspension, D = span{dx, dy} and the
    pushforwards are swap eigenvectors."""
    fam = named_family("f1")
    p = [0.0, 0.0, 0.0]
    jac = jet_eval(fam.map, p, 1).jacobian()
    fx, fy = jac[:, 0], jac[:, 1]
    assert np.allclose(jtilde(fx), fx)
    assert np.allclose(jtilde(fy), -fy)
    basis = distribution_D(fam.surface, p)
    span = np.array(basis + [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert np.linalg.matrix_rank(span, tol=1e-8) == 2


def test_example_eigenfields():
    fam = named_family("example-noninvolutive")
    rng = np.random.default_rng(2)
    for _ in range(10):
        p = list(rng.uniform(-1.0, 1.0, size=3))
        fr = induced_paracontact(fam.surface, p)
        x = p[0]
        dx = np.array([1.0, 0.0, 0.0])
        w = np.array([2.0 * x * x, 1.0, 2.0 * x])
        assert np.max(np.abs(fr.phi @ dx - dx)) < 1e-10
        assert np.max(np.abs(fr.phi @ w + w)) < 1e-10


def test_example_bracket_witness():
    fam = named_family("example-noninvolutive")
    xf, wf = fam.d_fields
    for p in ([0.0, 0.0, 0.0], [0.7, -0.5, 0.9]):
        assert abs(eta_bracket(fam.surface, p, xf, wf) - 2.0) < 1e-12


def test_involutivity_verdicts():
    pts = [[0.1, 0.2, -0.3], [-0.4, 0.5, 0.6], [0.3, -0.1, 0.2]]
    for name in ("f1", "f2", "f3", "f4"):
        fam = named_family(name)
        flag, worst = involutivity_check(fam.surface, pts)
        assert flag and worst < 1e-9
    fam = named_family("example-noninvolutive")
    flag, worst = involutivity_check(fam.surface, pts, fields=fam.d_fields)
    assert not flag and abs(worst - 2.0) < 1e-9


def test_same_eigenspace_brackets_vanish():
    """eta([X, Y]) = h(X, Y) - h(Y, X) = 0 for X, Y both in D+."""
    fam = named_family("f1")
    plus = lambda seeds: [1.0, 0.0, 0.0]
    plus_scaled = lambda seeds: [1.0 + seeds[1] * seeds[1], 0.0, 0.0]
    for p in ([0.2, 0.3, -0.1], [-0.5, 0.1, 0.4]):
        assert abs(eta_bracket(fam.surface, p, plus, plus_scaled)) < 1e-12


def test_paracontact_identities():
    for name in ("f1", "f2", "example-noninvolutive"):
        fam = named_family(name)
        for p in ([0.1, 0.2, 0.3], [-0.4, 0.6, -0.2]):
            assert np.max(paracontact_residuals(fam.surface, p)) < 1e-10


def test_not_swap_tangent_rejected():
    fam = named_family("f1")
    fmap = fam.map
    const = SmoothMap(3, 4, lambda *xs: [1.0, 0.0, 0.0, 0.0],
                      domain_box=fmap.domain_box)
    surface = Hypersurface(fmap, const)
    with pytest.raises(NotSwapTangentError):
        induced_paracontact(surface, [0.1, 0.2, 0.3])


def pair_of_circles():
    return pair(ellipse(), ellipse())


def test_codim2_centroaffine_objects():
    g = pair_of_circles()
    gs = CodimTwoSurface(g, scale_map(g, -1.0))
    for p in ([0.1, -0.2], [0.5, 0.4]):
        assert holomorphy_residual(gs, p) < 1e-12
        ind = decompose2(gs, p)
        assert np.max(np.abs(ind.S - np.eye(2))) < 1e-10
        assert np.max(np.abs(ind.tau1)) < 1e-10
        assert np.max(np.abs(ind.tau2)) < 1e-10


def test_h1_h2_swap_relation():
    """h1(X, JY) = h2(X, Y) and h2(X, JY) = h1(X, Y) on pair constructions."""
    for c1, c2 in (("ellipse", "ellipse"), ("ellipse", "hyperbola"),
                   ("hyperbola", "hyperbola")):
        from parasphere.families import _COMPONENTS

        g = pair(_COMPONENTS[c1](), _COMPONENTS[c2]())
        gs = CodimTwoSurface(g, scale_map(g, -1.0))
        for p in ([0.1, -0.2], [0.4, 0.3]):
            jac = jet_eval(g, p, 1).jacobian()
            jjac = np.array([jtilde(jac[:, i]) for i in range(2)]).T
            pmat, *_ = np.linalg.lstsq(jac, jjac, rcond=None)
            ind = decompose2(gs, p)
            assert np.max(np.abs(ind.h1 @ pmat - ind.h2)) < 1e-10
            assert np.max(np.abs(ind.h2 @ pmat - ind.h1)) < 1e-10


def test_H_zeta_chart_invariance():
    """H_zeta agrees across a linear reparametrization of the chart."""
    g = pair_of_circles()
    b = np.array([[1.0, 0.4], [-0.3, 1.2]])

    def reparam_body(u, v):
        return g.body(b[0, 0] * u + b[0, 1] * v, b[1, 0] * u + b[1, 1] * v)

    g2 = SmoothMap(2, 4, reparam_body, domain_box=[(-0.8, 0.8)] * 2)
    for q in ([0.1, -0.2], [0.3, 0.4]):
        p = list(b @ q)
        h_direct = decompose2(CodimTwoSurface(g, scale_map(g, -1.0)), p).H_zeta
        h_reparam = decompose2(CodimTwoSurface(g2, scale_map(g2, -1.0)), q).H_zeta
        assert abs(h_direct - h_reparam) < 1e-10


def test_normalize_affine_normal2():
    g = pair_of_circles()
    gs = CodimTwoSurface(g, scale_map(g, -1.0))
    pts = [[0.1, -0.2], [0.3, 0.4], [-0.5, 0.2]]
    result = normalize_affine_normal2(gs, pts)
    assert result.is_sphere
    assert abs(result.alpha - 2.0 ** (-4.0 / 3.0)) < 1e-12
    assert result.max_tau1 < 1e-10 and result.max_tau2 < 1e-10
    assert result.max_H_deviation < 1e-8


def test_normalize_affine_normal2_idempotent():
    """Feeding the returned affine normal field back reports alpha = 1."""
    g = pair_of_circles()
    pts = [[0.1, -0.2], [0.3, 0.4]]
    first = normalize_affine_normal2(CodimTwoSurface(g, scale_map(g, -1.0)), pts)
    again = normalize_affine_normal2(CodimTwoSurface(g, first.zeta), pts)
    assert abs(again.alpha - 1.0) < 1e-10
    assert again.is_sphere
