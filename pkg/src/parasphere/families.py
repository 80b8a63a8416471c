"""Closed-form constructors for every immersion used by the verification suite.

The central constructions: ``pair`` glues two n-dimensional proper affine
spheres into a para-holomorphic surface of codimension 2, ``suspend``
extends such a surface to a hypersurface by hyperbolic mixing in an extra
parameter, and ``calabi_product`` warps two spheres exponentially.  The
named-family registry attaches each immersion's transversal field and the
metadata the verification suites need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import jets as jn
from .jets import Jet, SmoothMap, jet_eval
from .hypersurface import Hypersurface, blaschke_normalize
from .paracomplex import CodimTwoSurface, jtilde, jtilde_jets


class UnknownFamilyError(KeyError):
    """Requested family name is not in the registry."""


TRIG_BOX = (-math.pi / 2 + 0.1, math.pi / 2 - 0.1)
HYPER_BOX = (-1.5, 1.5)
Z_BOX = (-1.0, 1.0)


# -- elementary spheres ----------------------------------------------------


def ellipse():
    return SmoothMap(1, 2, lambda t: [jn.cos(t), jn.sin(t)],
                     domain_box=[TRIG_BOX], name="ellipse")


def hyperbola():
    return SmoothMap(1, 2, lambda t: [jn.cosh(t), jn.sinh(t)],
                     domain_box=[HYPER_BOX], name="hyperbola")


def unit_sphere2():
    def body(x, y):
        return [x, y, jn.power(1.0 - x * x - y * y, 0.5)]
    return SmoothMap(2, 3, body, domain_box=[(-0.6, 0.6)] * 2, name="sphere2")


def hyperboloid_one_sheet():
    def body(u, v):
        return [jn.cosh(u) * jn.cos(v), jn.cosh(u) * jn.sin(v), jn.sinh(u)]
    return SmoothMap(2, 3, body, domain_box=[HYPER_BOX, TRIG_BOX],
                     name="hyperboloid-one-sheet")


def hyperboloid_two_sheets():
    def body(u, v):
        return [jn.sinh(u) * jn.cos(v), jn.sinh(u) * jn.sin(v), jn.cosh(u)]
    # u = 0 is a chart degeneracy; keep away from it
    return SmoothMap(2, 3, body, domain_box=[(0.3, 1.5), TRIG_BOX],
                     name="hyperboloid-two-sheets")


def xyz_surface():
    """The flat proper affine sphere x y z = 1."""
    def body(u, v):
        return [jn.exp(u), jn.exp(v), jn.exp(-u - v)]
    return SmoothMap(2, 3, body, domain_box=[HYPER_BOX] * 2, name="xyz1")


def tube_surface():
    """The flat proper affine sphere (x^2 + y^2) z = 1."""
    def body(u, v):
        return [jn.exp(u) * jn.cos(v), jn.exp(u) * jn.sin(v), jn.exp(-2.0 * u)]
    return SmoothMap(2, 3, body, domain_box=[HYPER_BOX, TRIG_BOX], name="tube")


def paraboloid():
    def body(x, y):
        return [x, y, x * x + y * y]
    return SmoothMap(2, 3, body, domain_box=[HYPER_BOX] * 2, name="paraboloid")


# -- composition formulas --------------------------------------------------


def scale_map(fmap, coeff, name=None):
    """coeff * f as a SmoothMap (same domain)."""
    def body(*xs):
        return [c * coeff for c in fmap.body(*xs)]
    return SmoothMap(fmap.domain_dim, fmap.codomain_dim, body,
                     domain_box=fmap.domain_box,
                     name=name or f"{coeff}*{fmap.name}")


def linear_map(matrix, fmap, name=None):
    """A o f for a constant matrix A."""
    matrix = np.asarray(matrix, dtype=float)

    def body(*xs):
        comps = fmap.body(*xs)
        out = []
        for row in matrix:
            acc = comps[0] * row[0]
            for c, a in zip(comps[1:], row[1:]):
                acc = acc + c * a
            out.append(acc)
        return out

    return SmoothMap(fmap.domain_dim, matrix.shape[0], body,
                     domain_box=fmap.domain_box, name=name or f"A*{fmap.name}")


def pair(f1, f2):
    """Para-holomorphic surface built from two n-dimensional spheres.

    g = (f1 x f2) + swap(f1 x (-f2)); blockwise g = (a - b, a + b) for
    a = f1(x), b = f2(y).  The tangent space is swap-invariant and
    {g, swap(g)} is transversal on the box.
    """
    if f1.codomain_dim != f1.domain_dim + 1 or f2.codomain_dim != f2.domain_dim + 1:
        raise ValueError("pair needs two hypersurface immersions")
    n = f1.domain_dim

    def body(*xs):
        a = f1.body(*xs[:n])
        b = f2.body(*xs[n:])
        return [ai - bi for ai, bi in zip(a, b)] + \
               [ai + bi for ai, bi in zip(a, b)]

    box = list(f1.domain_box) + list(f2.domain_box)
    return SmoothMap(2 * n, 2 * n + 2, body, domain_box=box,
                     name=f"pair({f1.name},{f2.name})")


def suspend(g):
    """Hypersurface f(x, z) = swap(g(x)) cosh z - g(x) sinh z.

    Satisfies f_z = -swap(f) identically.
    """
    m = g.domain_dim

    def body(*xs):
        *coords, z = xs
        gv = g.body(*coords)
        jg = jtilde_jets(gv)
        ch, sh = jn.cosh(z), jn.sinh(z)
        return [a * ch - b * sh for a, b in zip(jg, gv)]

    box = list(g.domain_box) + [Z_BOX]
    return SmoothMap(m + 1, g.codomain_dim, body, domain_box=box,
                     name=f"suspend({g.name})")


def sphere_from_pair(f1, f2):
    """The sphere-decomposition display, written out independently of suspend.

    Blockwise: ((a+b) cosh z - (a-b) sinh z, (a-b) cosh z - (a+b) sinh z).
    Pointwise equal to suspend(pair(f1, f2)).
    """
    n = f1.domain_dim

    def body(*xs):
        *coords, z = xs
        a = f1.body(*coords[:n])
        b = f2.body(*coords[n:])
        ch, sh = jn.cosh(z), jn.sinh(z)
        top = [(ai + bi) * ch - (ai - bi) * sh for ai, bi in zip(a, b)]
        bot = [(ai - bi) * ch - (ai + bi) * sh for ai, bi in zip(a, b)]
        return top + bot

    box = list(f1.domain_box) + list(f2.domain_box) + [Z_BOX]
    return SmoothMap(2 * n + 1, 2 * n + 2, body, domain_box=box,
                     name=f"sphere({f1.name},{f2.name})")


def calabi_product(f1, f2, c1, c2, a):
    """Exponentially warped product of two proper affine spheres.

    psi(x, y, z) = (c1 e^(s a z) f1(x), c2 e^(-s a z) f2(y)) with
    s = sqrt((n2 + 1)/(n1 + 1)).
    """
    if not (c1 and c2 and a):
        raise ValueError("calabi_product constants must be nonzero")
    n1, n2 = f1.domain_dim, f2.domain_dim
    s = math.sqrt((n2 + 1.0) / (n1 + 1.0))

    def body(*xs):
        *coords, z = xs
        u = f1.body(*coords[:n1])
        v = f2.body(*coords[n1:])
        e1 = jn.exp(z * (s * a)) * c1
        e2 = jn.exp(z * (-s * a)) * c2
        return [ui * e1 for ui in u] + [vi * e2 for vi in v]

    box = list(f1.domain_box) + list(f2.domain_box) + [Z_BOX]
    return SmoothMap(n1 + n2 + 1, n1 + n2 + 2, body, domain_box=box,
                     name=f"calabi({f1.name},{f2.name};{c1},{c2},{a})")


def cp(f1, f2):
    """The canonical Calabi product CP(f1, f2)(x, y, z) = (2 e^-z f1, e^z f2)."""
    return calabi_product(f1, f2, 2.0, 1.0, -1.0)


def matrix_A(n):
    """The equiaffine change of frame with det (-1)^(n+1) relating the
    suspension form to the canonical Calabi product."""
    if n < 0:
        raise ValueError("n must be >= 0")
    ident = np.eye(n + 1)
    return np.block([[0.5 * ident, ident], [0.5 * ident, -ident]])


def lambda_from_alpha(alpha, n):
    """|lambda| = |alpha|^((2n+4)/(2n+3)) relating the suspension's sphere
    constant to the codim-2 sphere constant."""
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    return abs(alpha) ** ((2 * n + 4) / (2 * n + 3))


def calabi_lambda(alpha, beta, n):
    """lambda = [(alpha beta)^(n+2) / 2^(4n+4)]^(1/(2n+3)) for the canonical
    Calabi product of two n-dimensional proper spheres."""
    if alpha == 0 or beta == 0:
        raise ValueError("alpha and beta must be nonzero")
    return ((alpha * beta) ** (n + 2) / 2.0 ** (4 * n + 4)) ** (1.0 / (2 * n + 3))


# -- tangency checks -------------------------------------------------------


def jtangency_check(surface, p):
    """Normalized |det[f_* d_1, ..., f_* d_m, swap(C)]|; zero iff swap-tangent."""
    m = surface.dim
    jac = jet_eval(surface.f, p, 1).jacobian()
    cval = surface.transversal(p)
    mat = np.column_stack([jac, jtilde(cval)])
    scale = np.prod(np.linalg.norm(mat, axis=0))
    return abs(np.linalg.det(mat)) / max(scale, 1e-300)


def complex_structure(v):
    """The standard complex rotation (x, y) -> (-y, x) on paired blocks."""
    v = np.asarray(v, dtype=float)
    half = v.shape[-1] // 2
    return np.concatenate([-v[..., half:], v[..., :half]], axis=-1)


def jtangency_complex_check(gradient, x):
    """G(x) . (J x) for a level-set gradient G and the complex rotation J."""
    return float(np.asarray(gradient(x)) @ complex_structure(x))


# -- torus-product quadric -------------------------------------------------


def torus_quadric(n):
    """Chart of the product quadric prod_i (x_i^2 + x_(n+1+i)^2) = 1.

    Coordinates (v_1, ..., v_(n+1), u_1, ..., u_n); the last radial
    exponent balances the others so the defining product is identically 1.
    """
    def body(*xs):
        vs = xs[:n + 1]
        us = xs[n + 1:]
        w = list(us)
        acc = -us[0]
        for u in us[1:]:
            acc = acc - u
        w.append(acc if n > 0 else Jet.constant(len(xs), xs[0].order, 0.0))
        radii = [jn.exp(wi) for wi in w]
        return [r * jn.cos(v) for r, v in zip(radii, vs)] + \
               [r * jn.sin(v) for r, v in zip(radii, vs)]

    box = [TRIG_BOX] * (n + 1) + [HYPER_BOX] * n
    return SmoothMap(2 * n + 1, 2 * n + 2, body, domain_box=box,
                     name=f"torus-quadric-n{n}")


def torus_quadric_value(x):
    """The defining product prod_i (x_i^2 + x_(n+1+i)^2)."""
    x = np.asarray(x, dtype=float)
    half = x.shape[-1] // 2
    return float(np.prod(x[:half] ** 2 + x[half:] ** 2))


def torus_quadric_gradient(x):
    """Gradient of the defining product, on the level set (product = 1)."""
    x = np.asarray(x, dtype=float)
    half = x.shape[-1] // 2
    r2 = x[:half] ** 2 + x[half:] ** 2
    prod = np.prod(r2)
    return np.concatenate([2 * x[:half] * prod / r2, 2 * x[half:] * prod / r2])


# -- registry --------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """A registry name plus optional real parameters."""

    name: str
    parameters: tuple = ()


@dataclass
class Family:
    """A built family: immersion, transversal data and suite metadata."""

    name: str
    kind: str                      # sphere | improper | calabi | quadric
    surface: Hypersurface | None = None
    map: SmoothMap | None = None
    box: list = field(default_factory=list)
    swap_tangent: bool = False
    involutive: bool | None = None
    flat: bool = False
    parallel_cubic: bool = False
    lambda_expected: float | None = None
    constants: dict = field(default_factory=dict)
    d_fields: tuple | None = None
    n: int | None = None
    components: tuple | None = None
    defining_value: object = None
    gradient: object = None


def base_point(box):
    return [0.5 * (lo + hi) for lo, hi in box]


@lru_cache(maxsize=None)
def sphere_constant(component_name):
    """Numeric Blaschke constant alpha (C = -alpha f) of a centro-affine sphere.

    Obtained by Blaschke-normalizing the trial field -f and projecting the
    result back onto the position vector; the projection residual certifies
    proportionality.
    """
    fmap = _COMPONENTS[component_name]()
    bp = base_point(fmap.domain_box)
    normal = blaschke_normalize(fmap, scale_map(fmap, -1.0), bp)
    fv = fmap(bp)
    cv = normal(bp)
    c = float(fv @ cv / (fv @ fv))
    resid = np.max(np.abs(cv - c * fv))
    if resid > 1e-8 * max(1.0, np.max(np.abs(cv))):
        raise ValueError(f"{component_name}: affine normal not radial ({resid:.2e})")
    return abs(c)


_COMPONENTS = {
    "ellipse": ellipse,
    "hyperbola": hyperbola,
    "sphere2": unit_sphere2,
    "hyperboloid-one-sheet": hyperboloid_one_sheet,
    "hyperboloid-two-sheets": hyperboloid_two_sheets,
    "xyz1": xyz_surface,
    "tube": tube_surface,
}

_PAIR_FAMILIES = {
    "f1": ("ellipse", "ellipse"),
    "f2": ("hyperbola", "hyperbola"),
    "f3": ("ellipse", "hyperbola"),
    "f4": ("hyperbola", "ellipse"),
}

_FLAT_FAMILIES = {
    "flat1": ("xyz1", "xyz1"),
    "flat2": ("tube", "tube"),
    "flat3": ("tube", "xyz1"),
}

_CP_FAMILIES = {
    f"cp-{a}-{b}": (a, b)
    for a in ("ellipse", "hyperbola") for b in ("ellipse", "hyperbola")
}


def example_noninvolutive_map():
    def body(x, y, z):
        top = [x * y + 1.0, x + y * 0.5, x * y, x - y * 0.5]
        jt = jtilde_jets(top)
        ch, sh = jn.cosh(z), jn.sinh(z)
        return [a * ch - b * sh for a, b in zip(top, jt)]
    return SmoothMap(3, 4, body, domain_box=[HYPER_BOX] * 3,
                     name="example-noninvolutive")


def _example_d_fields():
    x_field = lambda seeds: [1.0, 0.0, 0.0]
    w_field = lambda seeds: [2.0 * seeds[0] * seeds[0], 1.0, 2.0 * seeds[0]]
    return (x_field, w_field)


def _sphere_family(name, fmap, lam=None, **kwargs):
    """A centro-affine sphere family with transversal C = -lambda f."""
    if lam is None:
        lam = sphere_constant(name)
    surface = Hypersurface(fmap, scale_map(fmap, -lam, name=f"-{lam}*f"))
    return Family(name=name, kind="sphere", surface=surface, map=fmap,
                  box=list(fmap.domain_box),
                  lambda_expected=lam, constants={"lambda": lam}, **kwargs)


def _build_family(name):
    if name in _PAIR_FAMILIES:
        c1, c2 = _PAIR_FAMILIES[name]
        alpha, beta = sphere_constant(c1), sphere_constant(c2)
        lam = calabi_lambda(alpha, beta, 1)
        fmap = suspend(pair(_COMPONENTS[c1](), _COMPONENTS[c2]()))
        fmap.name = name
        fam = _sphere_family(name, fmap, lam=lam, swap_tangent=True,
                             involutive=True, flat=True, parallel_cubic=True)
        fam.n = 1
        fam.components = (c1, c2)
        fam.constants.update(alpha=alpha, beta=beta)
        return fam

    if name in _FLAT_FAMILIES:
        c1, c2 = _FLAT_FAMILIES[name]
        alpha, beta = sphere_constant(c1), sphere_constant(c2)
        lam = calabi_lambda(alpha, beta, 2)
        fmap = sphere_from_pair(_COMPONENTS[c1](), _COMPONENTS[c2]())
        fmap.name = name
        fam = _sphere_family(name, fmap, lam=lam, swap_tangent=True,
                             involutive=True, flat=True, parallel_cubic=True)
        fam.n = 2
        fam.components = (c1, c2)
        fam.constants.update(alpha=alpha, beta=beta)
        return fam

    if name in _CP_FAMILIES:
        c1, c2 = _CP_FAMILIES[name]
        alpha, beta = sphere_constant(c1), sphere_constant(c2)
        lam = calabi_lambda(alpha, beta, 1)
        fmap = cp(_COMPONENTS[c1](), _COMPONENTS[c2]())
        fmap.name = name
        fam = _sphere_family(name, fmap, lam=lam)
        fam.kind = "calabi"
        fam.n = 1
        fam.components = (c1, c2)
        fam.constants.update(alpha=alpha, beta=beta)
        return fam

    if name == "example-noninvolutive":
        fmap = example_noninvolutive_map()
        fam = _sphere_family(name, fmap, lam=1.0, swap_tangent=True,
                             involutive=False)
        fam.d_fields = _example_d_fields()
        fam.n = 1
        return fam

    if name in _COMPONENTS:
        fam = _sphere_family(name, _COMPONENTS[name]())
        if name in ("xyz1", "tube"):
            fam.flat = True
            fam.parallel_cubic = True
        return fam

    if name == "paraboloid":
        fmap = paraboloid()
        surface = Hypersurface(
            fmap, SmoothMap(2, 3, lambda x, y: [0.0, 0.0, math.sqrt(2.0)],
                            domain_box=fmap.domain_box, name="affine-normal"))
        return Family(name=name, kind="improper", surface=surface, map=fmap,
                      box=list(fmap.domain_box), lambda_expected=0.0)

    if name.startswith("torus-quadric-n"):
        n = int(name.rsplit("n", 1)[1])
        fmap = torus_quadric(n)
        return Family(name=name, kind="quadric", map=fmap,
                      box=list(fmap.domain_box), n=n,
                      defining_value=torus_quadric_value,
                      gradient=torus_quadric_gradient)

    raise UnknownFamilyError(name)


@lru_cache(maxsize=None)
def _cached_family(name):
    return _build_family(name)


def named_family(name):
    """Build a registry family from a name or a FamilySpec (cached)."""
    if isinstance(name, FamilySpec):
        name = name.name
    return _cached_family(name)


def family_names():
    names = (list(_PAIR_FAMILIES) + ["example-noninvolutive"]
             + list(_COMPONENTS) + ["paraboloid"]
             + list(_CP_FAMILIES) + list(_FLAT_FAMILIES)
             + ["torus-quadric-n1", "torus-quadric-n2"])
    return names
