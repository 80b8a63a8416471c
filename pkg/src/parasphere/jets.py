"""Forward-mode jets: exact mixed partial derivatives of smooth maps.

A :class:`Jet` stores the raw mixed partials (not Taylor coefficients) of a
scalar function of ``m`` variables, truncated at a total degree ``order``.
Arithmetic on jets propagates derivatives exactly (Leibniz rule with
binomial weights), so any quantity assembled from jets -- including the
solution of a linear system with jet coefficients -- carries exact
derivatives to machine rounding.  No finite differences are used anywhere.

The maximum order is 4: the deepest consumer differentiates the affine
metric twice, and the metric is itself two derivatives of the immersion.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

MAX_ORDER = 4

_PIVOT_TOL = 1e-12


class JetError(ValueError):
    """Invalid jet evaluation: bad order, point outside domain, non-finite result."""


class SingularSystemError(JetError):
    """Value part of a jet-coefficient linear system is singular."""


@lru_cache(maxsize=None)
def multi_indices(m, order):
    """All multi-indices of length ``m`` with total degree <= ``order``, by degree."""
    out = []
    for deg in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(m), deg):
            alpha = [0] * m
            for i in combo:
                alpha[i] += 1
            out.append(tuple(alpha))
    return tuple(out)


@lru_cache(maxsize=None)
def _binom(total, part):
    out = 1
    for t, p in zip(total, part):
        out *= math.comb(t, p)
    return out


class Jet:
    """Raw mixed partials of a scalar function at a point, truncated at ``order``.

    ``coef`` maps a multi-index (tuple of ``m`` non-negative ints) to the
    partial derivative d^alpha f; missing entries are zero.
    """

    __slots__ = ("m", "order", "coef")

    def __init__(self, m, order, coef=None):
        self.m = m
        self.order = order
        self.coef = {} if coef is None else coef

    @classmethod
    def constant(cls, m, order, value):
        zero = (0,) * m
        return cls(m, order, {zero: float(value)})

    @classmethod
    def variable(cls, m, order, i, value):
        """The i-th coordinate function, seeded at ``value``."""
        coef = {(0,) * m: float(value)}
        if order >= 1:
            e = [0] * m
            e[i] = 1
            coef[tuple(e)] = 1.0
        return cls(m, order, coef)

    @property
    def value(self):
        return self.coef.get((0,) * self.m, 0.0)

    def d(self, i):
        """Jet of the i-th partial derivative (order drops by one)."""
        if self.order < 1:
            raise JetError("cannot differentiate an order-0 jet")
        out = {}
        for alpha, v in self.coef.items():
            if alpha[i] > 0:
                beta = list(alpha)
                beta[i] -= 1
                out[tuple(beta)] = v
        return Jet(self.m, self.order - 1, out)

    def truncated(self, order):
        if order >= self.order:
            return self
        out = {a: v for a, v in self.coef.items() if sum(a) <= order}
        return Jet(self.m, order, out)

    def partial(self, alpha):
        return self.coef.get(tuple(alpha), 0.0)

    def is_finite(self):
        return all(math.isfinite(v) for v in self.coef.values())

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(self.m, self.order, other)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {a: v for a, v in self.coef.items() if sum(a) <= order}
        for a, v in other.coef.items():
            if sum(a) <= order:
                out[a] = out.get(a, 0.0) + v
        return Jet(self.m, order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.m, self.order, {a: -v for a, v in self.coef.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            s = float(other)
            return Jet(self.m, self.order, {a: v * s for a, v in self.coef.items()})
        order = min(self.order, other.order)
        out = {}
        for a, u in self.coef.items():
            da = sum(a)
            if da > order:
                continue
            for b, v in other.coef.items():
                if da + sum(b) > order:
                    continue
                c = tuple(x + y for x, y in zip(a, b))
                out[c] = out.get(c, 0.0) + _binom(c, a) * u * v
        return Jet(self.m, order, out)

    __rmul__ = __mul__

    def reciprocal(self):
        c = self.value
        if abs(c) < _PIVOT_TOL:
            raise SingularSystemError("reciprocal of a jet with (near-)zero value")
        derivs = [(-1) ** j * math.factorial(j) / c ** (j + 1)
                  for j in range(self.order + 1)]
        return _compose(self, derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / float(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(self.m, self.order, 1.0)
            for _ in range(p):
                out = out * self
            return out
        return power(self, p)

    def __repr__(self):
        return f"Jet(m={self.m}, order={self.order}, value={self.value!r})"


def _compose(f, derivs):
    """u(f) for analytic u with derivatives ``derivs[j] = u^(j)(f.value)``."""
    m, order = f.m, f.order
    delta = Jet(m, order, {a: v for a, v in f.coef.items() if sum(a) > 0})
    out = Jet.constant(m, order, derivs[0])
    p = Jet.constant(m, order, 1.0)
    for j in range(1, order + 1):
        p = p * delta
        out = out + p * (derivs[j] / math.factorial(j))
    return out


def exp(x):
    if not isinstance(x, Jet):
        return math.exp(x)
    e = math.exp(x.value)
    return _compose(x, [e] * (x.order + 1))


def log(x):
    if not isinstance(x, Jet):
        return math.log(x)
    c = x.value
    if c <= 0:
        raise JetError("log of non-positive jet value")
    derivs = [math.log(c)] + [(-1) ** (j - 1) * math.factorial(j - 1) / c ** j
                              for j in range(1, x.order + 1)]
    return _compose(x, derivs)


def sin(x):
    if not isinstance(x, Jet):
        return math.sin(x)
    s, c = math.sin(x.value), math.cos(x.value)
    cycle = [s, c, -s, -c]
    return _compose(x, [cycle[j % 4] for j in range(x.order + 1)])


def cos(x):
    if not isinstance(x, Jet):
        return math.cos(x)
    s, c = math.sin(x.value), math.cos(x.value)
    cycle = [c, -s, -c, s]
    return _compose(x, [cycle[j % 4] for j in range(x.order + 1)])


def sinh(x):
    if not isinstance(x, Jet):
        return math.sinh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return _compose(x, [s if j % 2 == 0 else c for j in range(x.order + 1)])


def cosh(x):
    if not isinstance(x, Jet):
        return math.cosh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return _compose(x, [c if j % 2 == 0 else s for j in range(x.order + 1)])


def power(x, p):
    """x**p for real exponent p; requires a positive value part."""
    if not isinstance(x, Jet):
        return float(x) ** p
    c = x.value
    if c <= 0:
        raise JetError("real power of a jet with non-positive value")
    derivs = []
    fac = 1.0
    for j in range(x.order + 1):
        derivs.append(fac * c ** (p - j))
        fac *= p - j
    return _compose(x, derivs)


def sqrt(x):
    return power(x, 0.5)


def absolute(x):
    """|x| on jets, smooth away from zero values."""
    if not isinstance(x, Jet):
        return abs(x)
    if x.value == 0:
        raise JetError("absolute value of a jet with zero value part")
    return x if x.value > 0 else -x


# -- jet linear algebra ----------------------------------------------------


def jet_solve(matrix, rhs):
    """Solve A x = b where A is n x n and b is n x k, all entries jets.

    Gauss-Jordan with partial pivoting on the value parts only; the jet
    parts follow the chosen pivots.  The value part of the result equals
    the ordinary linear solve.
    """
    n = len(matrix)
    k = len(rhs[0])
    rows = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(rows[r][col].value))
        if abs(rows[piv][col].value) < _PIVOT_TOL:
            raise SingularSystemError("pivot below 1e-12 in jet_solve")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].reciprocal()
        rows[col] = [entry * inv for entry in rows[col]]
        for r in range(n):
            if r == col:
                continue
            factor = rows[r][col]
            if not factor.coef:
                continue
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [[rows[i][n + j] for j in range(k)] for i in range(n)]


def jet_det(matrix):
    """Determinant of a square matrix of jets (elimination on value parts)."""
    n = len(matrix)
    rows = [list(r) for r in matrix]
    m, order = rows[0][0].m, rows[0][0].order
    det = Jet.constant(m, order, 1.0)
    sign = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(rows[r][col].value))
        if abs(rows[piv][col].value) < _PIVOT_TOL:
            raise SingularSystemError("pivot below 1e-12 in jet_det")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = det * pivot
        inv = pivot.reciprocal()
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if not factor.coef:
                continue
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det * sign


# -- smooth maps -----------------------------------------------------------


class SmoothMap:
    """An immersion (or any smooth map) given as a jet-arithmetic body.

    ``body`` takes ``domain_dim`` scalar jets and returns ``codomain_dim``
    scalar jets built from the closed primitive set (arithmetic, powers,
    exp, trig, hyperbolic functions, linear maps, concatenation,
    composition).  Evaluating the body on seeded coordinate jets yields all
    mixed partials exactly.
    """

    def __init__(self, domain_dim, codomain_dim, body, domain_box=None, name=""):
        self.domain_dim = domain_dim
        self.codomain_dim = codomain_dim
        self.body = body
        self.domain_box = domain_box
        self.name = name

    def _check_point(self, point):
        point = [float(x) for x in point]
        if len(point) != self.domain_dim:
            raise JetError(
                f"point dimension {len(point)} != domain dimension {self.domain_dim}")
        if self.domain_box is not None:
            for x, (lo, hi) in zip(point, self.domain_box):
                if not lo < x < hi:
                    raise JetError(f"point {point} outside domain box {self.domain_box}")
        return point

    def jet(self, point, order):
        """Component jets at ``point``; internal building block of jet_eval."""
        if not 0 <= order <= MAX_ORDER:
            raise JetError(f"order must be in [0, {MAX_ORDER}], got {order}")
        point = self._check_point(point)
        seeds = [Jet.variable(self.domain_dim, order, i, x)
                 for i, x in enumerate(point)]
        comps = self.body(*seeds)
        out = []
        for c in comps:
            if not isinstance(c, Jet):
                c = Jet.constant(self.domain_dim, order, c)
            out.append(c)
        if len(out) != self.codomain_dim:
            raise JetError("body returned wrong number of components")
        return out

    def __call__(self, point):
        return np.array([c.value for c in self.jet(point, 0)])

    def is_immersion(self, points, tol=1e-8):
        """Full-rank Jacobian check at every sampled point."""
        for p in points:
            jac = jet_eval(self, p, 1).jacobian()
            if np.linalg.matrix_rank(jac, tol=tol) < self.domain_dim:
                return False
        return True


class JetTensor:
    """All mixed partials of a vector-valued map at a point, up to ``order``."""

    def __init__(self, jets, domain_dim, order):
        self.jets = list(jets)
        self.domain_dim = domain_dim
        self.order = order

    @property
    def codomain_dim(self):
        return len(self.jets)

    @property
    def value(self):
        return np.array([j.value for j in self.jets])

    def partial(self, alpha):
        """The mixed partial d^alpha of the map (an ambient vector)."""
        alpha = tuple(alpha)
        return np.array([j.coef.get(alpha, 0.0) for j in self.jets])

    def jacobian(self):
        ei = np.eye(self.domain_dim, dtype=int)
        return np.column_stack([self.partial(tuple(ei[i])) for i in range(self.domain_dim)])

    @property
    def coefficients(self):
        return {alpha: self.partial(alpha)
                for alpha in multi_indices(self.domain_dim, self.order)}


def jet_eval(smooth_map, point, order):
    """All mixed partials of ``smooth_map`` at ``point``, exact to rounding."""
    comps = smooth_map.jet(point, order)
    for c in comps:
        if not c.is_finite():
            raise JetError("non-finite jet coefficients")
    return JetTensor(comps, smooth_map.domain_dim, order)


def is_coordinate_seed(jets):
    """True when ``jets`` are the canonical coordinate seeds of a chart."""
    m = len(jets)
    for i, j in enumerate(jets):
        if j.m != m:
            return False
        for alpha, v in j.coef.items():
            deg = sum(alpha)
            if deg == 0:
                continue
            e = tuple(1 if k == i else 0 for k in range(m))
            if alpha == e:
                if v != 1.0:
                    return False
            elif v != 0.0:
                return False
    return True
