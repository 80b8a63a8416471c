"""Exactness of the jet arithmetic against finite differences and closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import parasphere.jets as jn
from parasphere.jets import (
    Jet,
    JetError,
    SingularSystemError,
    SmoothMap,
    jet_det,
    jet_eval,
    jet_solve,
)


def random_body(rng):
    """A random smooth scalar expression in three variables."""
    ops = [
        lambda a, b: a + b,
        lambda a, b: a * b,
        lambda a, b: a - 0.5 * b,
        lambda a, b: a * jn.exp(b * 0.3),
        lambda a, b: jn.sin(a) + jn.cos(b),
        lambda a, b: a / (b * b + 2.0),
        lambda a, b: jn.sinh(a * 0.5) - jn.cosh(b * 0.4),
    ]
    picks = rng.integers(0, len(ops), size=4)

    def body(x, y, z):
        vals = [x, y, z, x * y - z]
        acc = vals[0]
        for k, i in enumerate(picks):
            acc = ops[i](acc, vals[(k + 1) % 4])
        return [acc]

    return body


def finite_difference(fn, p, axis, step=1e-5):
    pp, pm = list(p), list(p)
    pp[axis] += step
    pm[axis] -= step
    return (fn(pp)[0] - fn(pm)[0]) / (2 * step)


def test_finite_difference_agreement():
    """First through fourth raw partials agree with central differences."""
    rng = np.random.default_rng(7)
    for trial in range(100):
        body = random_body(rng)
        fmap = SmoothMap(3, 1, body)
        p = list(rng.uniform(-0.8, 0.8, size=3))
        jt = jet_eval(fmap, p, 4)

        # first order against plain central differences
        for axis in range(3):
            fd = finite_difference(lambda q: fmap(q), p, axis)
            alpha = tuple(1 if a == axis else 0 for a in range(3))
            exact = jt.partial(alpha)[0]
            assert abs(exact - fd) <= 1e-6 * max(1.0, abs(exact))

        # higher orders against differences of lower-order jets
        for order in range(2, 5):
            axis = int(rng.integers(0, 3))
            alpha = [0, 0, 0]
            alpha[axis] = 1
            rest = rng.integers(0, 3, size=order - 1)
            for a in rest:
                alpha[a] += 1
            alpha = tuple(alpha)
            lower = list(alpha)
            lower[axis] -= 1
            lower = tuple(lower)

            def lower_partial(q):
                return [jet_eval(fmap, q, order - 1).partial(lower)[0]]

            fd = finite_difference(lower_partial, p, axis)
            exact = jt.partial(alpha)[0]
            assert abs(exact - fd) <= 1e-5 * max(1.0, abs(exact))


@given(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2))
@settings(max_examples=30, deadline=None)
def test_product_rule(a, b):
    x = Jet.variable(1, 3, 0, a)
    f = jn.sin(x) * jn.exp(x * 0.5) + b
    g = jn.cosh(x) / (x * x + 1.0)
    lhs = (f * g).partial((1,))
    rhs = f.partial((1,)) * g.value + f.value * g.partial((1,))
    assert abs(lhs - rhs) < 1e-12


def test_chain_rule_closed_form():
    x = Jet.variable(1, 4, 0, 0.3)
    f = jn.exp(jn.sin(x))
    v = math.exp(math.sin(0.3))
    c, s = math.cos(0.3), math.sin(0.3)
    assert abs(f.value - v) < 1e-14
    assert abs(f.partial((1,)) - v * c) < 1e-14
    assert abs(f.partial((2,)) - v * (c * c - s)) < 1e-13


def test_mixed_partial_symmetry():
    fmap = SmoothMap(2, 1, lambda x, y: [jn.exp(x * y) * jn.sin(x + 2.0 * y)])
    jt = jet_eval(fmap, [0.2, -0.4], 4)
    assert jt.partial((1, 1)) == jt.partial((1, 1))
    assert abs(jt.partial((2, 2))[0]) > 0.0


def test_division_and_power():
    x = Jet.variable(1, 4, 0, 2.0)
    f = jn.power(x, 1.5)
    assert abs(f.partial((1,)) - 1.5 * 2.0 ** 0.5) < 1e-13
    g = 1.0 / x
    assert abs(g.partial((2,)) - 2.0 / 8.0) < 1e-14
    with pytest.raises(JetError):
        jn.log(Jet.variable(1, 2, 0, -1.0))


def test_jet_solve_roundtrip():
    """solve(A, A x) == x with jet coefficients, to 1e-12."""
    rng = np.random.default_rng(3)
    for trial in range(20):
        m = 3
        t = Jet.variable(1, 2, 0, rng.uniform(-0.5, 0.5))
        base = rng.uniform(-1, 1, size=(m, m)) + 2.0 * np.eye(m)
        a = [[t * float(base[i][j]) * 0.1 + float(base[i][j])
              for j in range(m)] for i in range(m)]
        x = [jn.sin(t * float(rng.uniform(0.5, 1.5))) + float(rng.uniform(-1, 1))
             for _ in range(m)]
        rhs = [[sum_jets([a[i][j] * x[j] for j in range(m)])] for i in range(m)]
        sol = jet_solve(a, rhs)
        for i in range(m):
            for alpha, c in sol[i][0].coef.items():
                assert abs(c - x[i].coef.get(alpha, 0.0)) < 1e-12


def sum_jets(js):
    acc = js[0]
    for j in js[1:]:
        acc = acc + j
    return acc


def test_jet_solve_singular():
    one = Jet.constant(1, 1, 1.0)
    a = [[one, one], [one, one]]
    with pytest.raises(SingularSystemError):
        jet_solve(a, [[one], [one]])


def test_jet_det():
    t = Jet.variable(1, 2, 0, 0.4)
    a = [[jn.cos(t), -jn.sin(t)], [jn.sin(t), jn.cos(t)]]
    d = jet_det(a)
    assert abs(d.value - 1.0) < 1e-14
    assert abs(d.partial((1,))) < 1e-14


def test_domain_box_enforced():
    fmap = SmoothMap(1, 1, lambda t: [t * t], domain_box=[(-1.0, 1.0)])
    fmap([0.5])
    with pytest.raises(JetError):
        fmap([1.0])
    with pytest.raises(JetError):
        fmap([3.0])


def test_pole_rejected():
    fmap = SmoothMap(1, 1, lambda t: [1.0 / (t - 0.5)])
    with pytest.raises(JetError):
        jet_eval(fmap, [0.5], 1)


def test_suspension_chart_jets():
    """First jets of the ellipse-pair suspension at the origin."""
    from parasphere.families import named_family

    fam = named_family("f1")
    p = [0.0, 0.0, 0.0]
    assert np.allclose(fam.map(p), [2.0, 0.0, 0.0, 0.0], atol=1e-15)
    jac = jet_eval(fam.map, p, 1).jacobian()
    expect = np.array([[0, 0, 0], [1, 1, 0], [0, 0, -2], [1, -1, 0]], dtype=float)
    assert np.max(np.abs(jac - expect)) < 1e-15
