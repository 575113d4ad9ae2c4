import json

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from stabil.polycore import (
    ComplexPoly,
    DegreeZero,
    DivisorZero,
    PolynomialError,
    ZeroPolynomial,
    compose,
    derivative,
    divide_exact,
    evaluate,
    multiply,
    roots,
    series_divide,
    shift_argument,
)

from conftest import cplx, polys, random_poly


def P(*c):
    return ComplexPoly(list(c))


# -- evaluation --------------------------------------------------------------


def test_eval_examples():
    assert abs(evaluate(P(1, 0, 1), 1j)) == 0
    assert evaluate(P(0), 5) == 0
    assert evaluate(P(1, 2, 4), 0.5) == 3


def test_eval_vectorized_matches_scalar(rng):
    p = random_poly(rng, 7)
    z = rng.normal(size=5) + 1j * rng.normal(size=5)
    assert np.allclose(evaluate(p, z), [evaluate(p, zk) for zk in z])


# -- arithmetic --------------------------------------------------------------


def test_multiply_examples():
    assert multiply(P(1, 1), P(1, -1)).allclose(P(1, 0, -1))
    assert multiply(P(1, 2, 3), P(0)).is_zero()
    assert multiply(P(-2, 1), P(0, 0, 1)).allclose(P(0, 0, -2, 1))


def test_compose_examples(rng):
    assert compose(P(1, 0, 1), P(0, 2)).allclose(P(1, 0, 4))
    p = random_poly(rng, 5)
    assert compose(p, P(0, 1)).allclose(p, 1e-14)
    assert compose(P(0, 0, 0, 1), P(0, 0, 1)).allclose(ComplexPoly.monomial(6))


def test_degree_is_relative():
    assert P(1, 1e-13).degree == 0
    assert P(1e-20, 1e-20 * 1e-13).degree == 0
    assert P(1e-20, 1e-20).degree == 1
    assert P(0, 0).degree == -1
    assert (P(1, 2) * 0).degree == -1


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys(10))
def test_ring_laws(p, q, r):
    def rel_close(a, b, tol=1e-10):
        n = max(a.coeffs.size, b.coeffs.size)
        scale = max(a.norm(), b.norm(), 1.0)
        return np.linalg.norm(a.padded(n) - b.padded(n)) <= tol * scale

    assert rel_close(multiply(p, q), multiply(q, p))
    assert rel_close(multiply(multiply(p, q), r), multiply(p, multiply(q, r)))
    z = 0.7 - 0.4j
    lhs, rhs = evaluate(multiply(p, q), z), evaluate(p, z) * evaluate(q, z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs), abs(evaluate(p, z)) * abs(evaluate(q, z)))


@settings(max_examples=40, deadline=None)
@given(polys(4, 1.5), polys(3, 1.5), polys(3, 1.5))
def test_compose_associative(p, q, r):
    a = compose(compose(p, q), r)
    b = compose(p, compose(q, r))
    n = max(a.coeffs.size, b.coeffs.size)
    assert np.linalg.norm(a.padded(n) - b.padded(n)) <= 1e-9 * max(1.0, a.norm())


def test_pow_and_operators():
    p = P(1, 1)
    assert (p**3).allclose(P(1, 3, 3, 1))
    assert (p + 1).allclose(P(2, 1))
    assert (1 - p).allclose(P(0, -1))
    assert (2 * p).allclose(P(2, 2))


# -- derivative --------------------------------------------------------------


def test_derivative_examples():
    assert derivative(P(0, 0, 0, 1)).allclose(P(0, 0, 3))
    assert derivative(P(5)).is_zero()
    assert derivative(P(1, 2, 4)).allclose(P(2, 8))
    assert derivative(P(1, 2, 4), 2).allclose(P(8))


def _hull_distance(pt, verts):
    from stabil.regions import PolygonHull

    return 0.0 if PolygonHull(tuple(verts)).contains(pt) else float(PolygonHull(tuple(verts)).boundary_distance(pt))


@pytest.mark.parametrize("seed", range(25))
def test_gauss_lucas(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(2, 16))
    zs = rng.normal(size=deg) + 1j * rng.normal(size=deg)
    p = ComplexPoly.from_roots(zs)
    for r in roots(derivative(p)).all_roots():
        assert _hull_distance(complex(r), zs) <= 1e-8


# -- roots -------------------------------------------------------------------


def test_roots_examples():
    rs = roots(P(1, 0, 1))
    assert sorted(rs.roots, key=lambda z: z.imag) == pytest.approx([-1j, 1j], abs=1e-12)
    rs = roots(P(4, -4, 1))
    assert rs.roots == pytest.approx([2], abs=1e-7) and rs.multiplicities == (2,)
    rs = roots(P(-2.2, -0.9, 1))
    assert sorted(r.real for r in rs.roots) == pytest.approx([-1.1, 2.0], abs=1e-10)


def test_roots_errors():
    with pytest.raises(ZeroPolynomial):
        roots(P(0))
    with pytest.raises(DegreeZero):
        roots(P(3))


def test_roots_zero_root_and_determinism():
    rs = roots(P(0, 0, 1, 1))
    assert 0 in rs.roots and rs.multiplicities[list(rs.roots).index(0)] == 2
    p = P(1, 2, 3, 4, 5)
    assert np.array_equal(roots(p).all_roots(), roots(p).all_roots())


@settings(max_examples=60, deadline=None)
@given(st.lists(cplx(2.0), min_size=1, max_size=12), cplx(2.0))
@example([8.349868792927381e-156j] * 2, 0j)
def test_roots_residual_and_count(zs, lead):
    if abs(lead) < 0.1:
        lead = 1.0
    p = ComplexPoly.from_roots(zs, lead)
    rs = roots(p)
    assert rs.degree == p.degree
    assert rs.residual <= rs.residual_bound
    for r in rs.all_roots():
        assert abs(evaluate(p, r)) / abs(p.coeffs[-1]) <= rs.residual_bound


# -- division ----------------------------------------------------------------


def test_divide_examples():
    assert divide_exact(P(0, 0, 0, 1), P(0, 1)).allclose(P(0, 0, 1))
    assert divide_exact(P(1, 0, 1), P(0, 1)) is None
    assert divide_exact(multiply(P(-2, 1), P(0, 0, 1)), P(-2, 1)).allclose(P(0, 0, 1))
    with pytest.raises(DivisorZero):
        divide_exact(P(1, 2), P(0))


@settings(max_examples=60, deadline=None)
@given(polys(8), polys(8))
@example(ComplexPoly([1j, 1e-6j]), ComplexPoly([1j, 1e-6j]))
def test_divide_round_trip(q, r):
    if q.trimmed().degree < 0 or r.trimmed().degree < 0:
        return
    p = multiply(q, r)
    got = divide_exact(p, q, 1e-8)
    assert got is not None
    back = multiply(q, got)
    n = max(back.coeffs.size, p.coeffs.size)
    assert np.linalg.norm(back.padded(n) - p.padded(n)) <= 1e-8 * p.norm()


def test_series_divide_geometric():
    out = series_divide(np.array([1.0]), np.array([1.0, -0.5]), 6)
    assert np.allclose(out, 0.5 ** np.arange(6))
    with pytest.raises(DivisorZero):
        series_divide(np.array([1.0]), np.array([0.0, 1.0]), 3)


def test_shift_argument():
    p = P(1, 2, 3)
    q = shift_argument(p, 1 + 1j, 0.5)
    for u in (0, 0.3, -1 + 2j):
        assert evaluate(q, u) == pytest.approx(evaluate(p, 1 + 1j + 0.5 * u))


# -- JSON --------------------------------------------------------------------


def test_json_round_trip(rng):
    p = random_poly(rng, 6)
    doc = json.loads(json.dumps(p.to_json()))
    assert np.array_equal(ComplexPoly.from_json(doc).coeffs, p.coeffs)


@pytest.mark.parametrize("doc", [{}, {"coeffs": "x"}, {"coeffs": [[1]]}, {"coeffs": [["a", 0]]}])
def test_json_malformed(doc):
    with pytest.raises(PolynomialError):
        ComplexPoly.from_json(doc)


def test_roots_keep_tiny_leading_coefficient():
    # leading coefficient is 1e-15 of the largest, yet genuine
    want = np.array([0.5j, 1e5, -1e5, 2e5])
    p = ComplexPoly.from_roots(want)
    assert abs(p.coeffs[-1]) < 1e-12 * np.max(np.abs(p.coeffs))
    got = roots(p).all_roots()
    assert got.size == 4
    for w in want:
        assert np.min(np.abs(got - w)) <= 1e-8 * max(1.0, abs(w))


def test_roots_of_composition_match_preimages():
    # psi * p(phi): roots are those of psi plus the phi-preimages of the roots of p
    rng = np.random.default_rng(31)
    phi = ComplexPoly([-0.2, -0.35 - 0.63j, 0.1 - 0.57j, 0.11 - 0.06j])
    rp = (3 + 5 * rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    img = compose(ComplexPoly.from_roots(rp), phi)
    want = np.concatenate([np.roots((phi.coeffs - np.eye(4)[0] * a)[::-1]) for a in rp])
    got = roots(img).all_roots()
    assert got.size == 24
    for g in got:
        assert np.min(np.abs(want - g)) <= 1e-6 * max(1.0, abs(g))
