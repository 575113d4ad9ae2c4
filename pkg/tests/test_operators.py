import json

import numpy as np
import pytest

from stabil.operators import (
    DegreeOverflow,
    OperatorTruncation,
    TauZero,
    apply,
    compose_operators,
    identity,
    is_algebra_homomorphism,
    make_composition,
    make_dilation,
    make_multiplication,
    make_pcd,
    make_product_composition,
    make_rank1,
    moments,
    rank_estimate,
    zero_operator,
)
from stabil.polycore import ComplexPoly, compose, multiply
from stabil.samplers import random_pcd_conforming
from stabil.regions import (
    ConvexComplement,
    HalfPlane,
    is_stable,
    random_stable_poly,
)

from conftest import random_poly


def P(*c):
    return ComplexPoly(list(c))


def cols(A):
    return [c.trimmed() for c in A.columns]


def test_apply_examples(rng):
    p = random_poly(rng, 4)
    assert apply(identity(4), p).allclose(p)
    A = OperatorTruncation.from_columns([P(1), P(0, 0, 1), P(0, 0, 0, 0, 1)])
    assert apply(A, P(1, 1)).allclose(P(1, 0, 1))
    assert apply(zero_operator(3), p.trimmed() if p.degree <= 3 else P(1, 2)).is_zero()


def test_apply_overflow_and_linearity(rng):
    A = make_product_composition(P(1, 2), P(0.5, 1), 3)
    with pytest.raises(DegreeOverflow):
        apply(A, P(0, 0, 0, 0, 1))
    p, q = random_poly(rng, 3), random_poly(rng, 3)
    a, b = 2 - 1j, 0.5j
    lhs = apply(A, p * a + q * b)
    rhs = apply(A, p) * a + apply(A, q) * b
    assert lhs.allclose(rhs, 1e-12)


def test_from_columns_rejects_silent_truncation():
    with pytest.raises(DegreeOverflow):
        OperatorTruncation.from_columns([P(1), P(0, 0, 1)], M=1)
    A = OperatorTruncation.from_columns([P(1), P(0, 1, 0, 0)], M=1)
    assert A.M == 1


def test_moments_examples():
    psi, phi = P(-2, 1), P(0.1, 0, 1)
    m = moments(make_product_composition(psi, phi, 5))
    for n in range(6):
        assert m[n].allclose(multiply(psi, phi**n), 0)
    ident = moments(identity(3))
    assert all(ident[n].allclose(ComplexPoly.monomial(n)) for n in range(4))
    r = moments(make_rank1([1, 0, 0, 0], P(-2, 1), 3))
    assert r[0].allclose(P(-2, 1)) and all(r[n].is_zero() for n in range(1, 4))


def test_product_composition_examples():
    A = make_product_composition(P(1), P(0, 0, 1), 2)
    assert [c.degree for c in cols(A)] == [0, 2, 4] and A.M == 4
    B = make_product_composition(P(-2, 1), P(0, 1), 1)
    assert cols(B)[0].allclose(P(-2, 1)) and cols(B)[1].allclose(P(0, -2, 1))
    C = make_product_composition(P(1), P(0.5), 4)
    assert rank_estimate(C) == 1
    p = P(1, 2, 3)
    assert apply(C, p).allclose(P(p(0.5)))


def test_multiplication_and_composition():
    p = P(1, -1, 2)
    assert apply(make_multiplication(P(3, 1), 2), p).allclose(multiply(P(3, 1), p))
    assert apply(make_composition(P(1, 1), 2), p).allclose(compose(p, P(1, 1)))


def test_rank1_examples():
    A = make_rank1([1, 0, 0], P(-2, 1), 2)
    assert cols(A)[0].allclose(P(-2, 1)) and cols(A)[1].is_zero()
    assert rank_estimate(make_rank1([0, 0, 0], P(1, 1), 2)) == 0
    C = make_rank1(0.5 ** np.arange(4), P(1), 3)
    assert np.allclose(C.matrix[0], 0.5 ** np.arange(4))
    with pytest.raises(ValueError):
        make_rank1([1, 2], P(1), 3)


def test_dilation_examples():
    assert apply(make_dilation(2, 2), P(1, 1, 1)).allclose(P(1, 2, 4))
    assert np.allclose(make_dilation(1, 4).matrix, identity(4).matrix)
    D = compose_operators(make_dilation(0.5, 4), make_dilation(2, 4))
    assert np.allclose(D.matrix, identity(4).matrix)
    with pytest.raises(TauZero):
        make_dilation(0, 3)


def test_pcd_examples():
    D = make_pcd(P(1), P(0, 1), 1, 3)
    assert apply(D, P(0, 0, 1)).allclose(P(0, 2))
    psi, phi = P(1, 2), P(0.3, -1, 0.2)
    assert np.allclose(make_pcd(psi, phi, 0, 3).matrix, make_product_composition(psi, phi, 3).matrix)
    img = apply(D, multiply(P(-1, 1), P(-3, 1)))
    assert img.allclose(P(-4, 2))


def test_compose_operators_examples(rng):
    A = make_product_composition(P(1, 2), P(0.5, 1), 3)
    assert np.allclose(compose_operators(A, identity(3)).matrix, A.matrix)
    psi, phi = P(1, -1), P(0, 0.5, 0.5)
    MC = compose_operators(make_multiplication(psi, 6), make_composition(phi, 3))
    ref = make_product_composition(psi, phi, 3)
    assert np.allclose(MC.matrix[: ref.M + 1], ref.matrix) and not np.any(MC.matrix[ref.M + 1:])
    with pytest.raises(DegreeOverflow):
        compose_operators(identity(2), make_composition(P(0, 0, 1), 2))


def test_homomorphism_examples():
    assert is_algebra_homomorphism(make_composition(P(0, 0, 1), 4))
    assert not is_algebra_homomorphism(make_multiplication(P(1, 1), 4))
    assert is_algebra_homomorphism(make_rank1([1, 0, 0, 0], P(1), 3))


def test_homomorphism_iff_composition():
    rng = np.random.default_rng(5)
    for _ in range(40):
        phi = random_poly(rng, int(rng.integers(0, 3))) * 0.5
        A = make_composition(phi, 4)
        B = make_product_composition(P(1, 0.3), phi, 4)
        for op in (A, B):
            C = make_composition(op.column(1), 4)
            agrees = all(op.column(n).allclose(C.column(n), 1e-10) for n in range(5))
            assert is_algebra_homomorphism(op) == agrees


def test_rank_examples():
    assert rank_estimate(make_rank1([1, 2, 3], P(1, 1), 2)) == 1
    assert rank_estimate(make_product_composition(P(1), P(0, 0, 1), 2)) == 3
    assert rank_estimate(zero_operator(3, 2)) == 0


def test_json_round_trip():
    A = make_product_composition(P(1, 2j), P(0.5, 1), 3)
    doc = json.loads(json.dumps(A.to_json()))
    assert doc["N"] == 3
    B = OperatorTruncation.from_json(doc)
    assert np.array_equal(A.matrix, B.matrix)
    with pytest.raises(ValueError):
        OperatorTruncation.from_json({"N": 2, "columns": [{"coeffs": [[1, 0]]}]})
    with pytest.raises(ValueError):
        OperatorTruncation.from_json({"columns": []})


def test_pcd_preserves_stability():
    rng = np.random.default_rng(6)
    for _ in range(20):
        omega, psi, phi = random_pcd_conforming(rng)
        A = make_pcd(psi, phi, int(rng.integers(0, 3)), 6)
        for _ in range(20):
            p = random_stable_poly(omega, int(rng.integers(1, 7)), rng=rng)
            img = apply(A, p)
            st = is_stable(img, omega)
            assert img.is_zero(1e-12 * img.scale + 1e-300) or st.stable or st.status.value == "borderline", st


def test_halfplane_complement_gauss_lucas():
    omega = ConvexComplement(HalfPlane(1, 0.0))  # stable = all roots in Re z <= 0
    D = make_pcd(P(1), P(0, 1), 1, 8)
    rng = np.random.default_rng(7)
    for _ in range(30):
        p = random_stable_poly(omega, 8, rng=rng)
        assert not is_stable(apply(D, p), omega).unstable
