import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullgs.poly import Poly, derivative_stack, random_poly

N = 3
coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
exps = st.tuples(*[st.integers(0, 3)] * N)
polys = st.dictionaries(exps, coef, max_size=6).map(lambda d: Poly(N, d))
points = st.tuples(*[st.floats(-1, 1)] * N).map(np.array)


def test_arithmetic_basics():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    p = (x + 1) * (y - 2)
    assert p([2.0, 3.0]) == pytest.approx(3.0)
    assert (x ** 3).degree() == 3
    assert (p - p).is_zero()
    assert Poly.zero(2).degree() == -1


def test_bad_exponent_rejected():
    with pytest.raises(ValueError):
        Poly(2, {(1, 0, 0): 1.0})
    with pytest.raises(ValueError):
        Poly(2, {(-1, 0): 1.0})


def test_diff_monomial():
    p = Poly(2, {(3, 2): 2.0})
    assert p.diff(0) == Poly(2, {(2, 2): 6.0})
    assert p.diff(1).diff(1).diff(1).is_zero()


def test_json_roundtrip(rng):
    p = random_poly(4, 3, rng)
    assert Poly.from_json(p.to_json()) == p


@given(polys, polys, points)
def test_evaluation_is_a_ring_map(p, q, x):
    assert (p * q)(x) == pytest.approx(p(x) * q(x), rel=1e-9, abs=1e-9)
    assert (p + q)(x) == pytest.approx(p(x) + q(x), rel=1e-9, abs=1e-9)


@given(polys, polys, st.integers(0, N - 1))
def test_leibniz_rule(p, q, i):
    lhs = (p * q).diff(i)
    rhs = p.diff(i) * q + p * q.diff(i)
    x = np.array([0.3, -0.7, 0.5])
    assert lhs(x) == pytest.approx(rhs(x), rel=1e-9, abs=1e-8)


@given(polys, points)
def test_derivative_stack_matches_diff(p, x):
    v, d1, d2 = derivative_stack([p], x, 2)
    assert v[0] == pytest.approx(p(x), abs=1e-9)
    for i in range(N):
        assert d1[i, 0] == pytest.approx(p.diff(i)(x), rel=1e-9, abs=1e-8)
        for j in range(N):
            assert d2[i, j, 0] == pytest.approx(p.diff(i).diff(j)(x), rel=1e-9, abs=1e-8)


def test_derivative_stack_zero_poly_is_exact_zero():
    out = derivative_stack([Poly.zero(3), Poly.var(3, 0)], [1.0, 2.0, 3.0], 2)
    assert np.all(out[1][:, 0] == 0) and np.all(out[2][..., 0] == 0)


def test_derivative_stack_rejects_mismatch():
    with pytest.raises(ValueError):
        derivative_stack([Poly.var(2, 0), Poly.var(3, 0)], [0, 0], 1)
    with pytest.raises(ValueError):
        derivative_stack([Poly.var(2, 0)], [0, 0, 0], 1)
