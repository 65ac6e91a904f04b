import numpy as np
import pytest
from hypothesis import given, strategies as st

from meroclass.errors import ZeroConstantTerm
from meroclass.series import (TaylorSeries, add, antiderivative, derivative, evaluate,
                              mul, reciprocal, sup_on_circle)

finite = st.floats(-10, 10, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def series(min_size=1, max_size=12):
    return st.lists(cplx, min_size=min_size, max_size=max_size).map(TaylorSeries.from_coeffs)


def unit_series():
    # constant term bounded away from zero
    return st.tuples(st.builds(complex, st.floats(0.5, 3), st.floats(-1, 1)),
                     st.lists(cplx, max_size=10)).map(lambda t: TaylorSeries.from_coeffs([t[0], *t[1]]))


def test_add_examples():
    one_plus = TaylorSeries.from_coeffs([1, 1])
    one_minus = TaylorSeries.from_coeffs([1, -1])
    assert np.array_equal(add(one_plus, one_minus).coeffs, [2, 0])
    s = TaylorSeries.from_coeffs([1, 2, 3])
    assert add(s, TaylorSeries.zero(2)) == s
    assert np.array_equal(add(TaylorSeries.monomial(1), TaylorSeries.monomial(2)).coeffs, [0, 1, 1])


def test_mul_examples():
    n = 20
    geo = TaylorSeries.from_coeffs(np.ones(n + 1))
    prod = mul(TaylorSeries.from_coeffs([1, -1]), geo, n)
    assert prod.coeffs[0] == 1 and np.all(prod.coeffs[1:] == 0)
    s = TaylorSeries.from_coeffs([1, 2j, 3])
    assert mul(s, TaylorSeries.constant(1), 2) == s
    assert np.array_equal(mul(TaylorSeries.from_coeffs([1, 2]), TaylorSeries.from_coeffs([3, 4]), 2).coeffs,
                          [3, 10, 8])


def test_reciprocal_examples():
    assert np.array_equal(reciprocal(TaylorSeries.from_coeffs([1, -1]), 10).coeffs, np.ones(11))
    assert np.array_equal(reciprocal(TaylorSeries.constant(1), 5).coeffs, [1, 0, 0, 0, 0, 0])
    r = reciprocal(TaylorSeries.from_coeffs([1, -2]), 30)
    assert np.array_equal(r.coeffs.real, 2.0 ** np.arange(31))


def test_reciprocal_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        reciprocal(TaylorSeries.from_coeffs([0, 1]), 4)
    with pytest.raises(ZeroDivisionError):
        reciprocal(TaylorSeries.from_coeffs([1e-320, 1]), 4)


def test_derivative_examples():
    assert np.array_equal(derivative(TaylorSeries.monomial(2)).coeffs, [0, 2])
    assert np.all(derivative(TaylorSeries.constant(5.0)).coeffs == 0)
    assert np.array_equal(derivative(TaylorSeries.from_coeffs([1, 0.5 - 2j])).coeffs, [0.5 - 2j])


def test_antiderivative_examples():
    assert np.array_equal(antiderivative(TaylorSeries.constant(1)).coeffs, [0, 1])
    assert np.all(antiderivative(TaylorSeries.zero()).coeffs == 0)
    assert np.array_equal(antiderivative(TaylorSeries.constant(-1)).coeffs, [0, -1])


def test_evaluate_examples():
    assert evaluate(TaylorSeries.from_coeffs([1, 1]), 0) == 1
    # z + 2z^2 + 4z^3 + ... = z / (1 - 2z)
    s = TaylorSeries.from_coeffs([0] + [2.0 ** (k - 1) for k in range(1, 41)])
    assert abs(evaluate(s, 0.25) - 0.5) < 1e-10
    assert evaluate(TaylorSeries.zero(7), 0.3 + 0.4j) == 0


def test_evaluate_vectorized_matches_scalar():
    s = TaylorSeries.from_coeffs([1, 2 - 1j, 0.5, 3j])
    zs = np.array([0.1, 0.5j, -0.3 + 0.2j])
    assert np.allclose(evaluate(s, zs), [evaluate(s, complex(z)) for z in zs], rtol=0, atol=1e-15)


def test_sup_on_circle_examples():
    assert sup_on_circle(TaylorSeries.constant(1), 0.7) == 1
    assert abs(sup_on_circle(TaylorSeries.monomial(1), 0.9) - 0.9) < 1e-15
    assert abs(sup_on_circle(TaylorSeries.monomial(2), 0.5, 1024) - 0.25) < 1e-12


def test_sup_on_circle_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sup_on_circle(TaylorSeries.constant(1), 0.0)
    with pytest.raises(ValueError):
        sup_on_circle(TaylorSeries.constant(1), 0.5, samples=0)


def test_getitem_beyond_order_is_zero():
    s = TaylorSeries.from_coeffs([1, 2])
    assert s[5] == 0 and s.order == 1


def test_coefficients_are_read_only():
    s = TaylorSeries.from_coeffs([1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 3


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        TaylorSeries.from_coeffs([1, float("nan")])


@given(series(), series())
def test_add_commutes(a, b):
    assert add(a, b) == add(b, a)


@given(series(), series(), st.integers(0, 15))
def test_mul_commutes(a, b, n):
    assert np.allclose(mul(a, b, n).coeffs, mul(b, a, n).coeffs)


@given(unit_series(), st.integers(0, 15))
def test_reciprocal_inverts(a, n):
    r = reciprocal(a, n)
    prod = mul(a, r, n).coeffs
    scale = max(1.0, float(np.max(np.abs(a.coeffs))) * float(np.max(np.abs(r.coeffs))))
    assert abs(prod[0] - 1) < 1e-10 * scale
    assert np.all(np.abs(prod[1:]) < 1e-10 * scale)


@given(series(min_size=2))
def test_derivative_undoes_antiderivative(a):
    assert np.allclose(derivative(antiderivative(a)).coeffs, a.coeffs, rtol=1e-14, atol=1e-14)


@given(series(), series(), st.builds(complex, st.floats(-0.9, 0.9), st.floats(-0.9, 0.9)))
def test_evaluate_is_additive(a, b, z):
    lhs = evaluate(add(a, b), z)
    rhs = evaluate(a, z) + evaluate(b, z)
    assert abs(lhs - rhs) < 1e-9 * (1 + abs(lhs))
