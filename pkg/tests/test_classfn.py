import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meroclass.classfn import (ClassFunction, Verdict, coefficient, denominator_from_omega,
                               denominator_series,
                               expected_residual, extremal, extremal_coefficient,
                               membership_check, random_class_function,
                               residual_identity_series, residual_series)
from meroclass.errors import BadNormalization, DomainError, InsufficientOrder, OrderExceeded
from meroclass.omega import OmegaSpec
from meroclass.series import TaylorSeries

ZERO = OmegaSpec.constant(0)


def remark_formula(n, lam, p):
    # written out independently of the geometric-sum evaluation in the package
    return (1 - lam ** n * p ** (2 * n)) / (p ** (n - 1) * (1 - lam * p * p))


def test_denominator_examples():
    assert np.array_equal(denominator_series(ClassFunction(0, 0.5, ZERO, 8)).coeffs, [1] + [0] * 8)
    assert np.array_equal(denominator_series(ClassFunction(-2, 0.5, ZERO, 8)).coeffs, [1, -2] + [0] * 7)
    a = extremal(0.5, 0.8, 0.0, 8).denominator.coeffs
    assert np.allclose(a, [1, -1.65, 0.5] + [0] * 6, rtol=0, atol=1e-15)


def test_f_series_examples():
    assert np.array_equal(ClassFunction(0, 1, ZERO, 10).f.coeffs, [0, 1] + [0] * 9)
    f = ClassFunction(-2, 0.3, ZERO, 30).f
    assert np.array_equal(f.coeffs[1:].real, 2.0 ** np.arange(30))
    koebe = extremal(1, 1, 0.0, 40).f
    assert np.allclose(koebe.coeffs, np.arange(41), rtol=0, atol=1e-12)


def test_coefficient_examples():
    rng = np.random.default_rng(3)
    for _ in range(5):
        assert coefficient(random_class_function(rng), 1) == pytest.approx(1, abs=1e-15)
    assert coefficient(ClassFunction(-2, 1, ZERO), 2) == 2
    a3 = coefficient(extremal(0.5, 0.8, 0.0), 3)
    assert abs(a3 - remark_formula(3, 0.5, 0.8)) < 1e-9
    assert abs(a3 - 2.2225) < 1e-12
    with pytest.raises(OrderExceeded):
        coefficient(ClassFunction(1, 1, ZERO, 8), 9)


def test_membership_examples():
    ident = TaylorSeries.monomial(1, order=64)
    for lam in (0.1, 0.5, 1.0):
        rep = membership_check(ident, lam)
        assert rep.residual_sup == 0 and rep.verdict is Verdict.MEMBER
    # z / (1 + z^2) = z - z^3 + z^5 - ...
    coeffs = np.zeros(65)
    coeffs[1::4], coeffs[3::4] = 1, -1
    rep = membership_check(TaylorSeries.from_coeffs(coeffs), 1.0)
    assert rep.residual_sup == pytest.approx(0.999 ** 2, abs=1e-9)
    assert rep.verdict is Verdict.MEMBER
    f = ClassFunction(-2, 1, ZERO).f
    for lam in (0.01, 0.5, 1.0):
        assert membership_check(f, lam).verdict is Verdict.MEMBER


def test_membership_not_member_and_borderline():
    f = TaylorSeries.from_coeffs([0, 1, 3], 64)
    assert membership_check(f, 1.0).verdict is Verdict.NOT_MEMBER
    # T = -z^2 has sup 0.998001 on radius 0.999
    coeffs = np.zeros(65)
    coeffs[1::4], coeffs[3::4] = 1, -1
    assert membership_check(TaylorSeries.from_coeffs(coeffs), 0.998001).verdict is Verdict.BORDERLINE


def test_membership_errors():
    with pytest.raises(InsufficientOrder):
        membership_check(TaylorSeries.from_coeffs([0, 1, 0]), 1.0)
    with pytest.raises(BadNormalization):
        residual_series(TaylorSeries.from_coeffs([0, 2, 1], 10))
    with pytest.raises(DomainError):
        membership_check(TaylorSeries.monomial(1, order=10), 1.5)


def test_residual_identity_examples():
    assert np.max(np.abs(residual_identity_series(ClassFunction(0.3 - 0.2j, 0.7, ZERO)).coeffs)) < 1e-15
    for c in (0.0, 0.1 + 0.1j, -0.2):
        t = residual_identity_series(ClassFunction(c, 1, OmegaSpec.constant(-1), 16)).coeffs
        assert np.allclose(t, -np.eye(16)[2], rtol=0, atol=1e-13)
    t = residual_identity_series(ClassFunction(0.1, 0.5, OmegaSpec.constant(0.5), 16)).coeffs
    assert np.allclose(t, 0.25 * np.eye(16)[2], rtol=0, atol=1e-13)


def test_residual_identity_strict_for_small_c():
    # with no pole near the disk the coefficients match λ z^2 ω to full relative accuracy
    rng = np.random.default_rng(17)
    for _ in range(100):
        cf = random_class_function(rng, c_radius=0.25)
        t = residual_identity_series(cf).coeffs[:63]
        e = expected_residual(cf).coeffs[:63]
        assert np.max(np.abs(t - e)) <= 1e-10 * max(np.max(np.abs(e)), 1e-300)


def test_extremal_examples():
    koebe = extremal(1, 1, 0.0)
    assert koebe.c == -2 and koebe.omega == OmegaSpec.constant(-1)
    assert abs(coefficient(extremal(0.5, 0.8, 0.0), 2)) == pytest.approx(1.65, abs=1e-15)
    flip = extremal(1, 1, math.pi, 20)
    assert flip.c == pytest.approx(2, abs=1e-15)
    # z / (1 + z)^2 has a_n = (-1)^(n-1) n
    n = np.arange(1, 21)
    assert np.allclose(flip.f.coeffs[1:], (-1.0) ** (n - 1) * n, rtol=0, atol=1e-12)


@pytest.mark.parametrize("args", [(0, 0.5, 0), (1.1, 0.5, 0), (0.5, 0, 0), (0.5, 1.2, 0),
                                  (0.5, 0.5, 2 * math.pi), (0.5, 0.5, -0.1)])
def test_extremal_domain(args):
    with pytest.raises(DomainError):
        extremal(*args)


def test_extremal_coefficient_examples():
    for lam, p in ((0.5, 0.8), (0.25, 0.3), (1.0, 0.9)):
        assert extremal_coefficient(2, lam, p) == pytest.approx((1 + lam * p * p) / p, rel=1e-15)
    for n in range(1, 12):
        assert extremal_coefficient(n, 1.0, 1.0) == n
    assert extremal_coefficient(3, 0.5, 0.8) == pytest.approx(remark_formula(3, 0.5, 0.8), rel=1e-14)
    assert extremal_coefficient(3, 0.5, 0.8) == pytest.approx(abs(coefficient(extremal(0.5, 0.8, 0.0), 3)),
                                                              rel=1e-13)


def test_json_round_trip():
    cf = ClassFunction(0.3 - 1j, 0.25, OmegaSpec.schur([0.1, -0.5j]), 32)
    assert ClassFunction.from_json(cf.to_json()) == cf
    with pytest.raises(ValueError):
        ClassFunction.from_json({"c": [0, 0]})


def test_call_matches_series_inside_pole_free_disk():
    cf = ClassFunction(0.4j, 0.5, OmegaSpec.schur([0.3, 0.2j]), 64)
    z = 0.3 - 0.2j
    assert abs(cf(z) - cf.f(z)) < 1e-13


@given(st.floats(0.01, 1.0), st.floats(0.05, 1.0), st.floats(0, 6.28))
def test_extremal_coefficients_follow_remark(lam, p, theta):
    cf = extremal(lam, p, theta, 12)
    for n in range(2, 7):
        expect = extremal_coefficient(n, lam, p)
        assert abs(abs(cf.f[n]) - expect) <= 1e-9 * max(1.0, expect)


@given(st.integers(0, 2**32 - 1))
def test_residual_identity_property(seed):
    cf = random_class_function(np.random.default_rng(seed))
    t = residual_identity_series(cf).coeffs[:63]
    e = expected_residual(cf).coeffs[:63]
    assert np.max(np.abs(t - e)) <= 1e-10 * max(1.0, np.max(np.abs(cf.f.coeffs)))


def test_denominator_from_omega_examples():
    a = denominator_from_omega(0.3, 0.5, TaylorSeries.from_coeffs([0.2, -0.6j]), 6)
    want = [1, 0.3, -0.5 * 0.2, -0.5 * -0.6j / 2, 0, 0, 0]
    assert np.allclose(a.coeffs, want, atol=1e-16)
    short = denominator_from_omega(-1, 1.0, TaylorSeries.from_coeffs([1, 1, 1, 1]), 3)
    assert np.allclose(short.coeffs, [1, -1, -1, -0.5], atol=1e-16)
    cf = ClassFunction(0.1 - 0.2j, 0.7, OmegaSpec.schur([0.4, -0.3j]), 20)
    assert np.allclose(denominator_series(cf).coeffs,
                       denominator_from_omega(cf.c, cf.lam, cf.primitive.omega_series, 20).coeffs,
                       atol=0)
