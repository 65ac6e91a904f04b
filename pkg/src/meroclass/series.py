"""Truncated complex power series.

A :class:`TaylorSeries` stores the coefficients ``a_0 .. a_N`` of a
polynomial ``sum a_k z**k`` that stands for the first ``N + 1`` Taylor
coefficients of an analytic function.  All operations are pure and
return new series; the coefficient arrays are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from scipy.linalg import solve_triangular, toeplitz

from .errors import ZeroConstantTerm

DEFAULT_ORDER = 64
DEFAULT_SAMPLES = 4096
ZERO_THRESHOLD = 1e-300
DENSE_RECIPROCAL_LIMIT = 512

Number = Union[complex, float, int]


def as_complex(value: Number) -> complex:
    """Coerce to a finite Python complex, rejecting NaN and infinities."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Coefficients of ``z**0 .. z**N``; ``order`` is ``N``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if arr.size == 0:
            raise ValueError("a TaylorSeries needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise ValueError("TaylorSeries coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        # Python complex list for fast scalar Horner.
        object.__setattr__(self, "_scalar_coeffs", arr.tolist()[::-1])

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Number], order: int | None = None) -> "TaylorSeries":
        arr = np.asarray(list(coeffs), dtype=np.complex128)
        if order is not None:
            arr = _fit(arr, order)
        return cls(arr)

    @classmethod
    def zero(cls, order: int = 0) -> "TaylorSeries":
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def constant(cls, value: Number, order: int = 0) -> "TaylorSeries":
        arr = np.zeros(order + 1, dtype=np.complex128)
        arr[0] = as_complex(value)
        return cls(arr)

    @classmethod
    def monomial(cls, k: int, value: Number = 1.0, order: int | None = None) -> "TaylorSeries":
        n = k if order is None else order
        arr = np.zeros(n + 1, dtype=np.complex128)
        if k <= n:
            arr[k] = as_complex(value)
        return cls(arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, k: int) -> complex:
        if 0 <= k <= self.order:
            return complex(self.coeffs[k])
        if k > self.order:
            return 0j
        raise IndexError(k)

    def truncate(self, order: int) -> "TaylorSeries":
        return TaylorSeries(_fit(self.coeffs, order))

    def shift(self, k: int = 1) -> "TaylorSeries":
        """Multiply by ``z**k``; the order grows by ``k``."""
        return TaylorSeries(np.concatenate([np.zeros(k, dtype=np.complex128), self.coeffs]))

    def scale(self, factor: Number) -> "TaylorSeries":
        return TaylorSeries(self.coeffs * as_complex(factor))

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        return add(self, other)

    def __sub__(self, other: "TaylorSeries") -> "TaylorSeries":
        return add(self, other.scale(-1.0))

    def __neg__(self) -> "TaylorSeries":
        return self.scale(-1.0)

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"TaylorSeries(order={self.order}, coeffs={self.coeffs[:6]!r}{'...' if self.order > 5 else ''})"


def _fit(arr: np.ndarray, order: int) -> np.ndarray:
    if order < 0:
        raise ValueError("order must be non-negative")
    out = np.zeros(order + 1, dtype=np.complex128)
    n = min(order + 1, arr.size)
    out[:n] = arr[:n]
    return out


def add(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Coefficient-wise sum; the shorter series is zero-padded."""
    order = max(a.order, b.order)
    return TaylorSeries(_fit(a.coeffs, order) + _fit(b.coeffs, order))


def mul(a: TaylorSeries, b: TaylorSeries, order: int | None = None) -> TaylorSeries:
    """Cauchy product truncated at ``order`` (default: the larger input order)."""
    if order is None:
        order = max(a.order, b.order)
    if order < 0:
        raise ValueError("order must be non-negative")
    prod = np.convolve(a.coeffs[: order + 1], b.coeffs[: order + 1])
    return TaylorSeries(_fit(prod, order))


def reciprocal(a: TaylorSeries, order: int | None = None,
               threshold: float = ZERO_THRESHOLD) -> TaylorSeries:
    """Series ``r`` with ``a * r = 1`` in coefficients ``0 .. order``.

    Solves the lower-triangular Toeplitz system of the recursion
    ``r_k = -(a_1 r_{k-1} + ... + a_k r_0) / a_0`` by forward substitution.

    Raises
    ------
    ZeroConstantTerm
        If ``|a_0| <= threshold``.
    """
    if order is None:
        order = a.order
    if order < 0:
        raise ValueError("order must be non-negative")
    a0 = a.coeffs[0]
    if abs(a0) <= threshold:
        raise ZeroConstantTerm(f"constant term {a0!r} is zero to within {threshold:g}")
    col = _fit(a.coeffs, order)
    rhs = np.zeros(order + 1, dtype=np.complex128)
    rhs[0] = 1.0
    if order == 0:
        return TaylorSeries(rhs / a0)
    if order > DENSE_RECIPROCAL_LIMIT:
        # the dense triangular matrix would need (order + 1)^2 entries
        r = np.zeros(order + 1, dtype=np.complex128)
        r[0] = 1.0 / a0
        for k in range(1, order + 1):
            r[k] = -np.dot(col[1:k + 1], r[k - 1::-1]) / a0
        return TaylorSeries(r)
    mat = toeplitz(col, np.zeros(order + 1, dtype=np.complex128))
    r = solve_triangular(mat, rhs, lower=True, check_finite=False)
    return TaylorSeries(r)


def derivative(a: TaylorSeries) -> TaylorSeries:
    """``d/dz``; the order drops by one (a constant stays order 0)."""
    if a.order == 0:
        return TaylorSeries.zero(0)
    k = np.arange(1, a.order + 1)
    return TaylorSeries(a.coeffs[1:] * k)


def antiderivative(a: TaylorSeries) -> TaylorSeries:
    """Primitive vanishing at the origin; the order grows by one."""
    k = np.arange(1, a.order + 2)
    return TaylorSeries(np.concatenate([[0.0], a.coeffs / k]))


def evaluate(a: TaylorSeries, z):
    """Horner evaluation at a scalar or an array of points."""
    if np.isscalar(z):
        acc = 0j
        zc = as_complex(z)
        for c in a._scalar_coeffs:
            acc = acc * zc + c
        return acc
    zz = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(zz)
    for c in a.coeffs[::-1]:
        acc = acc * zz + c
    return acc


def circle_points(radius: float, samples: int) -> np.ndarray:
    """``radius * exp(2 pi i k / samples)`` for ``k = 0 .. samples - 1``."""
    k = np.arange(samples)
    return radius * np.exp(2j * np.pi * k / samples)


def sup_on_circle(a: TaylorSeries, radius: float, samples: int = DEFAULT_SAMPLES) -> float:
    """Largest sampled modulus on ``|z| = radius`` (a lower estimate of the sup)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    return float(np.max(np.abs(evaluate(a, circle_points(radius, samples)))))
