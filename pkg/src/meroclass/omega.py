"""Unit-bounded analytic functions omega on the disk and their primitives.

Three parameterizations are supported:

``constant``
    omega(z) = u with |u| <= 1.
``polynomial``
    omega(z) = sum b_k z**k with sum |b_k| <= 1 (an l1 sufficient condition).
``schur``
    The Schur recursion on parameters gamma_0 .. gamma_m with |gamma_j| <= 1::

        omega_m = gamma_m
        omega_j(z) = (gamma_j + z omega_{j+1}(z)) / (1 + conj(gamma_j) z omega_{j+1}(z))
        omega = omega_0

Every parameter box {|gamma_j| <= 1} lands in the Schur class, which is why
the coefficient search works in this chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidOmega
from .series import (DEFAULT_ORDER, DEFAULT_SAMPLES, Number, TaylorSeries,
                     antiderivative, as_complex, circle_points, evaluate, mul,
                     reciprocal)

VARIANTS = ("constant", "polynomial", "schur")
UNIT_SLACK = 1e-12
VALIDATION_RADII = (0.9, 0.99, 0.999)
TAIL_TOL = 1e-14
MAX_ADAPTIVE_ORDER = 1024


@dataclass(frozen=True)
class OmegaSpec:
    """A certified member of the Schur class in one of three charts."""

    variant: str
    data: tuple

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidOmega(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        try:
            data = tuple(as_complex(v) for v in self.data)
        except (TypeError, ValueError) as exc:
            raise InvalidOmega(f"bad omega data: {exc}") from None
        if not data:
            raise InvalidOmega("omega data must be non-empty")
        if self.variant == "constant" and len(data) != 1:
            raise InvalidOmega("constant omega takes exactly one value")
        object.__setattr__(self, "data", data)
        measure = self.invariant_value
        if measure > 1.0 + UNIT_SLACK:
            raise InvalidOmega(
                f"{self.variant} omega violates its unit bound ({measure:.6g} > 1)")

    @classmethod
    def constant(cls, u: Number) -> "OmegaSpec":
        return cls("constant", (u,))

    @classmethod
    def polynomial(cls, b: Sequence[Number]) -> "OmegaSpec":
        return cls("polynomial", tuple(b))

    @classmethod
    def schur(cls, gammas: Sequence[Number]) -> "OmegaSpec":
        return cls("schur", tuple(gammas))

    @property
    def invariant_value(self) -> float:
        """|u|, sum |b_k| or max |gamma_j|, whichever the variant constrains."""
        mods = [abs(v) for v in self.data]
        if self.variant == "polynomial":
            return float(sum(mods))
        return float(max(mods))

    def __call__(self, z):
        """Evaluate omega directly (no truncation) at a scalar or array."""
        zz = np.asarray(z, dtype=np.complex128)
        if self.variant == "constant":
            out = np.full_like(zz, self.data[0])
        elif self.variant == "polynomial":
            out = np.zeros_like(zz)
            for b in reversed(self.data):
                out = out * zz + b
        else:
            gammas = _active(self.data)
            out = np.full_like(zz, gammas[-1])
            for g in reversed(gammas[:-1]):
                t = zz * out
                out = (g + t) / (1.0 + np.conj(g) * t)
        return complex(out) if np.ndim(out) == 0 else out

    def to_json(self) -> dict:
        return {"variant": self.variant, "data": [[v.real, v.imag] for v in self.data]}

    @classmethod
    def from_json(cls, obj: dict) -> "OmegaSpec":
        try:
            variant = obj["variant"]
            data = [complex(float(re), float(im)) for re, im in obj["data"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidOmega(f"malformed omega JSON: {exc}") from None
        return cls(variant, tuple(data))


@dataclass(frozen=True)
class ValidationReport:
    variant: str
    invariant_value: float
    estimated_sup: float
    radii: tuple
    samples: int
    valid: bool = True


@dataclass(frozen=True)
class PrimitivePair:
    """omega to order N together with W(z) = integral of omega from 0 to z (order N + 1)."""

    omega_series: TaylorSeries
    primitive_series: TaylorSeries


def validate(spec: OmegaSpec, radii: Sequence[float] = VALIDATION_RADII,
             samples: int = DEFAULT_SAMPLES) -> ValidationReport:
    """Re-check the variant invariant and estimate sup |omega| near the boundary.

    Raises
    ------
    InvalidOmega
        If the invariant fails.
    """
    if not isinstance(spec, OmegaSpec):
        raise InvalidOmega(f"expected an OmegaSpec, got {type(spec).__name__}")
    measure = spec.invariant_value
    if measure > 1.0 + UNIT_SLACK:
        raise InvalidOmega(f"{spec.variant} omega violates its unit bound ({measure:.6g} > 1)")
    sup = max(float(np.max(np.abs(spec(circle_points(r, samples))))) for r in radii)
    return ValidationReport(spec.variant, measure, sup, tuple(radii), samples)


def _active(gammas: tuple) -> tuple:
    # a unimodular parameter ends the recursion: that layer is the constant itself
    for j, g in enumerate(gammas):
        if abs(g) >= 1.0:
            return gammas[: j + 1]
    return gammas


def _schur_series(gammas: tuple, order: int) -> TaylorSeries:
    gammas = _active(gammas)
    w = TaylorSeries.constant(gammas[-1], order)
    one = TaylorSeries.constant(1.0, order)
    for g in reversed(gammas[:-1]):
        t = w.shift(1).truncate(order)
        num = TaylorSeries.constant(g, order) + t
        den = one + t.scale(np.conj(g))
        w = mul(num, reciprocal(den, order), order)
    return w


def omega_series(spec: OmegaSpec, order: int = DEFAULT_ORDER) -> TaylorSeries:
    if spec.variant == "constant":
        return TaylorSeries.constant(spec.data[0], order)
    if spec.variant == "polynomial":
        return TaylorSeries.from_coeffs(spec.data, order)
    return _schur_series(spec.data, order)


def _sampled_coeffs(spec: OmegaSpec, order: int, tol: float, cap: int) -> np.ndarray:
    # Taylor coefficients from samples on the unit circle.  The upper half of the
    # spectrum holds the aliased tail; the sample count doubles until it is below tol.
    m = 1 << max(3, int(2 * (order + 1) - 1).bit_length())
    while True:
        co = np.fft.fft(spec(circle_points(1.0, m))) / m
        tail = float(np.max(np.abs(co[m // 2:])))
        if tail <= tol or m >= 2 * cap:
            return co[: m // 2]
        m *= 2


def sampled_series(spec: OmegaSpec, order: int = DEFAULT_ORDER, tol: float = TAIL_TOL,
                   cap: int = MAX_ADAPTIVE_ORDER) -> TaylorSeries:
    """Omega to at least ``order``, extended until the neglected tail is below ``tol``.

    Schur-parameter specs are sampled on the unit circle and transformed by
    FFT, which is much cheaper than series division at high order; the
    coefficients agree with :func:`omega_series` up to the aliased tail.
    The returned order is ``max(order, n)`` with ``n <= cap``.
    """
    if spec.variant != "schur":
        return omega_series(spec, order)
    co = _sampled_coeffs(spec, order, tol, cap)
    return TaylorSeries.from_coeffs(co, max(order, co.size - 1))


def adequate_order(spec: OmegaSpec, order: int = DEFAULT_ORDER, tol: float = TAIL_TOL,
                   cap: int = MAX_ADAPTIVE_ORDER) -> int:
    """Smallest order ``>= order`` (up to ``cap``) beyond which omega's coefficients are below ``tol``.

    Schur parameters close to the unit circle give slowly decaying series;
    truncating them early moves the zeros of the denominator.
    """
    if spec.variant != "schur":
        return order
    co = _sampled_coeffs(spec, order, tol, cap)
    big = np.nonzero(np.abs(co) > tol)[0]
    last = int(big[-1]) + 1 if big.size else 0
    return int(min(max(order, last), cap))


def to_series(spec: OmegaSpec, order: int = DEFAULT_ORDER) -> PrimitivePair:
    """Expand omega to ``order`` and integrate it once."""
    if order < 0:
        raise ValueError("order must be non-negative")
    w = omega_series(spec, order)
    return PrimitivePair(w, antiderivative(w))


def primitive_difference(pair: PrimitivePair, z1: Number, z2: Number) -> complex:
    """The path integral of omega from ``z1`` to ``z2``, i.e. W(z2) - W(z1)."""
    z1, z2 = as_complex(z1), as_complex(z2)
    if abs(z1) > 1.0 + UNIT_SLACK or abs(z2) > 1.0 + UNIT_SLACK:
        raise DomainError("primitive_difference needs |z1|, |z2| <= 1")
    if z1 == z2:
        return 0j
    return evaluate(pair.primitive_series, z2) - evaluate(pair.primitive_series, z1)


def random_omega(rng: np.random.Generator, max_depth: int = 4) -> OmegaSpec:
    """Draw a random valid omega: mostly Schur parameters, sometimes the other charts.

    Schur parameters are uniform in the unit disk; the depth is uniform in
    ``0 .. max_depth``.
    """
    kind = rng.choice(4)
    if kind == 0:
        return OmegaSpec.constant(_disk_point(rng))
    if kind == 1:
        n = int(rng.integers(1, 6))
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = b / np.sum(np.abs(b)) * rng.uniform(0.0, 1.0)
        return OmegaSpec.polynomial(b)
    depth = int(rng.integers(0, max_depth + 1))
    return OmegaSpec.schur([_disk_point(rng) for _ in range(depth + 1)])


def _disk_point(rng: np.random.Generator, radius: float = 1.0) -> complex:
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))
