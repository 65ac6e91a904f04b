"""Functions of the class built from (c, lambda, omega).

The class consists of meromorphic ``f`` with ``f(0) = 0``, ``f'(0) = 1`` and
``|z/f - z (z/f)' - 1| < lambda`` on the unit disk.  Every such ``f`` is
``z / A(z)`` with the denominator

    A(z) = 1 + c z - lambda z W(z),    W(z) = integral of omega from 0 to z,

where ``omega`` is a Schur-class function.  The map from ``(c, lambda, omega)``
to ``f`` is what :class:`ClassFunction` implements.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import BadNormalization, DomainError, InsufficientOrder, OrderExceeded
from .omega import OmegaSpec, PrimitivePair, random_omega, to_series
from .series import (DEFAULT_ORDER, DEFAULT_SAMPLES, TaylorSeries,
                     as_complex, reciprocal, sup_on_circle)

MEMBERSHIP_RADII = (0.9, 0.99, 0.999)
MEMBERSHIP_MARGIN = 1e-6
MIN_VERDICT_ORDER = 8
NORMALIZATION_TOL = 1e-12
DEGENERATE_WINDOW = 1e-12


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not (0.0 < lam <= 1.0):
        raise DomainError(f"lambda must lie in (0, 1], got {lam}")
    return lam


def check_radius_p(p: float) -> float:
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"p must lie in (0, 1], got {p}")
    return p


@dataclass(frozen=True)
class ClassFunction:
    """``f = z / (1 + c z - lam z W(z))`` truncated at order ``order``."""

    c: complex
    lam: float
    omega: OmegaSpec
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        object.__setattr__(self, "c", as_complex(self.c))
        object.__setattr__(self, "lam", check_lambda(self.lam))
        if not isinstance(self.omega, OmegaSpec):
            raise TypeError("omega must be an OmegaSpec")
        if int(self.order) < 2:
            raise ValueError("order must be at least 2")
        object.__setattr__(self, "order", int(self.order))

    @cached_property
    def primitive(self) -> PrimitivePair:
        return to_series(self.omega, self.order)

    @cached_property
    def denominator(self) -> TaylorSeries:
        return denominator_series(self)

    @cached_property
    def f(self) -> TaylorSeries:
        return f_series(self)

    def with_order(self, order: int) -> "ClassFunction":
        return ClassFunction(self.c, self.lam, self.omega, order)

    def __call__(self, z):
        """Evaluate ``f`` as ``z / A(z)`` (accurate up to the pole, unlike the Taylor series)."""
        zz = np.asarray(z, dtype=np.complex128)
        out = zz / self.denominator(zz)
        return complex(out) if np.ndim(out) == 0 else out

    def to_json(self) -> dict:
        return {
            "c": [self.c.real, self.c.imag],
            "lambda": self.lam,
            "omega": self.omega.to_json(),
            "order": self.order,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ClassFunction":
        try:
            re, im = obj["c"]
            return cls(complex(float(re), float(im)), float(obj["lambda"]),
                       OmegaSpec.from_json(obj["omega"]), int(obj.get("order", DEFAULT_ORDER)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise ValueError(f"malformed ClassFunction JSON: {exc}") from None


class Verdict(str, enum.Enum):
    MEMBER = "Member"
    NOT_MEMBER = "NotMember"
    BORDERLINE = "Borderline"


@dataclass(frozen=True)
class MembershipReport:
    residual_sup: float
    lambda_target: float
    verdict: Verdict
    radii: tuple = MEMBERSHIP_RADII
    per_radius: tuple = ()
    margin: float = MEMBERSHIP_MARGIN

    def to_json(self) -> dict:
        return {
            "residual_sup": self.residual_sup,
            "lambda_target": self.lambda_target,
            "verdict": self.verdict.value,
            "radii": list(self.radii),
            "per_radius": list(self.per_radius),
            "margin": self.margin,
        }


def denominator_series(cf: ClassFunction) -> TaylorSeries:
    """``A(z) = 1 + c z - lam z W(z)`` to order ``cf.order``."""
    return denominator_from_omega(cf.c, cf.lam, cf.primitive.omega_series, cf.order)


def denominator_from_omega(c: complex, lam: float, omega: TaylorSeries, order: int) -> TaylorSeries:
    """``1 + c z - lam z W(z)`` to ``order`` from omega's coefficients (``W_k = omega_{k-1} / k``)."""
    coeffs = np.zeros(order + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1] = c
    k = np.arange(1, order)
    coeffs[2:] = -lam * _fit_to(omega.coeffs, order - 1) / k
    return TaylorSeries(coeffs)


def _fit_to(arr: np.ndarray, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=np.complex128)
    n = min(size, arr.size)
    out[:n] = arr[:n]
    return out


def f_series(cf: ClassFunction) -> TaylorSeries:
    """Taylor coefficients of ``f = z / A`` up to ``z**order``."""
    inv = reciprocal(cf.denominator, cf.order - 1)
    return inv.shift(1)


def coefficient(cf: ClassFunction, n: int) -> complex:
    """The Taylor coefficient ``a_n`` of ``f``; ``a_1 = 1`` and ``a_2 = -c``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cf.order:
        raise OrderExceeded(f"a_{n} requested but the truncation order is {cf.order}")
    return cf.f[n]


def residual_series(f: TaylorSeries) -> TaylorSeries:
    """``T = g - z g' - 1`` with ``g = z / f``, for normalized Taylor data ``f``.

    Coefficient-wise ``T_k = (1 - k) g_k`` for ``k >= 1`` and ``T_0 = g_0 - 1``.
    """
    if f.order < 2:
        raise InsufficientOrder("need at least the coefficients of z and z**2")
    if abs(f[0]) > NORMALIZATION_TOL or abs(f[1] - 1.0) > NORMALIZATION_TOL:
        raise BadNormalization(f"expected f(0) = 0 and f'(0) = 1, got a0={f[0]!r}, a1={f[1]!r}")
    g = reciprocal(TaylorSeries(f.coeffs[1:]), f.order - 1)
    k = np.arange(g.order + 1)
    t = (1 - k) * g.coeffs
    t[0] -= 1.0
    return TaylorSeries(t)


def membership_check(f: TaylorSeries, lambda_target: float,
                     radii: Sequence[float] = MEMBERSHIP_RADII,
                     samples: int = DEFAULT_SAMPLES,
                     margin: float = MEMBERSHIP_MARGIN) -> MembershipReport:
    """Estimate sup |z/f - z (z/f)' - 1| on the given circles and compare with lambda.

    Returns ``Member`` only when the estimate is below ``lambda_target - margin``;
    within ``margin`` of the target the verdict is ``Borderline``.
    """
    lam = check_lambda(lambda_target)
    if f.order < MIN_VERDICT_ORDER:
        raise InsufficientOrder(f"membership needs truncation order >= {MIN_VERDICT_ORDER}")
    t = residual_series(f)
    per_radius = tuple(sup_on_circle(t, r, samples) for r in radii)
    sup = max(per_radius)
    if not math.isfinite(sup):
        sup = math.inf
    if sup < lam - margin:
        verdict = Verdict.MEMBER
    elif sup > lam + margin:
        verdict = Verdict.NOT_MEMBER
    else:
        verdict = Verdict.BORDERLINE
    return MembershipReport(sup, lam, verdict, tuple(radii), per_radius, margin)


def residual_identity_series(cf: ClassFunction) -> TaylorSeries:
    """``T`` recomputed from ``f``; algebraically it must equal ``lam z**2 omega``."""
    return residual_series(cf.f)


def expected_residual(cf: ClassFunction) -> TaylorSeries:
    """``lam z**2 omega`` truncated like :func:`residual_identity_series`."""
    w = cf.primitive.omega_series
    return w.scale(cf.lam).shift(2).truncate(cf.order - 1)


def extremal(lam: float, p: float, theta: float, order: int = DEFAULT_ORDER) -> ClassFunction:
    """The equality case of the second-coefficient bound.

    ``f(z) = z / ((1 - e^{i theta} z / p)(1 - lam p e^{i theta} z))``, i.e.
    ``c = -((1 + lam p^2) / p) e^{i theta}`` and ``omega = -e^{2 i theta}``.
    """
    lam = check_lambda(lam)
    p = check_radius_p(p)
    theta = float(theta)
    if not (0.0 <= theta < 2.0 * math.pi) or not math.isfinite(theta):
        raise DomainError(f"theta must lie in [0, 2 pi), got {theta}")
    rot = cmath.exp(1j * theta)
    c = -((1.0 + lam * p * p) / p) * rot
    return ClassFunction(c, lam, OmegaSpec.constant(-(rot * rot)), order)


def extremal_coefficient(n: int, lam: float, p: float) -> float:
    """``(1 - lam^n p^{2n}) / (p^{n-1} (1 - lam p^2))``, with its limit ``n / p^{n-1}`` at ``lam p^2 = 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = check_lambda(lam)
    p = check_radius_p(p)
    x = lam * p * p
    if abs(x - 1.0) < DEGENERATE_WINDOW:
        return n / p ** (n - 1)
    # geometric sum form: no cancellation as x -> 1
    return math.fsum(x ** k for k in range(n)) / p ** (n - 1)


def random_class_function(rng: np.random.Generator, lam: float | None = None,
                          c_radius: float = 2.0, c_min: float = 0.0,
                          max_depth: int = 4, order: int = DEFAULT_ORDER,
                          lambdas: Sequence[float] = (0.25, 0.5, 1.0)) -> ClassFunction:
    """Random valid instance: ``|c|`` uniform in ``[c_min, c_radius]``, random phase, random omega."""
    if lam is None:
        lam = float(rng.choice(np.asarray(lambdas)))
    mod = rng.uniform(c_min, c_radius)
    c = complex(mod * np.exp(2j * np.pi * rng.uniform()))
    return ClassFunction(c, lam, random_omega(rng, max_depth), order)
