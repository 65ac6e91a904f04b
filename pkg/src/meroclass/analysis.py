"""Pole localization, univalence sampling and the closed-disk checks.

Poles of ``f = z / A`` are zeros of the denominator ``A``.  Two independent
routes locate them:

* :func:`fixed_point_pole` iterates ``F(z) = (1 - lam z W(z)) / a_2``, whose
  fixed points are exactly the zeros of ``A`` (``a_2 = -c``);
* :func:`newton_poles` counts zeros with the argument principle and refines
  them by damped Newton iteration.

Functions here accept either a :class:`ClassFunction` or normalized Taylor
data ``f`` (a :class:`TaylorSeries`); in the latter case the denominator is
recovered as ``z / f``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .classfn import ClassFunction, check_lambda, check_radius_p
from .errors import (BadNormalization, BoundaryZero, DomainError, NoConvergence,
                     RootCountMismatch, ZeroA2)
from .series import (DEFAULT_SAMPLES, TaylorSeries, circle_points, derivative,
                     evaluate, reciprocal)

FunctionLike = Union[ClassFunction, TaylorSeries]

FIXED_POINT_MAX_ITERS = 100_000
FIXED_POINT_TOL = 1e-13
ROOT_RESIDUAL = 1e-9
NEAR_ROOT_RESIDUAL = 1e-6
BOUNDARY_ZERO = 1e-8
WINDING_SLACK = 0.01
MAX_RELATIVE_CHORD = 0.5
NEWTON_MAX_ITERS = 60
MERGE_DISTANCE = 1e-7
SIMPLE_ROOT_DERIVATIVE = 1e-8
MAX_COUNT_RADIUS = 1.0 - 1e-6
RADIUS_PERTURBATION = 1e-4
CIRCLE_TOL = 1e-9
MIN_SEPARATION = 1e-3
COLLISION_TOL = 1e-12

FIXED_POINT = "FixedPoint"
NEWTON = "Newton"
BOTH = "Both"


def denominator_of(obj: FunctionLike) -> TaylorSeries:
    """``A = z / f`` for a class function or for normalized Taylor data ``f``."""
    if isinstance(obj, ClassFunction):
        return obj.denominator
    if isinstance(obj, TaylorSeries):
        if abs(obj[0]) > 1e-12 or abs(obj[1] - 1.0) > 1e-12:
            raise BadNormalization("Taylor data must satisfy f(0) = 0, f'(0) = 1")
        return reciprocal(TaylorSeries(obj.coeffs[1:]), obj.order - 1)
    raise TypeError(f"expected ClassFunction or TaylorSeries, got {type(obj).__name__}")


def scaled_primitive_of(a: TaylorSeries) -> TaylorSeries:
    """``lam W`` read off the denominator: ``A = 1 + c z - z (lam W)``."""
    coeffs = np.zeros(max(a.order, 1), dtype=np.complex128)
    coeffs[1:] = -a.coeffs[2:]
    return TaylorSeries(coeffs)


@dataclass(frozen=True)
class Pole:
    location: complex
    method: str
    residual: float
    derivative_modulus: float

    @property
    def simple(self) -> bool:
        return self.derivative_modulus > SIMPLE_ROOT_DERIVATIVE

    def to_json(self) -> dict:
        return {
            "location": [self.location.real, self.location.imag],
            "modulus": abs(self.location),
            "method": self.method,
            "residual": self.residual,
            "derivative_modulus": self.derivative_modulus,
            "simple": self.simple,
        }


@dataclass(frozen=True)
class PoleReport:
    poles: tuple
    search_radius: float
    contraction_constant: float | None = None
    winding_number: float | None = None
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "poles": [p.to_json() for p in self.poles],
            "search_radius": self.search_radius,
            "contraction_constant": self.contraction_constant,
            "winding_number": self.winding_number,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class UnivalenceReport:
    pairs_tested: int
    min_separation_ratio: float
    violations: list = field(default_factory=list)
    region_radius: float = 0.0
    max_identity_error: float = 0.0

    def to_json(self) -> dict:
        return {
            "pairs_tested": self.pairs_tested,
            "min_separation_ratio": self.min_separation_ratio,
            "violations": [[[a.real, a.imag], [b.real, b.imag]] for a, b in self.violations],
            "region_radius": self.region_radius,
            "max_identity_error": self.max_identity_error,
        }


@dataclass(frozen=True)
class Arc:
    """Angular interval ``[start, end]`` on the unit circle (radians, may wrap past 2 pi)."""

    start: float
    end: float
    min_modulus: float

    @property
    def center(self) -> float:
        return ((self.start + self.end) / 2.0) % (2.0 * math.pi)

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "center": self.center,
                "min_modulus": self.min_modulus}


# --------------------------------------------------------------------------
# fixed-point route

def contraction_constant(cf: ClassFunction, p: float) -> float:
    """``2 lam r^2 p^2 / (1 + lam p^2)`` with ``|a_2| = (1 + lam p^2) / (p r)``.

    Below 1 exactly when ``r < 1 / sqrt(2 lam p^2 / (1 + lam p^2))``; for
    ``r < 1`` it certifies that ``F`` contracts the disk ``|z| <= p r``.
    """
    a2 = abs(cf.c)
    if a2 == 0:
        raise ZeroA2("a_2 = 0: the fixed-point map is undefined")
    lam = cf.lam
    r = (1.0 + lam * p * p) / (p * a2)
    return 2.0 * lam * r * r * p * p / (1.0 + lam * p * p)


def fixed_point_pole(cf: ClassFunction, p: float = 1.0,
                     max_iters: int = FIXED_POINT_MAX_ITERS,
                     tol: float = FIXED_POINT_TOL) -> complex:
    """Iterate ``z -> (1 - lam z W(z)) / a_2`` from 0 and return the limit, a zero of ``A``.

    Raises
    ------
    ZeroA2
        If ``c = 0``.
    NoConvergence
        If an iterate leaves ``|z| <= p``, the iteration budget runs out, or
        the limit fails the residual check.
    """
    p = check_radius_p(p)
    a2 = -cf.c
    if a2 == 0:
        raise ZeroA2("c = 0 gives a_2 = 0; the fixed-point map is undefined")
    a = cf.denominator
    lam_w = scaled_primitive_of(a)
    z = 0j
    for _ in range(max_iters):
        z_next = (1.0 - z * evaluate(lam_w, z)) / a2
        if abs(z_next) > p + CIRCLE_TOL:
            raise NoConvergence(f"iterate {z_next:.6g} left the disk |z| <= {p}")
        if abs(z_next - z) < tol:
            z = z_next
            break
        z = z_next
    else:
        raise NoConvergence(f"no convergence after {max_iters} iterations")
    res = abs(evaluate(a, z))
    if res > ROOT_RESIDUAL:
        raise NoConvergence(f"fixed point has residual |A| = {res:.3g}")
    return z


# --------------------------------------------------------------------------
# argument principle + Newton route

def winding_number(values: np.ndarray) -> float:
    """Total phase change of a closed sampled curve divided by 2 pi."""
    incr = np.angle(np.roll(values, -1) / values)
    return float(np.sum(incr) / (2.0 * np.pi))


def _refined_increment(a: TaylorSeries, radius: float, t0: float, t1: float,
                       v0: complex, v1: complex, depth: int = 0) -> float:
    # bisect a step until its chord is short relative to |A| at both ends
    d = float(np.angle(v1 / v0))
    if _resolved(v0, v1) or depth >= 48:
        return d
    tm = 0.5 * (t0 + t1)
    vm = evaluate(a, radius * complex(math.cos(tm), math.sin(tm)))
    if abs(vm) < BOUNDARY_ZERO:
        raise BoundaryZero(f"|A| = {abs(vm):.3g} on the circle |z| = {radius}")
    return (_refined_increment(a, radius, t0, tm, v0, vm, depth + 1)
            + _refined_increment(a, radius, tm, t1, vm, v1, depth + 1))


def _resolved(v0: complex, v1: complex) -> bool:
    return abs(v1 - v0) <= MAX_RELATIVE_CHORD * min(abs(v0), abs(v1))


def contour_winding(a: TaylorSeries, radius: float, samples: int = DEFAULT_SAMPLES):
    """Winding number of ``A`` around 0 on ``|z| = radius``, with the sampled values.

    Phase increments are accumulated sample to sample (trapezoidal phase
    accumulation).  A step whose chord ``|A(z_{k+1}) - A(z_k)|`` exceeds half
    of ``min |A|`` at its ends is bisected until it does not, so a zero just
    off the contour cannot alias the count by a multiple of 2 pi.
    """
    zs = circle_points(radius, samples)
    vals = evaluate(a, zs)
    low = float(np.min(np.abs(vals)))
    if low < BOUNDARY_ZERO:
        raise BoundaryZero(f"|A| = {low:.3g} on the circle |z| = {radius}")
    nxt = np.roll(vals, -1)
    incr = np.angle(nxt / vals)
    step = 2.0 * np.pi / samples
    coarse = (np.abs(nxt - vals) > MAX_RELATIVE_CHORD * np.minimum(np.abs(vals), np.abs(nxt)))
    for k in np.nonzero(coarse)[0]:
        incr[k] = _refined_increment(a, radius, k * step, (k + 1) * step,
                                     complex(vals[k]), complex(nxt[k]))
    return float(np.sum(incr) / (2.0 * np.pi)), zs, vals


def _newton(a: TaylorSeries, da: TaylorSeries, z: complex,
            max_iters: int = NEWTON_MAX_ITERS) -> tuple[complex, float]:
    fz = evaluate(a, z)
    for _ in range(max_iters):
        if fz == 0:
            break
        d = evaluate(da, z)
        if d == 0:
            break
        step = fz / d
        if not cmath.isfinite(step):
            break
        t = 1.0
        zn, fn = z - step, evaluate(a, z - step)
        while abs(fn) >= abs(fz) and t > 1e-10:
            t *= 0.5
            zn = z - t * step
            fn = evaluate(a, zn)
        if abs(fn) >= abs(fz):
            break
        z, fz = zn, fn
        if abs(t * step) < 1e-15 * max(1.0, abs(z)):
            break
    return z, abs(fz)


def _grid_seeds(radius: float) -> list[complex]:
    seeds = [0j]
    for frac in (0.3, 0.6, 0.85, 0.97):
        for k in range(12):
            seeds.append(radius * frac * np.exp(2j * np.pi * (k + 0.5 * frac) / 12))
    return [complex(s) for s in seeds]


def _moment_seeds(zs: np.ndarray, a_vals: np.ndarray, da_vals: np.ndarray,
                  count: int) -> list[complex]:
    # power sums s_m = (1/2 pi i) contour integral of z^m A'/A dz, trapezoidal rule
    ratio = da_vals / a_vals
    s = [complex(np.mean(zs ** (m + 1) * ratio)) for m in range(1, count + 1)]
    e = [1.0 + 0j]
    for k in range(1, count + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    poly = [(-1) ** k * e[k] for k in range(count + 1)]
    return [complex(r) for r in np.roots(poly)]


def _merge(roots: list[complex], candidate: complex) -> bool:
    return all(abs(candidate - r) > MERGE_DISTANCE for r in roots)


def newton_poles(obj: FunctionLike, radius: float = 0.99,
                 samples: int = DEFAULT_SAMPLES) -> PoleReport:
    """Zeros of the denominator inside ``|z| < radius``.

    The number of zeros comes from the winding number of ``A`` on the circle;
    each zero is then refined by damped Newton iteration from an interior
    grid of seeds (falling back to seeds from contour moments).

    Raises
    ------
    BoundaryZero
        If ``|A| < 1e-8`` on the circle or the winding number is not close to
        an integer.
    RootCountMismatch
        If refinement does not recover the counted number of zeros.
    """
    if not (0.0 < radius < 1.0):
        raise DomainError(f"radius must lie in (0, 1), got {radius}")
    a = denominator_of(obj)
    da = derivative(a)
    w, zs, vals = contour_winding(a, radius, samples)
    count = int(round(w))
    if abs(w - count) > WINDING_SLACK or count < 0:
        raise BoundaryZero(f"winding number {w:.4f} is not an integer")
    roots: list[complex] = []
    if count:
        for seeds in (lambda: _grid_seeds(radius),
                      lambda: _moment_seeds(zs, vals, evaluate(da, zs), count)):
            for seed in seeds():
                z, res = _newton(a, da, seed)
                if abs(z) < radius and res <= ROOT_RESIDUAL and _merge(roots, z):
                    roots.append(z)
                if len(roots) == count:
                    break
            if len(roots) == count:
                break
        if len(roots) != count:
            raise RootCountMismatch(
                f"argument principle counts {count} zeros, refinement found {len(roots)}")
    roots.sort(key=lambda z: (abs(z), math.atan2(z.imag, z.real)))
    poles = tuple(Pole(z, NEWTON, abs(evaluate(a, z)), abs(evaluate(da, z))) for z in roots)
    return PoleReport(poles, radius, winding_number=w)


def largest_pole_free_radius(obj: FunctionLike, radius: float = MAX_COUNT_RADIUS,
                             attempts: int = 3) -> float:
    """Modulus of the innermost zero of ``A`` in the disk, or 1 if there is none.

    The counting circle starts just inside the unit circle and is pulled in
    by 1e-4 up to ``attempts`` times when a zero sits on it.
    """
    last = None
    for k in range(attempts + 1):
        try:
            report = newton_poles(obj, radius - k * RADIUS_PERTURBATION)
        except BoundaryZero as exc:
            last = exc
            continue
        if report.poles:
            return min(abs(p.location) for p in report.poles)
        return 1.0
    raise last


def poles_report(cf: ClassFunction, radius: float = 0.99) -> PoleReport:
    """Run both routes and merge them: ``Both`` where the fixed point matches a Newton root."""
    notes = []
    newton = newton_poles(cf, radius)
    poles = list(newton.poles)
    kappa = None
    try:
        z = fixed_point_pole(cf, radius)
    except (NoConvergence, ZeroA2) as exc:
        notes.append(f"fixed point: {type(exc).__name__}: {exc}; using Newton roots")
    else:
        kappa = contraction_constant(cf, radius)
        match = [i for i, p in enumerate(poles) if abs(p.location - z) <= ROOT_RESIDUAL]
        if match:
            i = match[0]
            poles[i] = Pole(poles[i].location, BOTH, poles[i].residual, poles[i].derivative_modulus)
            notes.append(f"fixed point agrees with Newton to {abs(poles[i].location - z):.3g}")
        else:
            a = cf.denominator
            poles.append(Pole(z, FIXED_POINT, abs(evaluate(a, z)), abs(evaluate(derivative(a), z))))
            notes.append("fixed point did not match any Newton root")
    return PoleReport(tuple(poles), radius, kappa, newton.winding_number, tuple(notes))


def innermost_zero_modulus(a: TaylorSeries, p: float, samples: int = 1024) -> float:
    """Smallest modulus of a zero of ``A`` in ``|z| <= p`` (``inf`` if there is none).

    A cheaper variant of the counting route used inside optimization loops.
    A coefficient bound certifies zero-freeness when it can; otherwise ``A``
    is sampled on ``|z| = p`` by FFT.  If the samples are too coarse to fix
    the winding number (a zero close to the contour), that zero is located
    by Newton's method and divided out before counting the rest.  Companion
    eigenvalues are the last resort, after two denser samplings.
    """
    coeffs = a.coeffs
    powers = p ** np.arange(coeffs.size)
    if float(np.abs(coeffs[1:]) @ powers[1:]) < abs(coeffs[0]) * (1.0 - 1e-12):
        return math.inf
    da = derivative(a)
    for m in (samples, 4 * samples, 16 * samples):
        found = _winding_route(a, da, p, m)
        if found is not None:
            return found
    return _companion_min_modulus(coeffs, p)


def _winding_route(a: TaylorSeries, da: TaylorSeries, p: float, samples: int) -> float | None:
    # None when this sampling density cannot settle the answer
    zs = circle_points(p, samples)
    vals = _fft_values(a, p, samples)
    w = _coarse_winding(vals)
    if w is None:
        return _deflate_near_contour(a, da, p, samples, zs, vals)
    count = int(round(w))
    if count <= 0:
        return math.inf
    if count == 1:
        ratio = _fft_values(da, p, samples) / vals
        seed = complex(np.mean(zs * zs * ratio))
        z, res = _newton(a, da, seed)
        if res <= ROOT_RESIDUAL and abs(z) <= p + CIRCLE_TOL:
            return abs(z)
    return _innermost_by_bisection(a, da, p, samples)


def _deflate_near_contour(a, da, p, samples, zs, vals, max_zeros: int = 8) -> float | None:
    # divide out zeros close to the contour one at a time until the rest can be counted
    found = []
    for _ in range(max_zeros):
        z, res = _newton(a, da, complex(zs[int(np.argmin(np.abs(vals)))]))
        if (res > ROOT_RESIDUAL or np.abs(zs - z).min() == 0.0
                or any(abs(z - f) <= 1e-12 for f in found)):
            return _near_contour(a, da, p, samples, z, res)
        found.append(z)
        vals = vals / (zs - z)
        rest = _coarse_winding(vals)
        if rest is None:
            continue
        inside = min((abs(f) for f in found if abs(f) <= p + CIRCLE_TOL), default=math.inf)
        if int(round(rest)) <= 0:
            return inside
        deeper = _innermost_by_bisection(a, da, min(inside, p) * (1.0 - 1e-6), samples)
        return None if deeper is None else min(deeper, inside)
    return None


def _near_contour(a: TaylorSeries, da: TaylorSeries, p: float, samples: int,
                  z: complex, res: float) -> float | None:
    # a zero sits on or next to |z| = p, possibly a multiple one; count on slightly smaller circles
    for shift in (1e-8, 1e-6, 1e-4):
        r = p * (1.0 - shift)
        w = _coarse_winding(_fft_values(a, r, samples))
        if w is None:
            continue
        if int(round(w)) >= 1:
            return _innermost_by_bisection(a, da, r, samples)
        if res <= NEAR_ROOT_RESIDUAL and abs(z) >= r:
            return abs(z) if abs(z) <= p + CIRCLE_TOL else math.inf
        return r
    return None


def _innermost_by_bisection(a: TaylorSeries, da: TaylorSeries, p: float,
                            samples: int, steps: int = 40) -> float | None:
    # shrink the counting circle onto the innermost zero, then polish by Newton
    lo, hi = 0.0, p
    w = _coarse_winding(_fft_values(a, p, samples))
    if w is not None and int(round(w)) <= 0:
        return math.inf
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        w = None
        for r in (mid, mid * (1.0 - 1e-7), mid * (1.0 + 1e-7)):
            w = _coarse_winding(_fft_values(a, r, samples))
            if w is not None:
                break
        if w is None:
            return None
        if int(round(w)) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-9 * p:
            break
    vals = _fft_values(a, hi, samples)
    seed = complex(circle_points(hi, samples)[int(np.argmin(np.abs(vals)))])
    z, res = _newton(a, da, seed)
    if res <= ROOT_RESIDUAL and lo - 1e-6 <= abs(z) <= hi + 1e-6:
        return min(abs(z), p)
    return hi


def _fft_values(a: TaylorSeries, radius: float, samples: int) -> np.ndarray:
    scaled = a.coeffs * radius ** np.arange(a.coeffs.size)
    if scaled.size > samples:
        folded = np.zeros(samples, dtype=np.complex128)
        np.add.at(folded, np.arange(scaled.size) % samples, scaled)
        scaled = folded
    return np.fft.ifft(scaled, n=samples) * samples


def _coarse_winding(vals: np.ndarray) -> float | None:
    # None when some step is too long to trust its phase increment
    mods = np.abs(vals)
    nxt = np.roll(vals, -1)
    if mods.min() < BOUNDARY_ZERO or np.any(
            np.abs(nxt - vals) > MAX_RELATIVE_CHORD * np.minimum(mods, np.roll(mods, -1))):
        return None
    return float(np.sum(np.angle(nxt / vals)) / (2.0 * np.pi))


def _companion_min_modulus(coeffs: np.ndarray, p: float) -> float:
    mags = np.abs(coeffs)
    keep = np.nonzero(mags > 1e-15 * mags.max())[0]
    deg = int(keep[-1]) if keep.size else 0
    if deg == 0:
        return math.inf
    roots = np.roots(coeffs[: deg + 1][::-1])
    inside = np.abs(roots)[np.abs(roots) <= p + CIRCLE_TOL]
    return float(inside.min()) if inside.size else math.inf


# --------------------------------------------------------------------------
# univalence and closed-disk checks

def _disk_samples(rng: np.random.Generator, n: int, radius: float,
                  boundary_fraction: float = 0.0) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(size=n))
    if boundary_fraction:
        r = np.where(rng.uniform(size=n) < boundary_fraction, radius, r)
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def sample_pairs(seed: int, count: int, radius: float,
                 boundary_fraction: float = 0.0,
                 min_separation: float = MIN_SEPARATION) -> tuple[np.ndarray, np.ndarray]:
    """Reproducible point pairs in ``|z| <= radius`` with ``|z1 - z2| >= min_separation``."""
    rng = np.random.default_rng(seed)
    z1s, z2s = [], []
    have = 0
    while have < count:
        block = max(count - have, 16)
        z1 = _disk_samples(rng, block, radius, boundary_fraction)
        z2 = _disk_samples(rng, block, radius, boundary_fraction)
        keep = np.abs(z1 - z2) >= min_separation
        z1s.append(z1[keep])
        z2s.append(z2[keep])
        have += int(np.count_nonzero(keep))
    return np.concatenate(z1s)[:count], np.concatenate(z2s)[:count]


def univalence_sample(obj: FunctionLike, pair_count: int = 2000, seed: int = 0,
                      region_radius: float | None = None) -> UnivalenceReport:
    """Look for collisions ``f(z1) = f(z2)`` among random pairs.

    ``f`` is evaluated as ``z / A(z)``.  Each difference quotient is also
    computed through the identity

        (f(z1) - f(z2)) / (z1 - z2)
            = (1 - lam z1 z2 (W(z2) - W(z1)) / (z1 - z2)) / (A(z1) A(z2)),

    and the largest disagreement is reported as ``max_identity_error``.
    By default the region is 0.999 times the pole-free radius.
    """
    a = denominator_of(obj)
    if region_radius is None:
        region_radius = 0.999 * largest_pole_free_radius(obj)
    lam_w = scaled_primitive_of(a)
    z1, z2 = sample_pairs(seed, pair_count, region_radius)
    a1, a2 = evaluate(a, z1), evaluate(a, z2)
    ok = (np.abs(a1) > 1e-12) & (np.abs(a2) > 1e-12)
    z1, z2, a1, a2 = z1[ok], z2[ok], a1[ok], a2[ok]
    f1, f2 = z1 / a1, z2 / a2
    dz = z1 - z2
    direct = (f1 - f2) / dz
    ident = (1.0 - z1 * z2 * (evaluate(lam_w, z2) - evaluate(lam_w, z1)) / dz) / (a1 * a2)
    ident_err = np.abs(direct - ident) / np.maximum(1.0, np.abs(direct))
    gap = np.abs(f1 - f2)
    scale = np.maximum(1.0, np.maximum(np.abs(f1), np.abs(f2)))
    bad = gap <= COLLISION_TOL * scale
    violations = [(complex(u), complex(v)) for u, v in zip(z1[bad], z2[bad])]
    return UnivalenceReport(
        pairs_tested=int(z1.size),
        min_separation_ratio=float(np.min(gap / np.abs(dz))) if z1.size else math.inf,
        violations=violations,
        region_radius=float(region_radius),
        max_identity_error=float(np.max(ident_err)) if z1.size else 0.0,
    )


def closed_disk_bound_check(cf: ClassFunction, pair_count: int = 10_000, seed: int = 0,
                            boundary_fraction: float = 0.25) -> float:
    """Minimum of ``|z1 A(z2) - z2 A(z1)| / |z1 - z2| - (1 - lam |z1 z2|)`` over closed-disk pairs.

    A quarter of the points (by default) lie exactly on ``|z| = 1``.  The
    minimum is non-negative for every member of the class.
    """
    a = cf.denominator
    z1, z2 = sample_pairs(seed, pair_count, 1.0, boundary_fraction)
    a1, a2 = evaluate(a, z1), evaluate(a, z2)
    lhs = np.abs(z1 * a2 - z2 * a1) / np.abs(z1 - z2)
    return float(np.min(lhs - (1.0 - cf.lam * np.abs(z1 * z2))))


def boundary_zero_scan(obj: FunctionLike, samples: int = DEFAULT_SAMPLES,
                       threshold: float = 1e-6) -> list[Arc]:
    """Arcs of the unit circle where ``|A| < threshold``.

    Runs of consecutive samples below the threshold form arcs.  Sampled local
    minima of ``|A|`` are additionally polished by Newton's method, so zeros
    that fall between grid points are still reported (as zero-width arcs).
    """
    a = denominator_of(obj)
    da = derivative(a)
    step = 2.0 * math.pi / samples
    zs = circle_points(1.0, samples)
    mods = np.abs(evaluate(a, zs))
    below = mods < threshold
    arcs: list[Arc] = []
    if below.all():
        return [Arc(0.0, 2.0 * math.pi, float(mods.min()))]
    # rotate so index 0 is above threshold, then runs cannot wrap
    shift = int(np.argmin(below))
    idx = (np.arange(samples) + shift) % samples
    k = 0
    while k < samples:
        if below[idx[k]]:
            j = k
            while j + 1 < samples and below[idx[j + 1]]:
                j += 1
            run = idx[k:j + 1]
            start = idx[k] * step
            end = start + (j - k) * step
            arcs.append(Arc(float(start), float(end), float(mods[run].min())))
            k = j + 1
        else:
            k += 1
    prev, nxt = np.roll(mods, 1), np.roll(mods, -1)
    minima = np.nonzero((mods <= prev) & (mods <= nxt) & ~below & (mods < 0.5))[0]
    for k in minima:
        z, _ = _newton(a, da, complex(zs[k]))
        if not math.isfinite(abs(z)) or abs(abs(z) - 1.0) > 0.5 * step:
            continue
        on_circle = z / abs(z)
        m = abs(evaluate(a, on_circle))
        if m < threshold:
            angle = math.atan2(on_circle.imag, on_circle.real) % (2.0 * math.pi)
            if all(_angular_distance(angle, arc) > step for arc in arcs):
                arcs.append(Arc(float(angle), float(angle), float(m)))
    arcs.sort(key=lambda arc: arc.start)
    return arcs


def _angular_distance(angle: float, arc: Arc) -> float:
    if arc.start <= angle <= arc.end:
        return 0.0
    d = min(abs(angle - arc.start), abs(angle - arc.end))
    return min(d, 2.0 * math.pi - d)


# --------------------------------------------------------------------------
# quadratic uniqueness

def quadratic_roots(lam: float, p: float, theta: float, phi) -> tuple[np.ndarray, np.ndarray]:
    """Both roots of ``1 - ((1 + lam p^2)/p) e^{i theta} z - lam e^{i phi} z^2`` (vectorized in phi)."""
    phi = np.asarray(phi, dtype=float)
    qa = -lam * np.exp(1j * phi)
    qb = -((1.0 + lam * p * p) / p) * np.exp(1j * theta) * np.ones_like(qa)
    disc = np.sqrt(qb * qb - 4.0 * qa)
    # pick the sign that avoids cancellation
    plus = np.abs(qb + disc) >= np.abs(qb - disc)
    q = -0.5 * np.where(plus, qb + disc, qb - disc)
    return q / qa, 1.0 / q


def quadratic_uniqueness_scan(lam: float, p: float, theta: float,
                              phi_samples: int = 3600, tol: float = CIRCLE_TOL) -> list[float]:
    """Grid values of ``phi`` for which the quadratic has no root in ``|z| < p``.

    A root whose modulus lies within ``tol`` of ``p`` counts as on the circle.
    """
    lam = check_lambda(lam)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    phis = 2.0 * np.pi * np.arange(phi_samples) / phi_samples
    r1, r2 = quadratic_roots(lam, p, theta, phis)
    interior = (np.abs(r1) < p - tol) | (np.abs(r2) < p - tol)
    return [float(v) for v in phis[~interior]]


def phi_clusters(phis: list[float], step: float) -> list[list[float]]:
    """Group sorted grid values into clusters of consecutive grid points (circularly)."""
    if not phis:
        return []
    vals = sorted(phis)
    clusters = [[vals[0]]]
    for v in vals[1:]:
        if v - clusters[-1][-1] <= 1.5 * step:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    if len(clusters) > 1 and (vals[0] + 2.0 * math.pi) - vals[-1] <= 1.5 * step:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters
