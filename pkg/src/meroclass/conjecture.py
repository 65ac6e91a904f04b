"""Coefficient bounds and a multistart search for functions that attain or beat them.

For ``f`` in the class with no pole in ``|z| < p`` the bound

    |a_n| <= (1 - lam^n p^{2n}) / (p^{n-1} (1 - lam p^2))

is proved for ``n = 2`` and open in general.  :func:`maximize_coefficient`
attacks it numerically: Nelder-Mead over ``(Re c, Im c, Re gamma_j, Im gamma_j)``
with Schur parameters ``gamma_j`` clamped to the closed unit disk, and
infeasible points (a pole intruding into ``|z| < p``) scored by minus the
intrusion depth.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from itertools import product
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .analysis import innermost_zero_modulus, largest_pole_free_radius
from .classfn import (ClassFunction, check_lambda, check_radius_p, denominator_from_omega,
                      extremal_coefficient)
from .errors import DomainError, MeroclassError
from .omega import MAX_ADAPTIVE_ORDER, OmegaSpec, adequate_order, sampled_series
from .series import DEFAULT_ORDER, reciprocal

FEASIBILITY_TOL = 1e-9
ATTAINED_MARGIN = 1e-3
VIOLATION_MARGIN = 1e-6

CSV_COLUMNS = ("n", "lambda", "p", "bound", "best_abs_an", "margin",
               "attained", "violated", "evals", "params_json")


def conjectured_bound(n: int, lam: float, p: float) -> float:
    """``(1 - lam^n p^{2n}) / (p^{n-1} (1 - lam p^2))``; the modulus of ``a_n`` of the extremal."""
    if n < 2:
        raise DomainError("the conjectured bound is stated for n >= 2")
    return extremal_coefficient(n, lam, p)


def conjecture1_bound(n: int, lam: float) -> float:
    """``1 + lam + ... + lam^{n-1}``."""
    if n < 2:
        raise DomainError("the bound is stated for n >= 2")
    lam = check_lambda(lam)
    return math.fsum(lam ** k for k in range(n))


@dataclass(frozen=True)
class Infeasible:
    """Objective value for parameters whose ``f`` has a pole in ``|z| < p``."""

    pole_free_radius: float
    p: float

    @property
    def intrusion(self) -> float:
        return self.p - self.pole_free_radius

    def __bool__(self):
        return False


@dataclass(frozen=True)
class SearchConfig:
    n: int = 2
    lam: float = 0.5
    p: float = 1.0
    restarts: int = 32
    schur_depth: int = 2
    seed: int = 0
    max_evals_per_restart: int = 2000
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("n must be >= 2")
        if self.n > self.order:
            raise DomainError("n must not exceed the truncation order")
        check_lambda(self.lam)
        check_radius_p(self.p)
        if self.restarts < 1 or self.max_evals_per_restart < 1:
            raise DomainError("restarts and max_evals_per_restart must be positive")
        if not (0 <= self.schur_depth <= 8):
            raise DomainError("schur_depth must lie in 0..8")


@dataclass(frozen=True)
class SearchParams:
    c: complex
    omega: OmegaSpec

    def to_json(self) -> dict:
        return {"c": [self.c.real, self.c.imag], "omega": self.omega.to_json()}

    def encode(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


@dataclass(frozen=True)
class SearchResult:
    n: int
    lam: float
    p: float
    best_abs_an: float
    best_params: SearchParams
    conjectured_bound: float
    margin: float
    attained: bool
    violated: bool
    evals: int

    def row(self) -> dict:
        return {
            "n": self.n,
            "lambda": _fmt(self.lam),
            "p": _fmt(self.p),
            "bound": _fmt(self.conjectured_bound),
            "best_abs_an": _fmt(self.best_abs_an),
            "margin": _fmt(self.margin),
            "attained": str(self.attained).lower(),
            "violated": str(self.violated).lower(),
            "evals": self.evals,
            "params_json": self.best_params.encode(),
        }

    def to_json(self) -> dict:
        return {
            "n": self.n, "lambda": self.lam, "p": self.p,
            "conjectured_bound": self.conjectured_bound,
            "best_abs_an": self.best_abs_an, "margin": self.margin,
            "attained": self.attained, "violated": self.violated,
            "evals": self.evals, "best_params": self.best_params.to_json(),
        }


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# --------------------------------------------------------------------------
# objective

def objective(params: SearchParams, config: SearchConfig, order: int | None = None):
    """``|a_n|`` if ``f`` has no pole in ``|z| < p`` (to 1e-9), else :class:`Infeasible`.

    The truncation order is raised until the omega series has converged.
    Feasibility needs both the argument-principle count and the direct
    innermost-zero search to agree; the latter also resolves zeros within
    1e-6 of the unit circle, which the counting circle cannot see.
    """
    n = adequate_order(params.omega, order or config.order, cap=MAX_ADAPTIVE_ORDER)
    cf = ClassFunction(params.c, config.lam, params.omega, n)
    p_star = min(largest_pole_free_radius(cf),
                 innermost_zero_modulus(cf.denominator, config.p, samples=4096))
    if p_star < config.p - FEASIBILITY_TOL:
        return Infeasible(p_star, config.p)
    return abs(cf.f[config.n])


def _clamp(g: complex) -> complex:
    m = abs(g)
    return g / m if m > 1.0 else g


def decode(x: np.ndarray, box: float) -> SearchParams:
    """Real search coordinates to ``(c, Schur parameters)``; ``c`` is clipped to the box."""
    c = complex(float(np.clip(x[0], -box, box)), float(np.clip(x[1], -box, box)))
    gammas = [_clamp(complex(x[k], x[k + 1])) for k in range(2, len(x), 2)]
    return SearchParams(c, OmegaSpec.schur(gammas))


class _Scorer:
    """Fast objective for the optimizer: same value as :func:`objective`, cheaper pole test.

    Omega comes from :func:`sampled_series`, so the truncation order grows
    with the Schur parameters instead of letting a truncated tail hide a pole.
    """

    def __init__(self, config: SearchConfig, box: float):
        self.config = config
        self.box = box
        self.evals = 0

    def value(self, params: SearchParams) -> float:
        self.evals += 1
        cfg = self.config
        w = sampled_series(params.omega, cfg.order)
        a = denominator_from_omega(params.c, cfg.lam, w, w.order + 1)
        m = innermost_zero_modulus(a, cfg.p)
        if m < cfg.p - FEASIBILITY_TOL:
            return -(cfg.p - m)
        inv = reciprocal(a, cfg.n - 1)
        return abs(inv[cfg.n - 1])

    def __call__(self, x: np.ndarray) -> float:
        return -self.value(decode(x, self.box))


def _initial_point(rng: np.random.Generator, depth: int, bound: float) -> np.ndarray:
    c = bound * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
    x = [c.real, c.imag]
    for _ in range(depth + 1):
        g = math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        x += [g.real, g.imag]
    return np.array(x)


def _run_restart(config: SearchConfig, seq: np.random.SeedSequence):
    bound = conjectured_bound(config.n, config.lam, config.p)
    box = 2.0 * bound
    scorer = _Scorer(config, box)
    rng = np.random.default_rng(seq)
    x = _initial_point(rng, config.schur_depth, bound)
    best = scorer(x)
    step = 0.25
    # restarted Nelder-Mead from the incumbent until the budget is spent or progress stops
    while scorer.evals < config.max_evals_per_restart:
        budget = config.max_evals_per_restart - scorer.evals
        simplex = np.vstack([x] + [x + step * e for e in np.eye(x.size)])
        res = minimize(scorer, x, method="Nelder-Mead",
                       options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-13,
                                "initial_simplex": simplex, "adaptive": x.size > 4})
        improved = res.fun < best - 1e-12
        if res.fun <= best:
            x, best = res.x, float(res.fun)
        if not improved:
            break
        step = max(step * 0.25, 1e-6)
    params = decode(x, box)
    return -best, params, scorer.evals


def canonicalize(params: SearchParams, lam: float, n: int, order: int = DEFAULT_ORDER) -> SearchParams:
    """Rotate ``f`` to ``e^{-i t} f(e^{i t} z)`` so that ``a_n`` is real and non-negative."""
    cf = ClassFunction(params.c, lam, params.omega, max(order, n))
    an = cf.f[n]
    if an == 0:
        return params
    t = -cmath.phase(an) / (n - 1)
    rot = cmath.exp(1j * t)
    if params.omega.variant == "schur":
        gammas = [g * rot ** (j + 2) for j, g in enumerate(params.omega.data)]
        omega = OmegaSpec.schur([_clamp(g) for g in gammas])
    elif params.omega.variant == "constant":
        omega = OmegaSpec.constant(_clamp(params.omega.data[0] * rot * rot))
    else:
        omega = OmegaSpec.polynomial([b * rot ** (k + 2) for k, b in enumerate(params.omega.data)])
    return SearchParams(params.c * rot, omega)


def _worker_count(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("MEROCLASS_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def maximize_coefficient(config: SearchConfig, workers: int | None = None) -> SearchResult:
    """Multistart search for the largest ``|a_n|`` over the feasible class.

    Each restart owns a child of ``SeedSequence(config.seed)``; the winner
    is the best value with ties broken by the canonical parameter encoding,
    so the result does not depend on ``workers``.  The winner is re-checked
    at twice the truncation order; if it fails there the next candidate is
    used.
    """
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    nworkers = min(_worker_count(workers), config.restarts)
    if nworkers > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            runs = list(pool.map(_run_restart, [config] * config.restarts, children))
    else:
        runs = [_run_restart(config, seq) for seq in children]
    evals = sum(r[2] for r in runs)
    candidates = []
    for value, params, _ in runs:
        canon = canonicalize(params, config.lam, config.n, config.order)
        candidates.append((-value, canon.encode(), canon))
    candidates.sort(key=lambda t: (t[0], t[1]))

    bound = conjectured_bound(config.n, config.lam, config.p)
    check_order = 2 * config.order
    best_val, best_params = 0.0, SearchParams(0j, OmegaSpec.schur([0j]))
    for _, _, params in candidates:
        try:
            val = objective(params, config, order=check_order)
        except MeroclassError:
            continue
        if isinstance(val, Infeasible):
            continue
        best_val, best_params = float(val), params
        break
    margin = bound - best_val
    return SearchResult(
        n=config.n, lam=config.lam, p=config.p,
        best_abs_an=best_val, best_params=best_params,
        conjectured_bound=bound, margin=margin,
        attained=margin <= ATTAINED_MARGIN,
        violated=margin < -VIOLATION_MARGIN,
        evals=evals,
    )


def sweep(n_values: Sequence[int], lambda_values: Sequence[float], p_values: Sequence[float],
          config: SearchConfig, workers: int | None = None) -> list[SearchResult]:
    """One :func:`maximize_coefficient` per cell of ``n x lambda x p``; other settings from ``config``."""
    results = []
    for n, lam, p in product(n_values, lambda_values, p_values):
        cell = replace(config, n=int(n), lam=float(lam), p=float(p))
        results.append(maximize_coefficient(cell, workers))
    return results


# --------------------------------------------------------------------------
# persistence

def results_csv(results: Sequence[SearchResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def results_json(results: Sequence[SearchResult], manifest: dict | None = None) -> str:
    doc = {"manifest": manifest, "results": [r.to_json() for r in results]}
    return json.dumps(doc, indent=2, default=_json_default)


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
