import csv
import io
import json
import math

import pytest
from hypothesis import given, strategies as st

from meroclass.classfn import ClassFunction, extremal
from meroclass.conjecture import (CSV_COLUMNS, Infeasible, SearchConfig, SearchParams,
                                  canonicalize, conjecture1_bound, conjectured_bound,
                                  maximize_coefficient, objective, results_csv, results_json,
                                  sweep)
from meroclass.errors import DomainError
from meroclass.omega import OmegaSpec

ZERO = OmegaSpec.constant(0)


def test_conjectured_bound_examples():
    for lam, p in ((0.5, 0.8), (0.1, 0.2), (1.0, 0.5)):
        assert conjectured_bound(2, lam, p) == pytest.approx((1 + lam * p * p) / p, rel=1e-15)
    for n in range(2, 9):
        for lam in (0.25, 0.5, 0.75):
            assert conjectured_bound(n, lam, 1.0) == pytest.approx((1 - lam ** n) / (1 - lam), rel=1e-14)
            assert conjectured_bound(n, lam, 1.0) == pytest.approx(conjecture1_bound(n, lam), rel=1e-15)
        assert conjectured_bound(n, 1.0, 1.0) == n
    with pytest.raises(DomainError):
        conjectured_bound(1, 0.5, 0.5)


def test_conjecture1_bound_examples():
    assert conjecture1_bound(2, 0.5) == 1.5
    assert conjecture1_bound(7, 1.0) == 7
    assert conjecture1_bound(4, 0.75) == 2.734375


def test_objective_examples():
    for lam, p in ((0.5, 0.8), (0.25, 0.5), (1.0, 0.9)):
        cf = extremal(lam, p, 0.0)
        cfg = SearchConfig(n=2, lam=lam, p=p)
        val = objective(SearchParams(cf.c, cf.omega), cfg)
        assert val == pytest.approx((1 + lam * p * p) / p, rel=1e-12)
        bad = objective(SearchParams(-2 / p, ZERO), cfg)
        assert isinstance(bad, Infeasible) and not bad
        assert bad.pole_free_radius == pytest.approx(p / 2, abs=1e-12)
    for n in (2, 3, 7):
        assert objective(SearchParams(0j, ZERO), SearchConfig(n=n)) == 0


@pytest.mark.parametrize("kwargs", [dict(n=1), dict(lam=0), dict(p=1.5), dict(restarts=0),
                                    dict(schur_depth=-1), dict(n=70)])
def test_search_config_validation(kwargs):
    with pytest.raises(DomainError):
        SearchConfig(**kwargs)


@given(st.floats(-2, 2), st.floats(-2, 2),
       st.lists(st.tuples(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7)), min_size=1, max_size=3),
       st.integers(2, 6))
def test_canonicalize_makes_an_real_and_keeps_modulus(cr, ci, gs, n):
    params = SearchParams(complex(cr, ci), OmegaSpec.schur([complex(*g) for g in gs]))
    before = ClassFunction(params.c, 0.5, params.omega, 32).f[n]
    canon = canonicalize(params, 0.5, n, 32)
    after = ClassFunction(canon.c, 0.5, canon.omega, 32).f[n]
    assert abs(abs(after) - abs(before)) <= 1e-9 * max(1, abs(before))
    if abs(before) > 1e-6:
        assert after.real > 0 and abs(after.imag) <= 1e-9 * abs(after)


def test_search_second_coefficient():
    res = maximize_coefficient(SearchConfig(n=2, lam=0.5, p=0.8, restarts=4, seed=3), workers=1)
    assert 1.65 - 1e-4 <= res.best_abs_an <= 1.65 + 1e-6
    assert res.attained and not res.violated
    assert abs(res.best_params.c + 1.65) < 1e-3


def test_search_third_coefficient_p1():
    res = maximize_coefficient(SearchConfig(n=3, lam=0.5, p=1.0, restarts=4, seed=1), workers=1)
    assert res.best_abs_an <= 1.75 + 1e-6
    assert res.attained


def test_search_koebe():
    res = maximize_coefficient(SearchConfig(n=2, lam=1.0, p=1.0, restarts=2, seed=1), workers=1)
    assert res.best_abs_an == pytest.approx(2.0, abs=1e-3)
    assert not res.violated


def test_search_does_not_depend_on_workers():
    cfg = SearchConfig(n=3, lam=0.25, p=0.9, restarts=3, seed=11, max_evals_per_restart=150)
    one = maximize_coefficient(cfg, workers=1)
    two = maximize_coefficient(cfg, workers=2)
    assert one.row() == two.row()


def test_sweep_shapes():
    cfg = SearchConfig(restarts=1, max_evals_per_restart=40)
    assert sweep([], [0.5], [1.0], cfg, workers=1) == []
    rows = sweep([3], [0.25, 0.5, 0.75], [1.0], cfg, workers=1)
    assert len(rows) == 3
    bounds = [r.conjectured_bound for r in rows]
    assert bounds == sorted(bounds) and len(set(bounds)) == 3


def test_results_csv_and_json():
    cfg = SearchConfig(n=2, lam=0.5, p=0.8, restarts=1, max_evals_per_restart=60)
    rows = sweep([2], [0.5], [0.8, 1.0], cfg, workers=1)
    text = results_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_COLUMNS and len(parsed) == 2
    assert parsed[0]["attained"] in ("true", "false")
    assert float(parsed[0]["bound"]) == 1.65
    params = json.loads(parsed[0]["params_json"])
    assert set(params) == {"c", "omega"}
    doc = json.loads(results_json(rows, {"seed": 0}))
    assert doc["manifest"] == {"seed": 0} and len(doc["results"]) == 2
    assert math.isfinite(doc["results"][0]["best_abs_an"])


def test_objective_reports_a_function_above_the_bound():
    # found by the n=3, lambda=0.25, p=1 search: A has no zero in the open disk
    top = 0.9950598768126444 + 0.0992765911864667j
    omega = OmegaSpec.schur([-0.8474069237486125 + 0.007116793735227694j, top / abs(top)])
    params = SearchParams(1.234756720718875 - 0.0007204651750228885j, omega)
    value = objective(params, SearchConfig(n=3, lam=0.25, p=1.0))
    assert not isinstance(value, Infeasible)
    assert value > conjectured_bound(3, 0.25, 1.0) + 2e-4
