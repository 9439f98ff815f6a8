import math

import numpy as np
import pytest

from atiyah_lab.core import evaluate
from atiyah_lab.errors import DegenerateStart
from atiyah_lab.fileio import read_configuration
from atiyah_lab.generators import GeneratorSpec, collinear_vertical, random_config
from atiyah_lab.geometry import Configuration
from atiyah_lab.harness import (
    crosscheck_case,
    crosscheck_special_cases,
    fuzz,
    invariance_suite,
    minimize_ratio,
    multistart_minimize,
    reevaluate,
)


def test_fuzz_pairs():
    rep = fuzz(GeneratorSpec(n_min=2, n_max=2, seed=11), 1000)
    assert rep.min_ratio == pytest.approx(1, abs=1e-12)
    assert rep.ok


def test_fuzz_collinear_sweep():
    rep = fuzz(GeneratorSpec(kind="collinear_vertical", n_min=2, n_max=10, seed=2), 300)
    assert rep.min_ratio == pytest.approx(1, abs=1e-10)
    assert not rep.independence_failures


def test_fuzz_deterministic_and_parallel():
    spec = GeneratorSpec(n_min=3, n_max=6, seed=7)
    a = fuzz(spec, 200, keep_records=True)
    b = fuzz(spec, 200, keep_records=True)
    c = fuzz(spec, 200, workers=2, keep_records=True)
    assert a.to_dict(wall_time=False) == b.to_dict(wall_time=False) == c.to_dict(wall_time=False)
    assert a.records == c.records
    assert a.min_ratio == min(r.ratio for r in a.records)


def test_fuzz_reproducers_reevaluate():
    # a tiny tolerance margin forces every sample with ratio < 2 into the violation list
    rep = fuzz(GeneratorSpec(n_min=3, n_max=5, seed=1), 50, violation_tol=-1.0)
    assert rep.violations
    for rec in rep.violations + [rep.argmin]:
        assert reevaluate(rec).ratio == pytest.approx(rec["ratio"], rel=1e-12)
        c, pol = GeneratorSpec(n_min=3, n_max=5, seed=1).sample(rec["sample"])
        assert c.as_array().tolist() == rec["points"]


def test_fuzz_case_kinds_keep_table1_orientation():
    rep = fuzz(GeneratorSpec(kind="case_b", n_min=3, n_max=8, seed=4), 20)
    assert rep.argmin["orientation"]["label"] == "table1"
    assert reevaluate(rep.argmin).ratio == pytest.approx(rep.min_ratio, rel=1e-12)


def test_fuzz_rejects_zero_samples():
    with pytest.raises(ValueError):
        fuzz(GeneratorSpec(), 0)


def test_minimize_budget_zero():
    c = random_config(4, 0)
    r = minimize_ratio(c, budget=0)
    assert not r.converged and r.iterations == 0
    assert r.final_ratio == r.start_ratio == pytest.approx(evaluate(c).ratio, rel=1e-14)


def test_minimize_from_collinear_stays_at_one():
    r = minimize_ratio(collinear_vertical([0, 1, 2, 3]), budget=1500)
    assert r.start_ratio == pytest.approx(1, abs=1e-12)
    assert r.final_ratio == pytest.approx(1, abs=1e-9)


def test_minimize_random_three_points():
    r = minimize_ratio(random_config(3, 5), budget=1500)
    assert r.final_ratio >= 1 - 1e-6
    assert r.final_ratio <= r.start_ratio + 1e-12
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))
    assert r.final.diameter() == pytest.approx(1, rel=1e-12)
    assert r.final[0].a == 0 and r.final[0].z == 0


def test_minimize_degenerate_start():
    c = Configuration([(0, 0), (1, 0), (1 + 1e-12, 0)])
    with pytest.raises(DegenerateStart):
        minimize_ratio(c)


def test_minimize_writes_reproducer(tmp_path):
    r = minimize_ratio(random_config(3, 2), budget=50, flag_below=math.inf, reproducer_dir=tmp_path)
    assert r.reproducer_path
    c, _ = read_configuration(r.reproducer_path)
    assert c == r.final
    assert evaluate(c).ratio == pytest.approx(r.final_ratio, rel=1e-12)


def test_multistart_deterministic():
    c0 = collinear_vertical([0, 1, 2, 3])
    a = multistart_minimize(c0, restarts=3, seed=9, budget=300)
    b = multistart_minimize(c0, restarts=3, seed=9, budget=300)
    assert a.to_dict() == b.to_dict()
    assert a.min_ratio >= 1 - 1e-6


def test_crosscheck_small_cases():
    e = crosscheck_case("A", [0.0])
    assert e.ok and e.ratio == pytest.approx(1, rel=1e-12)
    e = crosscheck_case("B", [0.0])
    assert e.ok and e.ratio == pytest.approx(1, rel=1e-12)
    with pytest.raises(ValueError):
        crosscheck_case("C", [0.0])


def test_crosscheck_sweep():
    rep = crosscheck_special_cases(10, trials=5, seed=1)
    assert rep.passed, [e.to_dict() for e in rep.failures]
    assert len(rep.entries) == 100
    assert min(e.ratio for e in rep.entries if e.case == "A") >= 1 - 1e-12


def test_invariance_two_points():
    rep = invariance_suite(random_config(2, 0), trials=10)
    assert all(ch.max_rel_delta <= 1e-12 for ch in rep.checks)


def test_invariance_five_points():
    rep = invariance_suite(random_config(5, 3), trials=100, seed=3)
    assert rep.passed, rep.checks
    assert set(rep.by_name()) == {"translation", "scale", "relabel", "phase", "orientation", "rotation"}


def test_invariance_huge_scale():
    c = random_config(5, 3)
    assert evaluate(c.scaled(1e6)).log_ratio == pytest.approx(evaluate(c).log_ratio, abs=1e-9)
    assert invariance_suite(c.scaled(1e6), trials=5).passed


def test_invariance_collinear_skips_vertical_flips():
    rep = invariance_suite(collinear_vertical([0, 1, 2]), trials=5)
    assert rep.passed
