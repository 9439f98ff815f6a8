import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atiyah_lab.core import (
    build_matrix,
    evaluate,
    gauge_fix,
    log_determinant,
    matrix_from_forms,
    pair_forms,
    rhs_log_bound,
)
from atiyah_lab.errors import CoincidentPoints
from atiyah_lab.generators import case_a_config, collinear_vertical
from atiyah_lab.geometry import CANONICAL, Configuration, Point, all_pairs, pair_data

seeds = st.integers(0, 2**32 - 1)


def random_config(seed, n):
    return Configuration.from_array(np.random.default_rng(seed).standard_normal((n, 3)))


def test_build_matrix_two_points():
    P = build_matrix(Configuration([(0, 0), (0, 2j)]))
    assert np.array_equal(P, [[2, -2j], [-2j, 2]])


def test_two_point_det_is_bound(rng):
    for _ in range(100):
        c = Configuration.from_array(rng.standard_normal((2, 3)))
        pd = pair_data(c, 0, 1)
        det = np.linalg.det(build_matrix(c))
        assert det == pytest.approx(pd.lam**2 + abs(pd.delta_z) ** 2, rel=1e-12)


def test_case_a_matrix_two_points():
    c, policy = case_a_config([0.0])
    assert np.array_equal(build_matrix(c, policy), [[-1, 1], [1, 1]])


def test_case_a_exact_determinant():
    # symbolic determinant for a = (0, 1), b = -1: 32 + 20 sqrt(2); bound 32 + 16 sqrt(2)
    c, policy = case_a_config([0.0, 1.0])
    log_abs, _ = log_determinant(build_matrix(c, policy))
    assert math.exp(log_abs) == pytest.approx(32 + 20 * math.sqrt(2), rel=1e-13)
    assert math.exp(rhs_log_bound(c, policy)) == pytest.approx(32 + 16 * math.sqrt(2), rel=1e-13)
    assert evaluate(c, policy).ratio == pytest.approx(1.1035533905932737, rel=1e-12)


def test_log_determinant_examples():
    assert log_determinant(np.eye(5)) == (0.0, 1)
    la, ph = log_determinant(np.diag([2, 3j]))
    assert la == pytest.approx(math.log(6), rel=1e-15) and ph == pytest.approx(1j)
    la, ph = log_determinant([[2, -2j], [-2j, 2]])
    assert la == pytest.approx(math.log(8), rel=1e-15) and ph == pytest.approx(1)


def test_log_determinant_singular_and_huge():
    la, ph = log_determinant([[1, 2], [2, 4]])
    assert la == -math.inf and ph == 0
    la, _ = log_determinant(np.diag([1e200, 1e200, 1e-300]))
    assert la == pytest.approx(100 * math.log(10), rel=1e-14)


def test_log_determinant_matches_direct(rng):
    for n in range(1, 9):
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + 3 * np.eye(n)
        la, ph = log_determinant(M)
        assert math.exp(la) * ph == pytest.approx(np.linalg.det(M), rel=1e-10)


def test_rhs_log_bound_examples():
    assert rhs_log_bound(Configuration([(0, 0), (0, 2j)])) == pytest.approx(math.log(8))
    assert rhs_log_bound(collinear_vertical([0, 1, 2])) == pytest.approx(math.log(256))


@given(seeds, st.integers(2, 8))
def test_bound_equals_two_lambda_r(seed, n):
    c = random_config(seed, n)
    alt = math.fsum(math.log(2 * pd.lam * pd.r) for pd in all_pairs(c))
    assert rhs_log_bound(c) == pytest.approx(alt, rel=1e-12)


def test_evaluate_two_points(rng):
    for _ in range(50):
        e = evaluate(Configuration.from_array(rng.standard_normal((2, 3))))
        assert e.ratio == pytest.approx(1, abs=1e-12) and e.independent


def test_collinear_ratio_and_monomial_oracle():
    c = collinear_vertical([0, 1, 2, 3, 4])
    P = build_matrix(c)
    # row i is a single monomial x^(N-1-i) y^i: P is diagonal
    assert np.count_nonzero(P - np.diag(np.diag(P))) == 0
    a = c.heights()
    oracle = math.fsum(
        2 * math.log(2 * (a[j] - a[i])) for i in range(5) for j in range(i + 1, 5)
    )
    assert log_determinant(P)[0] == pytest.approx(oracle, rel=1e-14)
    assert evaluate(c).ratio == pytest.approx(1, abs=1e-10)


def test_case_a_two_line_ratio_at_least_one():
    c, policy = case_a_config([0.0, 1.0])
    assert evaluate(c, policy).ratio >= 1


def test_evaluate_rejects_coincident():
    with pytest.raises(CoincidentPoints):
        evaluate(Configuration([(0, 0), (0, 0)]))


def test_gauge_fix():
    c = gauge_fix(Configuration([(1, 1), (3, 1), (2, 2j)]))
    assert c[0] == Point(0, 0)
    assert c.diameter() == pytest.approx(1, rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(3, 8))
def test_translation_and_scale_invariance(seed, n):
    c = random_config(seed, n)
    r = evaluate(c).log_ratio
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(3) * 5
    assert evaluate(c.translated(t[0], complex(t[1], t[2]))).log_ratio == pytest.approx(r, abs=1e-9)
    s = 10 ** rng.uniform(-3, 3)
    assert evaluate(c.scaled(s)).log_ratio == pytest.approx(r, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(3, 8))
def test_relabel_and_rotation_invariance(seed, n):
    c = random_config(seed, n)
    r = evaluate(c).log_ratio
    rng = np.random.default_rng(seed)
    assert evaluate(c.permuted(rng.permutation(n))).log_ratio == pytest.approx(r, abs=1e-9)
    assert evaluate(c.rotated(rng.uniform(0, 6.3))).log_ratio == pytest.approx(r, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(3, 8))
def test_orientation_flip(seed, n):
    c = gauge_fix(random_config(seed, n))
    rng = np.random.default_rng(seed)
    i, j = sorted(int(k) for k in rng.choice(n, 2, replace=False))
    flipped = CANONICAL.with_flip(i, j, c)
    pd = pair_data(c, i, j)
    d0 = log_determinant(build_matrix(c))[0]
    d1 = log_determinant(build_matrix(c, flipped))[0]
    factor = math.log(pd.lam_reverse / pd.lam)
    assert d1 - d0 == pytest.approx(factor, abs=1e-9)
    assert rhs_log_bound(c, flipped) - rhs_log_bound(c) == pytest.approx(factor, abs=1e-9)
    assert evaluate(c, flipped).log_ratio == pytest.approx(evaluate(c).log_ratio, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8))
def test_pair_phase_leaves_det_unchanged(seed, n):
    c = gauge_fix(random_config(seed, n))
    rng = np.random.default_rng(seed)
    pairs = all_pairs(c)
    forms = pair_forms(c, pairs=pairs)
    det0 = np.linalg.det(matrix_from_forms(forms, n))
    for pd in pairs:
        u = np.exp(1j * rng.uniform(0, 2 * np.pi))
        forms[(pd.source, pd.target)] = pd.form_fwd.scaled(u)
        forms[(pd.target, pd.source)] = pd.form_bwd.scaled(np.conj(u))
    det1 = np.linalg.det(matrix_from_forms(forms, n))
    assert det1 == pytest.approx(det0, rel=1e-9)
