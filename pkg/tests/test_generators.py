import math

import numpy as np
import pytest

from atiyah_lab.closed_forms import case_a_det, case_b_det, case_lambdas
from atiyah_lab.core import build_matrix, evaluate, log_determinant
from atiyah_lab.errors import NonAscendingInput
from atiyah_lab.generators import (
    GeneratorKind,
    GeneratorSpec,
    case_a_config,
    case_a_lambdas,
    case_b_config,
    collinear_vertical,
    dropped_scalar,
    log_dropped_scalar,
    random_config,
    table1_policy,
)


def test_table1_policy_orients_cross_pairs_backwards():
    pol = table1_policy(2, 2)
    assert pol.forward[(0, 1)] and pol.forward[(2, 3)]
    assert not any(pol.forward[(i, j)] for i in (0, 1) for j in (2, 3))


def test_case_a_m1():
    c, pol = case_a_config([0.0])
    P = build_matrix(c, pol)
    assert np.array_equal(P, [[-1, 1], [1, 1]])
    assert abs(np.linalg.det(P)) == pytest.approx(case_a_det([1.0]))


def test_case_a_lambdas():
    assert case_a_lambdas([0.0, 1.0]) == pytest.approx([1, 1 + math.sqrt(2)], rel=1e-15)


def test_case_a_general_b():
    # |det P| = S * |b|^(2m) * case_a_det(lam / |b|)
    a, b = [-0.5, 0.25, 2.0], -3.0
    c, pol = case_a_config(a, b)
    log_abs, _ = log_determinant(build_matrix(c, pol))
    expect = (
        log_dropped_scalar(a, [b]) + 2 * len(a) * math.log(abs(b)) + math.log(case_a_det(case_a_lambdas(a, b)))
    )
    assert log_abs == pytest.approx(expect, abs=1e-12)


def test_case_b_m1():
    # symbolic 3x3 determinant of the full matrix: 32 = (b2 - b1)^2 * 8
    c, pol = case_b_config([0.0])
    assert len(c) == 3
    assert np.linalg.det(build_matrix(c, pol)).real == pytest.approx(32, rel=1e-14)
    assert dropped_scalar([0.0], [-1, 1]) == 4
    assert float(case_b_det([1.0]).det) == 8


def test_case_b_symmetry():
    c, _ = case_b_config([-1.0, 1.0])
    y1, y2 = c[2], c[3]
    # midpoint of the M pair is the origin, which lies on L; segment is perpendicular to L
    assert y1.a + y2.a == 0 and y1.z + y2.z == 0
    assert y1.a == y2.a
    assert all(p.z == 0 for p in c[:2])


@pytest.mark.parametrize("fn", [case_a_config, case_b_config, collinear_vertical])
def test_non_ascending(fn):
    with pytest.raises(NonAscendingInput):
        fn([1.0, 0.0])
    with pytest.raises(NonAscendingInput):
        fn([1.0, 1.0])


def test_special_geometry_exact(rng):
    for m in range(1, 8):
        a = np.sort(rng.standard_normal(m))
        c, _ = case_a_config(a)
        assert all(p.z == 0 for p in c[:m]) and c[m].a == 0 and c[m].z.imag == 0
        c, _ = case_b_config(a)
        assert c[m].z == -c[m + 1].z and c[m].a == c[m + 1].a == 0


def test_case_ratios_through_dropped_scalar(rng):
    for m in range(1, 9):
        a = np.sort(rng.standard_normal(m))
        lam = case_lambdas(a)
        c, pol = case_a_config(a)
        la = log_determinant(build_matrix(c, pol))[0]
        assert la == pytest.approx(log_dropped_scalar(a, [-1]) + math.log(case_a_det(lam)), abs=1e-9)
        c, pol = case_b_config(a)
        la = log_determinant(build_matrix(c, pol))[0]
        assert la == pytest.approx(
            log_dropped_scalar(a, [-1, 1]) + math.log(case_b_det(lam).det), abs=1e-9
        )


def test_cases_independent(rng):
    for m in range(1, 9):
        a = np.sort(rng.standard_normal(m))
        assert evaluate(*case_a_config(a)).independent
        assert evaluate(*case_b_config(a)).independent


def test_random_config_deterministic():
    for kind in ("random_box", "random_gaussian", "polygon", "collinear_vertical"):
        assert random_config(4, 42, kind) == random_config(4, 42, kind)
    assert random_config(4, 42) != random_config(4, 43)


def test_random_box_range():
    x = random_config(50, 1, GeneratorKind.RANDOM_BOX).as_array()
    assert x.min() >= 0 and x.max() < 1


def test_random_pair_ratio_one():
    for kind in ("random_box", "random_gaussian"):
        for seed in range(20):
            assert evaluate(random_config(2, seed, kind)).ratio == pytest.approx(1, abs=1e-12)


def test_gaussian_six_points_independent():
    ratios = [evaluate(random_config(6, s)).ratio for s in range(1000)]
    assert all(r > 1e-8 for r in ratios)


def test_collinear_vertical_ratio(rng):
    assert evaluate(collinear_vertical([0, 1, 2])).ratio == pytest.approx(1, abs=1e-10)
    assert evaluate(collinear_vertical([0, 1])).ratio == pytest.approx(1, abs=1e-10)
    h = np.sort(rng.uniform(-5, 5, 10))
    assert evaluate(collinear_vertical(h)).ratio == pytest.approx(1, abs=1e-10)


def test_generator_spec_sampling():
    spec = GeneratorSpec(kind="random_gaussian", n_min=3, n_max=7, seed=5)
    ns = set()
    for k in range(50):
        c, pol = spec.sample(k)
        c2, _ = spec.sample(k)
        assert c == c2
        ns.add(len(c))
    assert ns == {3, 4, 5, 6, 7}


@pytest.mark.parametrize("kind", list(GeneratorKind))
def test_every_kind_samples(kind):
    spec = GeneratorSpec(kind=kind, n_min=4, n_max=6, seed=1)
    for k in range(5):
        c, pol = spec.sample(k)
        assert 4 <= len(c) <= 6
        assert evaluate(c, pol).independent


def test_generator_spec_dict_round_trip():
    spec = GeneratorSpec(kind="case_b", a=(-1.0, 0.5), seed=3)
    assert spec.n_min == spec.n_max == 4
    assert GeneratorSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        GeneratorSpec.from_dict({"kind": "random_box", "bogus": 1})


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(n_min=1)
    with pytest.raises(ValueError):
        GeneratorSpec(n_min=5, n_max=4)
    with pytest.raises(ValueError):
        GeneratorSpec(kind="random_box", a=(0.0,))
    with pytest.raises(NonAscendingInput):
        GeneratorSpec(kind="case_a", a=(1.0, 0.0))
