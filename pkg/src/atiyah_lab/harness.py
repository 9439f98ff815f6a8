"""Fuzz campaigns, invariance checks, special-case cross-checks and ratio minimization."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .closed_forms import case_a_det, case_b_det, case_b_inequality_probe, case_lambdas
from .core import (
    DEFAULT_TOL,
    build_matrix,
    evaluate,
    gauge_fix,
    log_determinant,
    matrix_from_forms,
    pair_forms,
    rhs_log_bound,
)
from .errors import DegenerateLift, DegenerateStart
from .generators import GeneratorSpec, case_a_config, case_b_config, log_dropped_scalar
from .geometry import CANONICAL, Configuration, OrientationKind, OrientationPolicy, all_pairs

VIOLATION_TOL = 1e-9
COINCIDENCE_GUARD = 1e-9


def rel_delta(log_x: float, log_y: float) -> float:
    """|x / y - 1| from logarithms."""
    return abs(math.expm1(log_x - log_y))


def policy_to_dict(policy: OrientationPolicy) -> dict:
    return {
        "kind": policy.kind.value,
        "label": policy.label,
        "forward": [[i, j, f] for (i, j), f in sorted(policy.forward.items())],
    }


def policy_from_dict(d: dict) -> OrientationPolicy:
    if OrientationKind(d["kind"]) is OrientationKind.CANONICAL:
        return CANONICAL
    return OrientationPolicy.explicit(
        {(i, j): f for i, j, f in d["forward"]}, label=d.get("label", "explicit")
    )


def reproducer(c: Configuration, policy: OrientationPolicy, ratio: float, **extra) -> dict:
    """Self-contained record that re-evaluates to the same ratio."""
    return {
        **extra,
        "n": len(c),
        "ratio": ratio,
        "orientation": policy_to_dict(policy),
        "points": c.as_array().tolist(),
    }


def reevaluate(rec: dict, tol: float = DEFAULT_TOL):
    c = Configuration.from_array(rec["points"])
    return evaluate(c, policy_from_dict(rec["orientation"]), tol)


# --------------------------------------------------------------------------
# fuzzing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SampleRecord:
    index: int
    seed: int
    n: int
    ratio: float
    log_abs_det: float
    log_rhs: float
    independent: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FuzzReport:
    samples: int
    n_range: tuple[int, int]
    kind: str
    seed: int
    tol: float
    violation_tol: float
    min_ratio: float
    argmin: dict
    independence_failures: list[dict]
    violations: list[dict]
    wall_time: float = 0.0
    records: list[SampleRecord] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.independence_failures and not self.violations

    def to_dict(self, wall_time: bool = True) -> dict:
        d = {
            "samples": self.samples,
            "n_range": list(self.n_range),
            "kind": self.kind,
            "seed": self.seed,
            "tol": self.tol,
            "violation_tol": self.violation_tol,
            "min_ratio": self.min_ratio,
            "argmin": self.argmin,
            "independence_failures": self.independence_failures,
            "violations": self.violations,
        }
        if wall_time:
            d["wall_time"] = self.wall_time
        return d


def _fuzz_one(spec: GeneratorSpec, index: int, tol: float):
    c, policy = spec.sample(index)
    e = evaluate(c, policy, tol)
    rec = SampleRecord(
        index=index,
        seed=spec.sample_seed(index),
        n=len(c),
        ratio=e.ratio,
        log_abs_det=e.log_abs_det,
        log_rhs=e.log_rhs,
        independent=e.independent,
    )
    return rec, c, policy


def _fuzz_chunk(args):
    spec, indices, tol = args
    return [_fuzz_one(spec, k, tol) for k in indices]


def fuzz(
    spec: GeneratorSpec,
    samples: int,
    tol: float = DEFAULT_TOL,
    violation_tol: float = VIOLATION_TOL,
    workers: int = 1,
    keep_records: bool = False,
) -> FuzzReport:
    """Evaluate `samples` configurations drawn from `spec`.

    Results are reduced in sample-index order, so the report does not depend
    on `workers`.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t0 = time.perf_counter()
    if workers > 1:
        chunks = np.array_split(np.arange(samples), workers * 4)
        with ProcessPoolExecutor(workers) as ex:
            parts = ex.map(_fuzz_chunk, [(spec, [int(k) for k in ch], tol) for ch in chunks])
            results = [r for part in parts for r in part]
    else:
        results = [_fuzz_one(spec, k, tol) for k in range(samples)]

    min_ratio = math.inf
    argmin: dict = {}
    failures, violations, records = [], [], []
    for rec, c, policy in results:
        if rec.ratio < min_ratio:
            min_ratio = rec.ratio
            argmin = reproducer(c, policy, rec.ratio, sample=rec.index, seed=rec.seed)
        if not rec.independent:
            failures.append(reproducer(c, policy, rec.ratio, sample=rec.index, seed=rec.seed))
        elif rec.ratio < 1 - violation_tol:
            violations.append(reproducer(c, policy, rec.ratio, sample=rec.index, seed=rec.seed))
        if keep_records:
            records.append(rec)
    return FuzzReport(
        samples=samples,
        n_range=(spec.n_min, spec.n_max),
        kind=spec.kind.value,
        seed=spec.seed,
        tol=tol,
        violation_tol=violation_tol,
        min_ratio=min_ratio,
        argmin=argmin,
        independence_failures=failures,
        violations=violations,
        wall_time=time.perf_counter() - t0,
        records=records,
    )


# --------------------------------------------------------------------------
# minimization
# --------------------------------------------------------------------------


@dataclass
class MinimizeResult:
    start: Configuration
    final: Configuration
    start_ratio: float
    final_ratio: float
    iterations: int
    evaluations: int
    converged: bool
    trace: list[float]
    reproducer_path: str | None = None

    def to_dict(self) -> dict:
        return {
            "start": self.start.as_array().tolist(),
            "final": self.final.as_array().tolist(),
            "start_ratio": self.start_ratio,
            "final_ratio": self.final_ratio,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "trace": self.trace,
            "reproducer_path": self.reproducer_path,
        }


def _min_separation(x: np.ndarray) -> tuple[float, float]:
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    diam = d.max()
    d[np.diag_indices_from(d)] = np.inf
    return d.min(), diam


class _LogRatio:
    """log(ratio) as a function of the free coordinates of points 2..N."""

    def __init__(self, n: int, guard: float):
        self.n = n
        self.guard = guard

    def points(self, x: np.ndarray) -> np.ndarray:
        return np.vstack([np.zeros(3), np.asarray(x).reshape(self.n - 1, 3)])

    def __call__(self, x: np.ndarray) -> float:
        pts = self.points(x)
        if not np.all(np.isfinite(pts)):
            return math.inf
        sep, diam = _min_separation(pts)
        if diam == 0 or sep < self.guard * diam:
            return math.inf
        return evaluate(Configuration.from_array(pts / diam)).log_ratio


def minimize_ratio(
    c0: Configuration,
    budget: int = 2000,
    tol: float = 1e-10,
    guard: float = COINCIDENCE_GUARD,
    flag_below: float = 1 - 1e-6,
    reproducer_dir: str | Path | None = None,
    label: str = "minimize",
) -> MinimizeResult:
    """Nelder-Mead descent on log(ratio) over the configuration.

    The first point is pinned at the origin and every trial configuration is
    rescaled to unit diameter; trial steps bringing two points closer than
    `guard` (relative to the diameter) are rejected. `budget` caps objective
    evaluations and `tol` is the simplex size at which the search stops.
    If the final ratio falls below `flag_below` and `reproducer_dir` is set,
    the final configuration is written there.
    """
    start = gauge_fix(c0)
    x_start = start.as_array()
    sep, _ = _min_separation(x_start)
    if sep < guard:
        raise DegenerateStart(f"start configuration has points within {sep:.3g} of each other")
    start_ratio = evaluate(start).ratio
    if budget <= 0:
        return MinimizeResult(start, start, start_ratio, start_ratio, 0, 0, False, [start_ratio])

    f = _LogRatio(len(start), guard)
    trace = [start_ratio]

    def record(intermediate_result):
        trace.append(min(trace[-1], math.exp(intermediate_result.fun)))

    res = minimize(
        f,
        x_start[1:].ravel(),
        method="Nelder-Mead",
        callback=record,
        options={"maxfev": budget, "xatol": tol, "fatol": math.inf, "adaptive": True},
    )
    pts = f.points(res.x)
    final = gauge_fix(Configuration.from_array(pts))
    final_ratio = evaluate(final).ratio
    if final_ratio > start_ratio:
        final, final_ratio = start, start_ratio
    out = MinimizeResult(
        start=start,
        final=final,
        start_ratio=start_ratio,
        final_ratio=final_ratio,
        iterations=int(res.nit),
        evaluations=int(res.nfev),
        converged=bool(res.status == 0),
        trace=trace,
    )
    if reproducer_dir is not None and final_ratio < flag_below:
        from .fileio import write_configuration

        path = Path(reproducer_dir) / f"{label}-ratio-{final_ratio:.12g}.txt"
        write_configuration(final, path, comment=f"ratio {final_ratio!r}")
        out.reproducer_path = str(path)
    return out


@dataclass
class MultistartReport:
    seed: int
    restarts: int
    perturbation: float
    results: list[MinimizeResult]

    @property
    def best(self) -> MinimizeResult:
        return min(self.results, key=lambda r: r.final_ratio)

    @property
    def min_ratio(self) -> float:
        return self.best.final_ratio

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "restarts": self.restarts,
            "perturbation": self.perturbation,
            "min_ratio": self.min_ratio,
            "results": [r.to_dict() for r in self.results],
        }


def perturbed_start(c0: Configuration, seed: int, perturbation: float) -> Configuration:
    x = gauge_fix(c0).as_array()
    rng = np.random.default_rng(seed)
    return Configuration.from_array(x + perturbation * rng.standard_normal(x.shape))


def _restart(args):
    c0, k, seed, perturbation, kwargs = args
    start = perturbed_start(c0, seed + k, perturbation)
    return minimize_ratio(start, label=f"restart-{k}", **kwargs)


def multistart_minimize(
    c0: Configuration,
    restarts: int = 10,
    seed: int = 0,
    perturbation: float = 0.05,
    workers: int = 1,
    **kwargs,
) -> MultistartReport:
    """Run `minimize_ratio` from `restarts` perturbed copies of `c0`.

    Restart k perturbs the gauge-fixed start with normal noise of size
    `perturbation` drawn from the stream seeded with seed + k.
    """
    jobs = [(c0, k, seed, perturbation, kwargs) for k in range(restarts)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_restart, jobs))
    else:
        results = [_restart(j) for j in jobs]
    return MultistartReport(seed, restarts, perturbation, results)


# --------------------------------------------------------------------------
# special cases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CrosscheckEntry:
    case: str
    m: int
    a: list[float]
    det_rel_err: float
    bound_rel_err: float
    ratio: float
    closed_ratio: float
    rtol: float

    @property
    def det_ok(self) -> bool:
        return self.det_rel_err <= self.rtol

    @property
    def bound_ok(self) -> bool:
        return self.bound_rel_err <= self.rtol

    @property
    def ratio_ok(self) -> bool:
        # only case (A) carries a proven lower bound; for (B) the ratio has to
        # agree with the closed-form slack instead
        if self.case == "A":
            return self.ratio >= 1 - VIOLATION_TOL and rel_delta(
                math.log(self.ratio), math.log(self.closed_ratio)
            ) <= self.rtol
        return rel_delta(math.log(self.ratio), math.log(self.closed_ratio)) <= self.rtol

    @property
    def ok(self) -> bool:
        return self.det_ok and self.bound_ok and self.ratio_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(det_ok=self.det_ok, bound_ok=self.bound_ok, ratio_ok=self.ratio_ok)
        return d


@dataclass
class CrosscheckReport:
    entries: list[CrosscheckEntry]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[CrosscheckEntry]:
        return [e for e in self.entries if not e.ok]

    @property
    def case_b_below_one(self) -> list[CrosscheckEntry]:
        return [e for e in self.entries if e.case == "B" and e.ratio < 1 - VIOLATION_TOL]

    def max_errors(self) -> dict:
        return {
            "det_rel_err": max(e.det_rel_err for e in self.entries),
            "bound_rel_err": max(e.bound_rel_err for e in self.entries),
        }


def _cross_log_bound(a: np.ndarray, b: Sequence[float]) -> float:
    # lam_ij^2 + b_j^2 over all cross pairs (i on L, j on M)
    return math.fsum(
        float(np.log(case_lambdas(a, bj) ** 2 + bj**2).sum()) for bj in b
    )


def crosscheck_case(case: str, a: Sequence[float], rtol: float = 1e-9) -> CrosscheckEntry:
    """Compare det P and the bound of a case (A)/(B) configuration with closed forms.

    det: |det P| (line-pair orientation, no rescaling) against S * closed form.
    bound: the pairwise bound against
    prod_L (2 da)^2 * prod_M 2 (db)^2 * prod_cross (lam_ij^2 + b_j^2).
    """
    a = np.asarray(a, dtype=float)
    if case == "A":
        b = [-1.0]
        c, policy = case_a_config(a)
        log_closed = float(np.log(case_a_det(case_lambdas(a))))
        closed_ratio = float(case_a_det(case_lambdas(a)) / np.prod(1 + case_lambdas(a) ** 2))
    elif case == "B":
        b = [-1.0, 1.0]
        c, policy = case_b_config(a)
        log_closed = float(np.log(case_b_det(case_lambdas(a)).det))
        closed_ratio = float(case_b_inequality_probe(case_lambdas(a)).slack)
    else:
        raise ValueError(f"unknown case {case!r}")
    log_s = log_dropped_scalar(a, b)
    log_abs, _ = log_determinant(build_matrix(c, policy))
    n = len(b)
    # S already holds (db)^2 per M pair; the bound has 2 (db)^2
    log_book = log_s + math.comb(n, 2) * math.log(2) + _cross_log_bound(a, b)
    return CrosscheckEntry(
        case=case,
        m=int(a.size),
        a=a.tolist(),
        det_rel_err=rel_delta(log_abs, log_s + log_closed),
        bound_rel_err=rel_delta(rhs_log_bound(c, policy), log_book),
        ratio=evaluate(c, policy).ratio,
        closed_ratio=closed_ratio,
        rtol=rtol,
    )


def _random_ascending(rng: np.random.Generator, m: int, scale: float = 1.0) -> np.ndarray:
    while True:
        a = np.sort(scale * rng.standard_normal(m))
        if np.all(np.diff(a) > 0):
            return a


def crosscheck_special_cases(
    m_max: int, trials: int = 10, seed: int = 0, rtol: float = 1e-9
) -> CrosscheckReport:
    """Random case (A) and (B) parameters for m = 1..m_max, `trials` each."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    rng = np.random.default_rng(seed)
    entries = []
    for m in range(1, m_max + 1):
        for _ in range(trials):
            a = _random_ascending(rng, m)
            entries.append(crosscheck_case("A", a, rtol))
            entries.append(crosscheck_case("B", a, rtol))
    return CrosscheckReport(entries)


# --------------------------------------------------------------------------
# invariances
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceCheck:
    name: str
    max_rel_delta: float
    rtol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_delta <= self.rtol


@dataclass
class InvarianceReport:
    n: int
    ratio: float
    checks: list[InvarianceCheck]

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def by_name(self) -> dict[str, InvarianceCheck]:
        return {ch.name: ch for ch in self.checks}


def phase_delta(c: Configuration, rng: np.random.Generator) -> float:
    """Relative change of det P when every pair's lift gets a random unit phase.

    The forward form is multiplied by u and the backward form by conj(u).
    """
    g = gauge_fix(c)
    pairs = all_pairs(g)
    forms = pair_forms(g, pairs=pairs)
    log0, ph0 = log_determinant(matrix_from_forms(forms, len(g)))
    new = dict(forms)
    for pd in pairs:
        u = np.exp(1j * rng.uniform(0, 2 * math.pi))
        new[(pd.source, pd.target)] = pd.form_fwd.scaled(u)
        new[(pd.target, pd.source)] = pd.form_bwd.scaled(np.conj(u))
    log1, ph1 = log_determinant(matrix_from_forms(new, len(g)))
    return abs(np.exp(log1 - log0) * ph1 / ph0 - 1)


def invariance_suite(
    c: Configuration, trials: int = 10, seed: int = 0, rtol: float = 1e-9
) -> InvarianceReport:
    """Check the ratio against translation, scaling, relabeling, pair phases,
    single-pair orientation flips and rotation about the R axis."""
    rng = np.random.default_rng(seed)
    base = evaluate(c)
    log0 = base.log_ratio
    n = len(c)
    deltas: dict[str, list[float]] = {
        k: [] for k in ("translation", "scale", "relabel", "phase", "orientation", "rotation")
    }

    def d(e) -> float:
        return rel_delta(e.log_ratio, log0)

    for _ in range(trials):
        t = rng.standard_normal(3) * 10 ** rng.uniform(-2, 2)
        deltas["translation"].append(d(evaluate(c.translated(t[0], complex(t[1], t[2])))))
        deltas["scale"].append(d(evaluate(c.scaled(10 ** rng.uniform(-3, 3)))))
        deltas["relabel"].append(d(evaluate(c.permuted(rng.permutation(n)))))
        deltas["phase"].append(phase_delta(c, rng))
        i, j = sorted(int(k) for k in rng.choice(n, 2, replace=False))
        try:
            deltas["orientation"].append(d(evaluate(c, CANONICAL.with_flip(i, j, c))))
        except DegenerateLift:
            pass  # vertical pair: only one direction has a standard lift
        deltas["rotation"].append(d(evaluate(c.rotated(rng.uniform(0, 2 * math.pi)))))
    checks = [InvarianceCheck(k, max(v, default=0.0), rtol) for k, v in deltas.items()]
    return InvarianceReport(n=n, ratio=base.ratio, checks=checks)
