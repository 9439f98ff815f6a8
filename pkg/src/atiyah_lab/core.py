"""Coefficient matrix P, its log-determinant and the conjectured lower bound.

Row i of P holds the coefficients of p_i = prod_{j != i} l_ij. The
independence conjecture says det P != 0; the stronger inequality says

    |det P| >= prod_{i<j} (lam_ij^2 + |z_j - z_i|^2).

`evaluate` reports the ratio of the two sides, which is invariant under
translation, scaling, relabeling and the per-pair orientation choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binary_forms import LinearForm
from .geometry import CANONICAL, Configuration, OrientationPolicy, PairData, all_pairs

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class AtiyahEvaluation:
    n: int
    log_abs_det: float
    det_phase: complex
    log_rhs: float
    ratio: float
    independent: bool
    orientation: OrientationPolicy

    @property
    def log_ratio(self) -> float:
        return self.log_abs_det - self.log_rhs


def pair_forms(
    c: Configuration, policy: OrientationPolicy = CANONICAL, pairs: list[PairData] | None = None
) -> dict[tuple[int, int], LinearForm]:
    """All forms l_ij keyed by ordered pair (i, j): the form in row i for partner j."""
    if pairs is None:
        pairs = all_pairs(c, policy)
    forms = {}
    for pd in pairs:
        forms[(pd.source, pd.target)] = pd.form_fwd
        forms[(pd.target, pd.source)] = pd.form_bwd
    return forms


def matrix_from_forms(forms: dict[tuple[int, int], LinearForm], n: int) -> np.ndarray:
    P = np.empty((n, n), dtype=complex)
    for i in range(n):
        row = np.ones(1, dtype=complex)
        for j in range(n):
            if j != i:
                l = forms[(i, j)]
                row = np.convolve(row, (l.u, l.v))
        P[i] = row
    return P


def build_matrix(c: Configuration, policy: OrientationPolicy = CANONICAL) -> np.ndarray:
    """The N x N coefficient matrix of the forms p_1, ..., p_N."""
    return matrix_from_forms(pair_forms(c, policy), len(c))


def log_determinant(M) -> tuple[float, complex]:
    """(log|det M|, det M / |det M|) via LU with partial pivoting.

    A singular matrix gives (-inf, 0).
    """
    phase, log_abs = np.linalg.slogdet(np.asarray(M, dtype=complex))
    return float(log_abs), complex(phase)


def _log_bound(pairs: list[PairData]) -> float:
    return math.fsum(math.log(pd.bound_factor()) for pd in pairs)


def rhs_log_bound(c: Configuration, policy: OrientationPolicy = CANONICAL) -> float:
    """Natural log of prod_{i<j} (lam_ij^2 + |dz_ij|^2)."""
    return _log_bound(all_pairs(c, policy))


def gauge_fix(c: Configuration) -> Configuration:
    """Translate the first point to the origin and rescale to unit diameter."""
    x = c.as_array()
    x = x - x[0]
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)).max()
    return Configuration.from_array(x / d)


def evaluate(
    c: Configuration, policy: OrientationPolicy = CANONICAL, tol: float = DEFAULT_TOL
) -> AtiyahEvaluation:
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = gauge_fix(c)
    pairs = all_pairs(g, policy)
    P = matrix_from_forms(pair_forms(g, pairs=pairs), len(g))
    log_abs, phase = log_determinant(P)
    log_rhs = _log_bound(pairs)
    ratio = math.exp(log_abs - log_rhs) if math.isfinite(log_abs) else 0.0
    return AtiyahEvaluation(
        n=len(c),
        log_abs_det=log_abs,
        det_phase=phase,
        log_rhs=log_rhs,
        ratio=ratio,
        independent=ratio > tol,
        orientation=policy,
    )
