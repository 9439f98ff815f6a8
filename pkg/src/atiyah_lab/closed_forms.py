"""Elementary symmetric functions and closed-form determinants for two special cases.

Case (A): N-1 points on a line L plus one point off it.
Case (B): N-2 points on L plus two points placed symmetrically on a line
perpendicular to L through a point of L.

In both cases the configuration is normalized so the off-line points sit at
b = -1 (and +1), and each point x_i = (a_i, 0) of L contributes

    lam_i = a_i + sqrt(1 + a_i^2),

an ascending positive sequence. All functions here accept a batch of
lambda lists as an array of shape (..., m); the last axis is the list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NonAscendingInput


def elementary_symmetric(vals) -> np.ndarray:
    """E_0, ..., E_m of the values along the last axis.

    Uses the recurrence E_k <- E_k + v * E_{k-1}, adding one value at a time.

    >>> elementary_symmetric([1, 2, 3])
    array([ 1.,  6., 11.,  6.])
    """
    v = np.asarray(vals)
    if v.dtype.kind not in "fc":
        v = v.astype(float)
    m = v.shape[-1] if v.ndim else 0
    E = np.zeros(v.shape[:-1] + (m + 1,), dtype=v.dtype)
    E[..., 0] = 1
    for i in range(m):
        E[..., 1 : i + 2] = E[..., 1 : i + 2] + v[..., i, None] * E[..., : i + 1]
    return E


def _ascending(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim == 0:
        lam = lam[None]
    if lam.shape[-1] == 0:
        raise NonAscendingInput("need at least one lambda")
    if not np.all(lam > 0):
        raise NonAscendingInput("lambdas must be positive")
    if np.any(np.diff(lam, axis=-1) < 0):
        raise NonAscendingInput("lambdas must be in ascending order")
    return lam


def case_lambdas(a, b: float = -1.0) -> np.ndarray:
    """lam_i = a_i + sqrt(a_i^2 + b^2), computed without cancellation for a_i < 0."""
    a = np.asarray(a, dtype=float)
    r = np.hypot(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        neg = b * b / (r - a)
    return np.where(a >= 0, a + r, neg)


def _top_products(lam: np.ndarray) -> np.ndarray:
    """Column k-1 holds the product of the k largest entries."""
    return np.cumprod(lam[..., ::-1], axis=-1)


def case_a_det(lambdas):
    """1 + lam_m E_1 + lam_{m-1} lam_m E_2 + ... + lam_1 ... lam_m E_m."""
    lam = _ascending(lambdas)
    E = elementary_symmetric(lam)
    top = _top_products(lam)
    return E[..., 0] + (top * E[..., 1:]).sum(-1)


def case_a_proof_matrix(lambdas) -> np.ndarray:
    """(m+1) x (m+1) coefficient matrix of y^(i-1) (1 - lam_i y) and prod (y + lam_i).

    The last row is built by polynomial expansion of the product, not from
    `elementary_symmetric`, so it can serve as an independent check.
    """
    lam = _ascending(lambdas)
    if lam.ndim != 1:
        raise ValueError("proof matrices are built one lambda list at a time")
    m = lam.size
    M = np.zeros((m + 1, m + 1))
    for i in range(m):
        M[i, i] = 1.0
        M[i, i + 1] = -lam[i]
    M[m] = npoly.polyfromroots(-lam)
    return M


def case_b_pq(lambdas) -> tuple[np.ndarray, np.ndarray]:
    """The two factors p, q of the case (B) determinant 2pq.

    p = 1 + lam_m^2 Et_2 + lam_{m-2}^2 lam_m^2 Et_4 + ...
    q = Et_1 + lam_{m-1}^2 Et_3 + lam_{m-3}^2 lam_{m-1}^2 Et_5 + ...

    where Et_k are the elementary symmetric functions of (1, lam_1, ..., lam_m).
    Each series stops once the next lambda index would drop below 1.
    """
    lam = _ascending(lambdas)
    m = lam.shape[-1]
    ones = np.ones(lam.shape[:-1] + (1,))
    Et = elementary_symmetric(np.concatenate([ones, lam], axis=-1))
    lam2 = lam**2

    p = Et[..., 0].copy()
    weight = np.ones(lam.shape[:-1])
    idx = m  # 1-based index of the next lambda factor
    s = 1
    while idx >= 1:
        weight = weight * lam2[..., idx - 1]
        p = p + weight * Et[..., 2 * s]
        idx -= 2
        s += 1

    q = Et[..., 1].copy()
    weight = np.ones(lam.shape[:-1])
    idx = m - 1
    s = 1
    while idx >= 1:
        weight = weight * lam2[..., idx - 1]
        q = q + weight * Et[..., 2 * s + 1]
        idx -= 2
        s += 1
    return np.asarray(p)[()], np.asarray(q)[()]


@dataclass(frozen=True)
class CaseBDeterminant:
    p: np.ndarray
    q: np.ndarray
    det: np.ndarray


def case_b_det(lambdas) -> CaseBDeterminant:
    p, q = case_b_pq(lambdas)
    return CaseBDeterminant(p, q, 2 * p * q)


def case_b_proof_matrix(lambdas) -> np.ndarray:
    """(m+2) x (m+2) coefficient matrix of y^(i-1) (1 - lam_i^2 y^2),
    (y + 1) prod (y + lam_i) and (y - 1) prod (y - lam_i)."""
    lam = _ascending(lambdas)
    if lam.ndim != 1:
        raise ValueError("proof matrices are built one lambda list at a time")
    m = lam.size
    M = np.zeros((m + 2, m + 2))
    for i in range(m):
        M[i, i] = 1.0
        M[i, i + 2] = -lam[i] ** 2
    mu = np.concatenate([[1.0], lam])
    M[m] = npoly.polyfromroots(-mu)
    M[m + 1] = npoly.polyfromroots(mu)
    return M


@dataclass(frozen=True)
class CaseAInequality:
    lhs: np.ndarray
    rhs: np.ndarray
    holds: np.ndarray
    termwise: np.ndarray


def case_a_inequality(lambdas, rtol: float = 1e-12) -> CaseAInequality:
    """Compare case_a_det with prod (1 + lam_i^2), term by term.

    termwise[..., k] tests (product of the k largest lam) * E_k >= E2_k, where
    E2 are the elementary symmetric functions of the squares. Summing these
    over k gives the full inequality, since sum_k E2_k = prod (1 + lam_i^2).
    Comparisons allow a relative slack of `rtol` for the cases that are
    exact equalities (k = 0 and k = m).
    """
    lam = _ascending(lambdas)
    E = elementary_symmetric(lam)
    E2 = elementary_symmetric(lam**2)
    top = np.concatenate([np.ones(lam.shape[:-1] + (1,)), _top_products(lam)], axis=-1)
    terms = top * E
    lhs = terms.sum(-1)
    rhs = np.prod(1 + lam**2, axis=-1)
    return CaseAInequality(
        lhs=lhs,
        rhs=rhs,
        holds=lhs >= rhs * (1 - rtol),
        termwise=terms >= E2 * (1 - rtol),
    )


@dataclass(frozen=True)
class CaseBProbe:
    lhs: np.ndarray
    rhs: np.ndarray
    slack: np.ndarray


def case_b_inequality_probe(lambdas) -> CaseBProbe:
    """p*q against prod (1 + lam_i^2)^2; slack = lhs / rhs (open inequality)."""
    lam = _ascending(lambdas)
    p, q = case_b_pq(lam)
    lhs = p * q
    rhs = np.prod(1 + lam**2, axis=-1) ** 2
    return CaseBProbe(lhs, rhs, lhs / rhs)


def _pow_diff(x, y, m: int):
    """sum_k x^(m-1-k) y^k, so that x^m - y^m = (x - y) * _pow_diff(x, y, m)."""
    return sum(x ** (m - 1 - k) * y**k for k in range(m))


@dataclass(frozen=True)
class SpecializedIdentity:
    sum_lhs: np.ndarray
    closed_rhs: np.ndarray
    product_lhs: np.ndarray
    product_rhs: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        """Relative gap between the two sides (zero where both vanish)."""
        scale = np.maximum(np.abs(self.sum_lhs), np.abs(self.closed_rhs))
        with np.errstate(invalid="ignore", divide="ignore"):
            res = np.abs(self.sum_lhs - self.closed_rhs) / scale
        return np.where(scale == 0, 0.0, res)

    @property
    def holds(self) -> np.ndarray:
        return self.product_lhs >= self.product_rhs


def specialized_identity(m: int, lam) -> SpecializedIdentity:
    """Case (B) with all lam_i = lam.

    sum_lhs = sum_k C(m, 2k+1) (lam^(4k+3) - lam^(4k+2)) and
    closed_rhs = (lam - 1) / 2 * [(1 + lam^2)^m - (1 - lam^2)^m].
    The product inequality
    [(1+lam^2)^m + S] * [(1+lam^2)^m - S'] >= (1+lam^2)^(2m), with
    S' = sum_k C(m, 2k+1) (lam^(4k+2) - lam^(4k+1)), is evaluated alongside.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lam must be positive")
    ks = range((m - 1) // 2 + 1)
    s = sum(math.comb(m, 2 * k + 1) * (lam ** (4 * k + 3) - lam ** (4 * k + 2)) for k in ks)
    s_prime = sum(math.comb(m, 2 * k + 1) * (lam ** (4 * k + 2) - lam ** (4 * k + 1)) for k in ks)
    sq = lam**2
    # (1+sq) - (1-sq) = 2 sq; the factored form avoids cancellation for small lam
    closed = 0.5 * (lam - 1) * 2 * sq * _pow_diff(1 + sq, 1 - sq, m)
    base = (1 + sq) ** m
    return SpecializedIdentity(
        sum_lhs=s,
        closed_rhs=closed,
        product_lhs=(base + s) * (base - s_prime),
        product_rhs=base**2,
    )
