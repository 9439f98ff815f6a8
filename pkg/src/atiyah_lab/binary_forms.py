"""Homogeneous polynomials in two variables x, y.

A form of degree d is stored as d+1 complex coefficients where index k
holds the coefficient of x**(d-k) * y**k. Setting x = 1 therefore gives
the ascending coefficient list of a polynomial in y.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class LinearForm:
    """The degree-1 form u*x + v*y."""

    u: complex
    v: complex

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "v", complex(self.v))
        if self.u == 0 and self.v == 0:
            raise ValueError("linear form must be nonzero")

    def __call__(self, x, y):
        return self.u * x + self.v * y

    def scaled(self, c: complex) -> "LinearForm":
        return LinearForm(c * self.u, c * self.v)

    def as_binary(self) -> "BinaryForm":
        return BinaryForm(np.array([self.u, self.v], dtype=complex))


@dataclass(frozen=True, eq=False)
class BinaryForm:
    """Binary form given by its coefficient vector (x-descending, y-ascending)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, x, y):
        d = self.degree
        return sum(c * x ** (d - k) * y**k for k, c in enumerate(self.coeffs))

    def __mul__(self, other: "BinaryForm | LinearForm") -> "BinaryForm":
        if isinstance(other, LinearForm):
            other = other.as_binary()
        return multiply(self, other)

    def dehomogenize(self) -> np.ndarray:
        """Ascending coefficients of the polynomial in y obtained at x = 1."""
        return self.coeffs.copy()

    def allclose(self, other: "BinaryForm", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return self.degree == other.degree and np.allclose(
            self.coeffs, other.coeffs, rtol=rtol, atol=atol
        )


def multiply(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Product of two binary forms (direct coefficient convolution)."""
    return BinaryForm(np.convolve(f.coeffs, g.coeffs))


def product_of_linear_forms(forms: Iterable[LinearForm]) -> BinaryForm:
    """Left fold of `multiply` over a nonempty sequence of linear forms."""
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one linear form")
    coeffs = reduce(
        lambda acc, l: np.convolve(acc, np.array([l.u, l.v], dtype=complex)),
        forms[1:],
        np.array([forms[0].u, forms[0].v], dtype=complex),
    )
    return BinaryForm(coeffs)
