"""The two three-dimensional shearlet dilation families and their discretization.

``matrix_B`` is the well-spread family of the group; ``matrix_A`` is the
inverse transpose of ``matrix_B`` at ``-n``.  Reflecting ``n`` is a bijection
of the index set, so summability is unaffected, and with this normalization
``||A||`` grows like ``2^n + 2^(n*l1) + 2^(n*l2) + ...`` for positive ``n``.

Index arguments ``m1`` and ``m2`` may be integer numpy arrays, in which case
every matrix entry carries an array of coefficients and the whole grid is
evaluated exactly in one pass.  ``n`` is always a Python int because the
entry exponents depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import mpmath
import numpy as np

from .dyadic import Dyadic, DyadicRatio
from .exponents import ExtReal, Number, parse_rational, reciprocal

IntOrArray = Union[int, np.ndarray]


@dataclass(frozen=True)
class Standard:
    """Standard shearlet group with scaling exponents (lambda1, lambda2)."""

    lambda1: Fraction
    lambda2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambda1", parse_rational(self.lambda1))
        object.__setattr__(self, "lambda2", parse_rational(self.lambda2))

    def __str__(self) -> str:
        return f"Standard({self.lambda1}, {self.lambda2})"


@dataclass(frozen=True)
class Toeplitz:
    """Toeplitz shearlet group with parameter delta."""

    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", parse_rational(self.delta))

    def __str__(self) -> str:
        return f"Toeplitz({self.delta})"


GroupSpec = Union[Standard, Toeplitz]


@dataclass(frozen=True)
class FamilyIndex:
    n: int
    m1: IntOrArray = 0
    m2: IntOrArray = 0
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")
        if not isinstance(self.n, (int, np.integer)):
            raise TypeError("n must be an integer scalar")

    def reflected(self) -> "FamilyIndex":
        return FamilyIndex(-int(self.n), self.m1, self.m2, self.eps)


@dataclass(frozen=True)
class WeightSpec:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", parse_rational(self.alpha))
        object.__setattr__(self, "beta", parse_rational(self.beta))
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")


def diagonal_exponents(group: GroupSpec) -> Tuple[Fraction, Fraction, Fraction]:
    """Exponents of the diagonal scaling 2^n, 2^(n*e1), 2^(n*e2)."""
    if isinstance(group, Standard):
        return Fraction(1), group.lambda1, group.lambda2
    return Fraction(1), 1 - group.delta, 1 - 2 * group.delta


def canonical_pair(group: GroupSpec) -> Tuple[Fraction, Fraction]:
    """Sorted pair of non-leading diagonal exponents."""
    _, e1, e2 = diagonal_exponents(group)
    return (e1, e2) if e1 <= e2 else (e2, e1)


def det_exponent_rate(group: GroupSpec) -> Fraction:
    """c with |det A_n| = 2^(c*n): 1 + l1 + l2, or 3(1 - delta)."""
    return sum(diagonal_exponents(group), Fraction(0))


class IndexedMatrix:
    """3x3 matrix of exact dyadic entries (rows of :class:`Dyadic`)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows: List[List[Dyadic]] = [[Dyadic.of(x) for x in row] for row in rows]
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("IndexedMatrix must be 3x3")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "IndexedMatrix":
        return IndexedMatrix([[self.rows[j][i] for j in range(3)] for i in range(3)])

    def __matmul__(self, other: "IndexedMatrix") -> "IndexedMatrix":
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = Dyadic()
                for k in range(3):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return IndexedMatrix(out)

    def equals(self, other: "IndexedMatrix"):
        """Entrywise exact equality (elementwise over array coefficients)."""
        result = True
        for i in range(3):
            for j in range(3):
                result = np.logical_and(result, self.rows[i][j].equals(other.rows[i][j]))
        return result

    def is_identity(self):
        return self.equals(identity())

    def is_lower_triangular(self) -> bool:
        return all(self.rows[i][j].is_zero() for i in range(3) for j in range(i + 1, 3))

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j].is_zero() for i in range(3) for j in range(i))

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def __repr__(self) -> str:
        return "IndexedMatrix(" + "; ".join(", ".join(repr(x) for x in row) for row in self.rows) + ")"


def identity() -> IndexedMatrix:
    return IndexedMatrix([[1 if i == j else 0 for j in range(3)] for i in range(3)])


def _mono(coef, exponent) -> Dyadic:
    return Dyadic.monomial(coef, exponent)


def matrix_B(group: GroupSpec, idx: FamilyIndex) -> IndexedMatrix:
    """Element B_{n,m1,m2,eps} of the well-spread family (upper triangular)."""
    n, m1, m2, eps = int(idx.n), idx.m1, idx.m2, idx.eps
    _, e1, e2 = diagonal_exponents(group)
    top = [_mono(eps, n), _mono(eps * m1, n), _mono(eps * m2, n)]
    if isinstance(group, Standard):
        mid = [0, _mono(eps, n * e1), 0]
    else:
        mid = [0, _mono(eps, n * e1), _mono(eps * m1, n * e1)]
    bottom = [0, 0, _mono(eps, n * e2)]
    return IndexedMatrix([top, mid, bottom])


def inverse_transpose_upper(b: IndexedMatrix) -> IndexedMatrix:
    """Exact (B^-1)^T of an upper triangular matrix with monomial diagonal.

    Back substitution; the diagonal must be invertible as a monomial
    (unit coefficients when entries carry index arrays).
    """
    if not b.is_upper_triangular():
        raise ValueError("expected an upper triangular matrix")
    d = [b[i, i].reciprocal_monomial() for i in range(3)]
    inv = [[Dyadic() for _ in range(3)] for _ in range(3)]
    for j in range(3):
        inv[j][j] = d[j]
        for i in range(j - 1, -1, -1):
            acc = Dyadic()
            for k in range(i + 1, j + 1):
                if not b[i, k].is_zero() and not inv[k][j].is_zero():
                    acc = acc + b[i, k] * inv[k][j]
            inv[i][j] = -(acc * d[i])
    return IndexedMatrix(inv).transpose()


def matrix_A(group: GroupSpec, idx: FamilyIndex) -> IndexedMatrix:
    """A := (B at -n)^-T, lower triangular."""
    return inverse_transpose_upper(matrix_B(group, idx.reflected()))


def matrix_A_closed_form(group: GroupSpec, idx: FamilyIndex) -> IndexedMatrix:
    """Closed form of :func:`matrix_A`, written out by hand (cross-check only)."""
    n, m1, m2, eps = int(idx.n), idx.m1, idx.m2, idx.eps
    _, e1, e2 = diagonal_exponents(group)
    if isinstance(group, Standard):
        rows = [
            [_mono(eps, n), 0, 0],
            [_mono(-eps * m1, n * e1), _mono(eps, n * e1), 0],
            [_mono(-eps * m2, n * e2), 0, _mono(eps, n * e2)],
        ]
    else:
        rows = [
            [_mono(eps, n), 0, 0],
            [_mono(-eps * m1, n * e1), _mono(eps, n * e1), 0],
            [_mono(eps * (m1 * m1 - m2), n * e2), _mono(-eps * m1, n * e2), _mono(eps, n * e2)],
        ]
    return IndexedMatrix(rows)


def norm_sum(m: IndexedMatrix) -> Dyadic:
    """Entrywise absolute sum ||h|| = sum |h_ij| (entries must be monomials)."""
    acc = Dyadic()
    for row in m.rows:
        for x in row:
            if not x.is_monomial():
                x = abs(x)
            acc = acc + x.abs_terms()
    return acc


def det_abs(m: IndexedMatrix) -> Dyadic:
    """|det m|, exact."""
    r = m.rows
    det = (
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    )
    return abs(det)


def norm_profile(group: GroupSpec, n: int) -> Tuple[Dyadic, Dyadic, Dyadic]:
    """Coefficients (c0, c1, c2) with ||A_{n,m1,m2}|| = c0 + c1*|m1| + c2*|t|.

    For standard groups t = m2; for Toeplitz groups t = m1^2 - m2, a bijective
    reindexing of Z^2 at fixed m1.
    """
    n = int(n)
    _, e1, e2 = diagonal_exponents(group)
    p0, p1, p2 = Dyadic.power_of_two(n), Dyadic.power_of_two(n * e1), Dyadic.power_of_two(n * e2)
    c0 = p0 + p1 + p2
    if isinstance(group, Standard):
        return c0, p1, p2
    return c0, p1 + p2, p2


def _real_power(value: Dyadic, exponent: Fraction, prec: int = 192) -> mpmath.mpf:
    with mpmath.workprec(prec):
        return mpmath.power(value.to_mpf(prec), mpmath.mpf(exponent.numerator) / exponent.denominator)


def power_value(value: Dyadic, exponent: Fraction):
    """value**exponent: exact for integer exponents, high precision otherwise."""
    if exponent.denominator == 1:
        k = exponent.numerator
        return DyadicRatio(value ** k) if k >= 0 else DyadicRatio(1, value ** (-k))
    return _real_power(value, exponent)


def _times(x, y):
    if isinstance(x, mpmath.mpf) or isinstance(y, mpmath.mpf):
        return _as_mpf(x) * _as_mpf(y)
    return DyadicRatio.of(x) * DyadicRatio.of(y)


def _as_mpf(x) -> mpmath.mpf:
    if isinstance(x, mpmath.mpf):
        return x
    return DyadicRatio.of(x).to_mpf(192)


def weight_u(group: GroupSpec, idx: FamilyIndex, ws: WeightSpec, r: ExtReal):
    """Discretized weight 2^(-n*c*(1/2 - 1/r)) 2^(-n*alpha) ||A||^beta."""
    n = int(idx.n)
    scale = Dyadic.power_of_two(-n * det_exponent_rate(group) * (Fraction(1, 2) - reciprocal(r)) - n * ws.alpha)
    return _times(DyadicRatio(scale), power_value(norm_sum(matrix_A(group, idx)), ws.beta))


def weight_w(group: GroupSpec, idx: FamilyIndex, p: ExtReal, q: ExtReal, k: int):
    """Sobolev weight |det A|^(1/p - 1/q) (1 + ||A||^k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = matrix_A(group, idx)
    det_e = det_abs(a).exact_log2()
    scale = Dyadic.power_of_two(det_e * (reciprocal(p) - reciprocal(q)))
    return DyadicRatio(scale * (1 + norm_sum(a) ** int(k)))
