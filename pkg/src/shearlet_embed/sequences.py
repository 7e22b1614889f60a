"""The summability sequences psi^(a,b) and zeta, octant classification and
the dominant-term table for the standard groups."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Union

import mpmath
import numpy as np

from .dyadic import Dyadic, DyadicRatio
from .exponents import ExtReal, gamma, parse_rational
from .groups import (
    FamilyIndex,
    GroupSpec,
    Standard,
    det_exponent_rate,
    matrix_A,
    norm_sum,
    power_value,
)

Value = Union[DyadicRatio, mpmath.mpf]


@dataclass(frozen=True)
class SummabilityQuery:
    a: Fraction
    b: Fraction
    theta: ExtReal
    group: GroupSpec

    def __post_init__(self):
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "b", parse_rational(self.b))
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")


@dataclass(frozen=True, order=True)
class OctantId:
    half: str  # "+" for n >= 0, "-" for n < 0
    index: int

    def __post_init__(self):
        if self.half not in ("+", "-") or self.index not in (1, 2, 3, 4):
            raise ValueError(f"no octant M_{self.index}^{self.half}")

    def __str__(self) -> str:
        return f"M{self.index}{self.half}"


def shift_a(group: GroupSpec, p: ExtReal, q: ExtReal, r: ExtReal, alpha) -> Fraction:
    """alpha + c * gamma(p, q, r) where |det A_n| = 2^(c n)."""
    return parse_rational(alpha) + det_exponent_rate(group) * gamma(p, q, r)


def psi(a, b, group: GroupSpec, n: int, m1: int, m2: int) -> Value:
    """2^(n a) ||A_{n,m1,m2,+1}||^(-b); exact when b is an integer."""
    a, b = parse_rational(a), parse_rational(b)
    if b < 0:
        raise ValueError("psi needs b >= 0")
    norm = norm_sum(matrix_A(group, FamilyIndex(n, m1, m2, 1)))
    decay = power_value(norm, -b)
    if isinstance(decay, DyadicRatio):
        return decay * DyadicRatio(Dyadic.power_of_two(n * a))
    with mpmath.workprec(192):
        return decay * mpmath.power(2, n * (mpmath.mpf(a.numerator) / a.denominator))


def zeta(group: GroupSpec, p: ExtReal, q: ExtReal, r: ExtReal, alpha, beta, k: int,
         n: int, m1: int, m2: int, eps: int = 1) -> Value:
    """w/u at one index, written as psi^(a, beta) + psi^(a, beta - k).

    ``eps`` is accepted for completeness; both sign sheets carry equal values.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    beta = parse_rational(beta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    a = shift_a(group, p, q, r, alpha)
    # psi^(a, beta - k) may have a negative second exponent: ||A||^(k - beta)
    first = psi(a, beta, group, n, m1, m2)
    norm = norm_sum(matrix_A(group, FamilyIndex(n, m1, m2, eps)))
    second_decay = power_value(norm, Fraction(k) - beta)
    if isinstance(first, DyadicRatio) and isinstance(second_decay, DyadicRatio):
        return first + second_decay * DyadicRatio(Dyadic.power_of_two(n * a))
    with mpmath.workprec(192):
        two_na = mpmath.power(2, n * (mpmath.mpf(a.numerator) / a.denominator))
        return _mp(first) + _mp(second_decay) * two_na


def _mp(x) -> mpmath.mpf:
    return x if isinstance(x, mpmath.mpf) else x.to_mpf(192)


# -- octants --------------------------------------------------------------

def _le(c1, e1: Fraction, c2, e2: Fraction):
    """c1 * 2^e1 <= c2 * 2^e2 for nonnegative integer (array) coefficients, exactly."""
    d = e2 - e1
    shape = np.shape(c1) if np.ndim(c1) else np.shape(c2)
    x = np.broadcast_to(np.atleast_1d(c1), shape or (1,)).ravel()
    y = np.broadcast_to(np.atleast_1d(c2), shape or (1,)).ravel()
    # floating estimate of log2(x / y) - d, then settle near-ties exactly
    with np.errstate(divide="ignore", invalid="ignore"):
        gap = np.log2(x.astype(float)) - np.log2(y.astype(float)) - float(d)
    res = np.where(x == 0, True, np.where(y == 0, False, gap <= 0))
    pn, qd = d.numerator, d.denominator
    for i in np.nonzero((np.abs(gap) < 1e-9) & (x != 0) & (y != 0))[0]:
        # x <= y 2^(p/q)  <=>  x^q <= y^q 2^p
        lhs, rhs = int(x[i]) ** qd, int(y[i]) ** qd
        res[i] = lhs * 2 ** max(-pn, 0) <= rhs * 2 ** max(pn, 0)
    return res.reshape(shape) if shape else bool(res[0])


def octant_conditions(l1: Fraction, l2: Fraction, n: int, m1, m2):
    """Membership flags for all eight octants (elementwise over arrays)."""
    a1, a2 = np.abs(np.asarray(m1)), np.abs(np.asarray(m2))
    one = np.ones_like(a1)
    e1, e2 = n * l1, n * l2
    e_diag = Fraction(n) if n < 0 else e2
    p = n >= 0
    lead2 = _le(a1, e1, a2, e2)          # 2^(n l1)|m1| <= 2^(n l2)|m2|
    lead1 = _le(a2, e2, a1, e1)          # 2^(n l2)|m2| <= 2^(n l1)|m1|
    out = {
        OctantId("+" if p else "-", 1): lead2 & _le(one, e_diag, a2, e2),
        OctantId("+" if p else "-", 2): lead2 & _le(a2, e2, one, e_diag),
        OctantId("+" if p else "-", 3): lead1 & _le(one, e_diag, a1, e1),
        OctantId("+" if p else "-", 4): lead1 & _le(a1, e1, one, e_diag),
    }
    other = "-" if p else "+"
    for i in range(1, 5):
        out[OctantId(other, i)] = np.zeros_like(lead2, dtype=bool) if np.ndim(lead2) else False
    return out


def octant_members(l1, l2, n: int, m1: int, m2: int) -> FrozenSet[OctantId]:
    """The octants M_i^+- containing (n, m1, m2); caller normalizes l1 <= l2."""
    l1, l2 = parse_rational(l1), parse_rational(l2)
    if l1 > l2:
        raise ValueError("octants are defined for lambda1 <= lambda2")
    flags = octant_conditions(l1, l2, n, m1, m2)
    return frozenset(o for o, f in flags.items() if bool(f))


_DOMINANT = {1: "m2", 2: "diag", 3: "m1", 4: "diag"}


def dominant_norm_term(octant: OctantId, l1, l2, n: int, m1: int, m2: int) -> Dyadic:
    """Leading term of ||A|| on an octant, for 1 <= lambda1 <= lambda2.

    On these octants the norm lies between this term and five times it.
    """
    l1, l2 = parse_rational(l1), parse_rational(l2)
    if not (1 <= l1 <= l2):
        raise ValueError("dominant terms are certified only for 1 <= lambda1 <= lambda2")
    if octant not in octant_members(l1, l2, n, m1, m2):
        raise ValueError(f"({n}, {m1}, {m2}) is not in {octant}")
    kind = _DOMINANT[octant.index]
    if kind == "m2":
        return Dyadic.monomial(abs(m2), n * l2)
    if kind == "m1":
        return Dyadic.monomial(abs(m1), n * l1)
    return Dyadic.power_of_two(n * l2 if n >= 0 else n)


def tail_sum_estimate(m0: int, rho) -> float:
    """m0^(1 + rho), the order of sum_{m >= m0} m^rho for rho < -1."""
    rho = parse_rational(rho)
    if rho >= -1:
        raise ValueError(f"tail diverges for rho = {rho} >= -1")
    if m0 < 1:
        raise ValueError("m0 must be a positive integer")
    return math.pow(m0, float(1 + rho))
