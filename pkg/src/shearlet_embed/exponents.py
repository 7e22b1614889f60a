"""Exact exponent arithmetic on (0, inf].

Finite exponents are :class:`fractions.Fraction` instances, infinity is
``math.inf``.  Every derived quantity (conjugate exponent, ``q_down``, the
shift ``gamma`` and the summability exponent ``theta``) is computed without
floating point so that boundary cases of the embedding conditions are decided
exactly.
"""
from __future__ import annotations

import math
import re
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

INF = math.inf

ExtReal = Union[Fraction, float]  # float only ever holds math.inf
Number = Union[int, str, Fraction, float]

_RATIO_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def parse_rational(text: Number) -> Fraction:
    """Parse ``"num/den"``, integers or decimal strings into an exact Fraction.

    Decimals are read as exact fractions (``"0.1"`` is ``1/10``, not the
    nearest binary double).  Floats are only accepted when integral, to keep
    binary rounding out of the decision engine.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if math.isfinite(text) and text == int(text):
            return Fraction(int(text))
        raise ValueError(f"refusing inexact float {text!r}; pass a string")
    s = str(text).strip()
    m = _RATIO_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    try:
        d = Decimal(s)
    except InvalidOperation:
        raise ValueError(f"malformed rational: {text!r}") from None
    if not d.is_finite():
        raise ValueError(f"not a finite rational: {text!r}")
    return Fraction(d)


def parse_ext(text: Number) -> ExtReal:
    """Parse an exponent in (0, inf]; ``"inf"`` maps to ``math.inf``."""
    if isinstance(text, float) and math.isinf(text):
        value: ExtReal = text
    elif isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo", "∞"):
        value = INF
    else:
        value = parse_rational(text)
    if value == -INF or value <= 0:
        raise ValueError(f"exponent must lie in (0, inf], got {text!r}")
    return value


def is_inf(x: ExtReal) -> bool:
    return isinstance(x, float) and math.isinf(x)


def reciprocal(x: ExtReal) -> Fraction:
    """1/x with the convention 1/inf = 0."""
    if is_inf(x):
        return Fraction(0)
    if x <= 0:
        raise ValueError(f"reciprocal needs x > 0, got {x}")
    return 1 / Fraction(x)


def from_reciprocal(inv: Fraction) -> ExtReal:
    """Inverse of :func:`reciprocal`: 0 maps back to inf."""
    if inv == 0:
        return INF
    if inv < 0:
        raise ValueError(f"negative reciprocal {inv}")
    return 1 / inv


def conjugate(p: ExtReal) -> ExtReal:
    """Conjugate exponent; inf for p <= 1, p/(p-1) for 1 < p < inf, 1 for p = inf."""
    if is_inf(p):
        return Fraction(1)
    p = Fraction(p)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    if p <= 1:
        return INF
    return p / (p - 1)


def q_down(q: ExtReal) -> ExtReal:
    """min{q, q'}."""
    return min(q, conjugate(q))


def gamma(p: ExtReal, q: ExtReal, r: ExtReal) -> Fraction:
    """The exponent shift 1/2 - 1/r + 1/p - 1/q."""
    return Fraction(1, 2) - reciprocal(r) + reciprocal(p) - reciprocal(q)


def inv_theta(q_eff: ExtReal, r: ExtReal) -> Fraction:
    """1/theta for the exponent pair (q_eff, r): 0 when r <= q_eff, else 1/q_eff - 1/r."""
    if r <= q_eff:
        return Fraction(0)
    return reciprocal(q_eff) - reciprocal(r)


def theta_from(q: ExtReal, r: ExtReal) -> ExtReal:
    """Summability exponent q_down * (r / q_down)'."""
    return from_reciprocal(inv_theta(q_down(q), r))


def fmt(x: ExtReal) -> str:
    """Render an exact value as ``"num/den"``, an integer, or ``"inf"``."""
    if is_inf(x):
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
