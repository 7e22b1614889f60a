"""Exact sums of dyadic powers ``sum_j c_j * 2**e_j`` with rational ``e_j``.

Terms are grouped by the fractional part of their exponent.  Inside one class
the exponents differ by integers, so they collapse onto the smallest one with
integer shifts, which keeps the representation exact whether the coefficients
are ints, Fractions or integer numpy arrays (the latter evaluate a whole index
grid at once).  Distinct fractional classes are linearly independent over Q,
so equality testing is a per-class comparison.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterator, Tuple, Union

import mpmath
import numpy as np

Coef = Union[int, Fraction, np.ndarray]

_INT64_SAFE = 2 ** 62


def _frac_split(e: Fraction) -> Tuple[Fraction, int]:
    fl = math.floor(e)
    return e - fl, fl


def _shift(c: Coef, k: int) -> Coef:
    """c * 2**k for k >= 0, exactly."""
    if k == 0:
        return c
    if isinstance(c, np.ndarray):
        if c.dtype != object:
            bound = int(np.abs(c).max()) if c.size else 0
            if bound * 2 ** k >= _INT64_SAFE:
                c = c.astype(object)
        return c * (2 ** k)
    return c * (2 ** k)


def _is_zero(c: Coef) -> bool:
    if isinstance(c, np.ndarray):
        return not np.any(c)
    return c == 0


class Dyadic:
    """Immutable exact value ``sum c * 2**(base + f)``.

    ``terms`` maps the fractional part ``f`` in [0, 1) to ``(base, c)`` with an
    integer ``base``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Fraction, Tuple[int, Coef]] | None = None):
        self.terms: Dict[Fraction, Tuple[int, Coef]] = {}
        for f, (base, c) in (terms or {}).items():
            if not _is_zero(c):
                self.terms[f] = (base, c)

    # construction ---------------------------------------------------------
    @classmethod
    def monomial(cls, coef: Coef, exponent: Fraction | int = 0) -> "Dyadic":
        f, base = _frac_split(Fraction(exponent))
        return cls({f: (base, coef)})

    @classmethod
    def power_of_two(cls, exponent: Fraction | int) -> "Dyadic":
        return cls.monomial(1, exponent)

    @classmethod
    def of(cls, value: "Dyadic | int | Fraction") -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        return cls.monomial(value, 0)

    # structure --------------------------------------------------------------
    def items(self) -> Iterator[Tuple[Fraction, Coef]]:
        """Yield ``(exponent, coefficient)`` pairs."""
        for f, (base, c) in sorted(self.terms.items()):
            yield base + f, c

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def monomial_parts(self) -> Tuple[Coef, Fraction]:
        """(coefficient, exponent) of a single-term value; zero is (0, 0)."""
        if not self.terms:
            return 0, Fraction(0)
        if len(self.terms) != 1:
            raise ValueError(f"{self!r} is not a monomial")
        ((f, (base, c)),) = self.terms.items()
        return c, base + f

    def is_zero(self) -> bool:
        return not self.terms

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "Dyadic":
        other = Dyadic.of(other)
        out = dict(self.terms)
        for f, (b2, c2) in other.terms.items():
            if f in out:
                b1, c1 = out[f]
                lo = min(b1, b2)
                out[f] = (lo, _shift(c1, b1 - lo) + _shift(c2, b2 - lo))
            else:
                out[f] = (b2, c2)
        return Dyadic(out)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic({f: (b, -c) for f, (b, c) in self.terms.items()})

    def __sub__(self, other) -> "Dyadic":
        return self + (-Dyadic.of(other))

    def __rsub__(self, other) -> "Dyadic":
        return Dyadic.of(other) - self

    def __mul__(self, other) -> "Dyadic":
        other = Dyadic.of(other)
        acc = Dyadic()
        for f1, (b1, c1) in self.terms.items():
            for f2, (b2, c2) in other.terms.items():
                f, carry = _frac_split(f1 + f2)
                acc = acc + Dyadic({f: (b1 + b2 + carry, c1 * c2)})
        return acc

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Dyadic":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are exact")
        out = Dyadic.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale2(self, exponent: Fraction | int) -> "Dyadic":
        """Multiply by 2**exponent."""
        return self * Dyadic.power_of_two(exponent)

    def abs_terms(self) -> "Dyadic":
        """Termwise absolute value; equals |self| for monomials."""
        return Dyadic({f: (b, abs(c)) for f, (b, c) in self.terms.items()})

    def __abs__(self) -> "Dyadic":
        if self.is_monomial():
            return self.abs_terms()
        return -self if self.sign() < 0 else self

    def reciprocal_monomial(self) -> "Dyadic":
        c, e = self.monomial_parts()
        if isinstance(c, np.ndarray):
            if not np.all(np.abs(c) == 1):
                raise ValueError("array reciprocal needs unit coefficients")
            return Dyadic.monomial(c.copy(), -e)
        if c == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return Dyadic.monomial(Fraction(1) / c if abs(c) != 1 else c, -e)

    # comparison -------------------------------------------------------------
    def equals(self, other) -> Union[bool, np.ndarray]:
        """Exact equality; elementwise for array coefficients."""
        diff = self - Dyadic.of(other)
        if diff.is_zero():
            return True
        result: Union[bool, np.ndarray] = True
        for _, (_, c) in diff.terms.items():
            z = c == 0
            if isinstance(z, np.ndarray):
                result = np.logical_and(result, z)
            elif not z:
                return False
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Dyadic, int, Fraction)):
            return NotImplemented
        res = self.equals(other)
        return bool(np.all(res))

    __hash__ = None  # mutable-looking coefficients (arrays) make hashing unsafe

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec):
            total = mpmath.mpf(0)
            for e, c in self.items():
                if isinstance(c, np.ndarray):
                    raise TypeError("to_mpf needs scalar coefficients")
                c = Fraction(int(c)) if isinstance(c, np.integer) else Fraction(c)
                total += (mpmath.mpf(c.numerator) / c.denominator
                          * mpmath.power(2, mpmath.mpf(e.numerator) / e.denominator))
            return +total

    def to_float(self) -> Union[float, np.ndarray]:
        total: Union[float, np.ndarray] = 0.0
        for e, c in self.items():
            w = 2.0 ** float(e)
            if isinstance(c, np.ndarray):
                total = total + c.astype(float) * w
            else:
                total = total + float(c) * w
        return total

    def __float__(self) -> float:
        return float(self.to_float())

    def log2(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return mpmath.log(self.to_mpf(prec), 2)

    def exact_log2(self) -> Fraction:
        """Exponent e with self == 2**e; raises unless self is a power of two."""
        c, e = self.monomial_parts()
        if isinstance(c, np.ndarray) or c <= 0:
            raise ValueError(f"{self!r} is not a positive power of two")
        c = Fraction(c)
        for part, sgn in ((c.numerator, 1), (c.denominator, -1)):
            if part & (part - 1):
                raise ValueError(f"{self!r} is not a power of two")
            e += sgn * (part.bit_length() - 1)
        return e

    def sign(self) -> int:
        """Exact sign of a scalar value (certified by increasing precision)."""
        if self.is_zero():
            return 0
        if self.is_monomial():
            c, _ = self.monomial_parts()
            return 1 if c > 0 else -1
        magnitude = Dyadic({f: (b, abs(c)) for f, (b, c) in self.terms.items()})
        prec = 64
        # a nonzero element of Q(2^(1/d)) resolves at finite precision
        while prec <= 1 << 16:
            with mpmath.workprec(prec + 20):
                v = self.to_mpf(prec + 20)
                bound = magnitude.to_mpf(prec + 20) * mpmath.mpf(2) ** (-prec)
                if abs(v) > bound:
                    return 1 if v > 0 else -1
            prec *= 2
        raise ArithmeticError(f"could not certify the sign of {self!r}")

    def _cmp(self, other) -> int:
        return (self - Dyadic.of(other)).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        if not self.terms:
            return "Dyadic(0)"
        parts = []
        for e, c in self.items():
            cs = "array" if isinstance(c, np.ndarray) else str(c)
            parts.append(cs if e == 0 else f"{cs}*2^({e})")
        return "Dyadic(" + " + ".join(parts) + ")"


class DyadicRatio:
    """Exact quotient ``num / den`` of two scalar :class:`Dyadic` values."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        self.num = Dyadic.of(num)
        self.den = Dyadic.of(den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def of(cls, value) -> "DyadicRatio":
        if isinstance(value, DyadicRatio):
            return value
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        return cls(value)

    def __add__(self, other) -> "DyadicRatio":
        o = DyadicRatio.of(other)
        if self.den == o.den:
            return DyadicRatio(self.num + o.num, self.den)
        return DyadicRatio(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __mul__(self, other) -> "DyadicRatio":
        o = DyadicRatio.of(other)
        return DyadicRatio(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def _cross(self, other) -> int:
        o = DyadicRatio.of(other)
        s = (self.num * o.den - o.num * self.den).sign()
        return s * self.den.sign() * o.den.sign()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (DyadicRatio, Dyadic, int, Fraction)):
            return NotImplemented
        return self._cross(other) == 0

    __hash__ = None

    def __lt__(self, other) -> bool:
        return self._cross(other) < 0

    def __le__(self, other) -> bool:
        return self._cross(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cross(other) > 0

    def __ge__(self, other) -> bool:
        return self._cross(other) >= 0

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return self.num.to_mpf(prec) / self.den.to_mpf(prec)

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    def __repr__(self) -> str:
        return f"DyadicRatio({self.num!r} / {self.den!r})"
