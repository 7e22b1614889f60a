"""Closed-form l^theta(Z^3) membership of psi^(a,b) for both group families.

Every bound is evaluated in exact rational arithmetic; ``1/theta`` is 0 for
theta = inf.  Each answer carries the list of inequalities it checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .exponents import INF, ExtReal, fmt, is_inf, parse_rational, reciprocal
from .groups import GroupSpec, Standard

def _exact(x) -> ExtReal:
    return x if is_inf(x) else Fraction(x)


_RELATIONS = {
    "<": lambda x, y: x < y,
    "<=": lambda x, y: x <= y,
    ">": lambda x, y: x > y,
    ">=": lambda x, y: x >= y,
}


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: ExtReal
    relation: str
    rhs: ExtReal
    satisfied: bool

    @classmethod
    def check(cls, name: str, lhs, relation: str, rhs) -> "Condition":
        lhs, rhs = _exact(lhs), _exact(rhs)
        return cls(name, lhs, relation, rhs, _RELATIONS[relation](lhs, rhs))

    @property
    def slack(self) -> ExtReal:
        """Distance of the two sides; how far the condition is from flipping."""
        if is_inf(self.lhs) or is_inf(self.rhs):
            return 0 if self.lhs == self.rhs else INF
        return abs(self.lhs - self.rhs)

    def __str__(self) -> str:
        mark = "ok" if self.satisfied else "FAILS"
        return f"{self.name}: {fmt(self.lhs)} {self.relation} {fmt(self.rhs)}  [{mark}]"


@dataclass
class MembershipAnswer:
    member: bool
    conditions: List[Condition] = field(default_factory=list)
    case: str = ""

    @classmethod
    def from_conditions(cls, conditions: List[Condition], case: str) -> "MembershipAnswer":
        return cls(all(c.satisfied for c in conditions), list(conditions), case)

    @property
    def margin(self) -> Fraction:
        return min(c.slack for c in self.conditions)

    @property
    def failed_first(self) -> Optional[str]:
        return next((c.name for c in self.conditions if not c.satisfied), None)


def standard_case(l1: Fraction, l2: Fraction) -> str:
    """Case label for sorted exponents; ties go to the first matching of ii, iii, i."""
    if l2 <= 1:
        return "ii"
    if l1 <= 1:
        return "iii"
    return "i"


def applicable_standard_cases(l1: Fraction, l2: Fraction) -> List[str]:
    cases = []
    if l2 <= 1:
        cases.append("ii")
    if l1 <= 1 <= l2:
        cases.append("iii")
    if 1 <= l1:
        cases.append("i")
    return cases


def _sorted_pair(l1, l2) -> Tuple[Fraction, Fraction]:
    l1, l2 = parse_rational(l1), parse_rational(l2)
    return (l1, l2) if l1 <= l2 else (l2, l1)


def _standard_conditions(case: str, l1, l2, a, b, s) -> List[Condition]:
    """Conditions of one case; ``s`` is 1/theta (0 for theta = inf)."""
    if case == "i":
        lo, hi = (l1 + l2 - 2) * s + b, (l1 - l2) * s + b * l2
    elif case == "ii":
        lo, hi = (l2 - l1) * s + b * l1, (l1 + l2 - 2) * s + b
    elif case == "iii":
        lo, hi = (l2 - l1) * s + b * l1, (l1 - l2) * s + b * l2
    else:
        raise ValueError(f"unknown case {case!r}")
    if s == 0:
        return [Condition.check("lower<=a", lo, "<=", a), Condition.check("a<=upper", a, "<=", hi)]
    return [
        Condition.check("b*theta>2", b / s, ">", 2),
        Condition.check("lower<a", lo, "<", a),
        Condition.check("a<upper", a, "<", hi),
    ]


def psi_in_ltheta_standard(l1, l2, a, b, theta: ExtReal, case: Optional[str] = None) -> MembershipAnswer:
    """psi^(a,b) in l^theta(Z^3) for the standard group H^(l1,l2).

    ``case`` forces one of "i", "ii", "iii" (it must apply to the sorted pair);
    by default the canonical case is used.
    """
    a, b = parse_rational(a), parse_rational(b)
    if b < 0:
        raise ValueError(f"b must be >= 0, got {b}")
    l1, l2 = _sorted_pair(l1, l2)
    if case is None:
        case = standard_case(l1, l2)
    elif case not in applicable_standard_cases(l1, l2):
        raise ValueError(f"case {case} does not apply to ({l1}, {l2})")
    s = reciprocal(theta)
    return MembershipAnswer.from_conditions(_standard_conditions(case, l1, l2, a, b, s), case)


def psi_in_ltheta_toeplitz(delta, a, b, theta: ExtReal) -> MembershipAnswer:
    """psi^(a,b) in l^theta(Z^3) for the Toeplitz group H^delta."""
    delta, a, b = parse_rational(delta), parse_rational(a), parse_rational(b)
    if b < 0:
        raise ValueError(f"b must be >= 0, got {b}")
    s = reciprocal(theta)
    if delta >= 0:
        lo, hi, case = b * (1 - 2 * delta), -3 * delta * s + b, "delta>=0"
    else:
        lo, hi, case = -3 * delta * s + b, b * (1 - 2 * delta), "delta<0"
    if s == 0:
        conds = [Condition.check("lower<=a", lo, "<=", a), Condition.check("a<=upper", a, "<=", hi)]
    else:
        conds = [
            Condition.check("b*theta>2", b / s, ">", 2),
            Condition.check("lower<a", lo, "<", a),
            Condition.check("a<upper", a, "<", hi),
        ]
    return MembershipAnswer.from_conditions(conds, case)


def psi_in_ltheta(group: GroupSpec, a, b, theta: ExtReal) -> MembershipAnswer:
    if isinstance(group, Standard):
        return psi_in_ltheta_standard(group.lambda1, group.lambda2, a, b, theta)
    return psi_in_ltheta_toeplitz(group.delta, a, b, theta)


def theta_is_finite(theta: ExtReal) -> bool:
    return not is_inf(theta)
