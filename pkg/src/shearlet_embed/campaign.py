"""Analytic-versus-oracle verification on a grid of queries kept away from
the decision boundaries."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath

from .analytic import MembershipAnswer, psi_in_ltheta
from .exponents import INF, ExtReal, fmt
from .groups import GroupSpec, Standard, Toeplitz
from .oracle import (
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    OracleVerdict,
    Thresholds,
    TruncationSchedule,
    classify_membership,
    default_schedule,
)
from .sequences import SummabilityQuery

WORKERS_ENV = "SHEARLET_EMBED_WORKERS"

GRID_GROUPS: Tuple[GroupSpec, ...] = tuple(
    [Standard(*lam) for lam in [(1, 1), (1, 2), (2, 3), ("1/2", "1/2"), ("1/2", 2), (0, 1), (-1, 2)]]
    + [Toeplitz(d) for d in [-1, "-1/2", 0, "1/2", 1]]
)
GRID_THETAS: Tuple[ExtReal, ...] = (Fraction(1), Fraction(2), Fraction(4), INF)
GRID_BS: Tuple[Fraction, ...] = (Fraction(1), Fraction(3))


def worker_count(default: Optional[int] = None) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        n = int(raw)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return default or os.cpu_count() or 1


def _spread(items: Sequence, count: int) -> List:
    """Up to ``count`` evenly spaced elements, endpoints included."""
    if len(items) <= count:
        return list(items)
    idx = sorted({round(i * (len(items) - 1) / (count - 1)) for i in range(count)})
    return [items[i] for i in idx]


def _interval(ans: MembershipAnswer) -> Tuple[Fraction, Fraction]:
    lo = next(c.lhs for c in ans.conditions if c.name.startswith("lower"))
    hi = next(c.rhs for c in ans.conditions if c.name.startswith("a<"))
    return lo, hi


def margin_grid(margin: Fraction = Fraction(1, 4), step: Fraction = Fraction(1, 8),
                a_range: Tuple[int, int] = (-8, 16), per_side: int = 3, inside: int = 6,
                groups: Iterable[GroupSpec] = GRID_GROUPS, thetas: Iterable[ExtReal] = GRID_THETAS,
                bs: Iterable[Fraction] = GRID_BS) -> List[Tuple[SummabilityQuery, MembershipAnswer]]:
    """Queries whose every analytic condition holds or fails with slack >= margin.

    Per (group, theta, b): up to ``inside`` spread-out members and the
    ``per_side`` non-members closest to each end of the member interval.
    """
    out = []
    lo_i, hi_i = int(a_range[0] / step), int(a_range[1] / step)
    for group in groups:
        for theta in thetas:
            for b in bs:
                answers = []
                for i in range(lo_i, hi_i + 1):
                    a = step * i
                    ans = psi_in_ltheta(group, a, b, theta)
                    if ans.margin >= margin:
                        answers.append((a, ans))
                if not answers:
                    continue
                lo, hi = _interval(answers[0][1])
                members = [x for x in answers if x[1].member]
                below = [x for x in answers if not x[1].member and x[0] <= lo]
                above = [x for x in answers if not x[1].member and x[0] >= hi]
                rest = [x for x in answers if not x[1].member and lo < x[0] < hi]
                chosen = (_spread(members, inside) + below[-per_side:] + above[:per_side]
                          + _spread(rest, per_side))
                for a, ans in sorted(chosen, key=lambda x: x[0]):
                    out.append((SummabilityQuery(a, b, theta, group), ans))
    return out


@dataclass
class CheckRecord:
    query: SummabilityQuery
    analytic_member: bool
    margin: Fraction
    oracle: OracleVerdict

    @property
    def boundary(self) -> bool:
        return self.margin == 0

    @property
    def contradiction(self) -> bool:
        if self.boundary:
            return False
        c = self.oracle.classification
        return (self.analytic_member and c == DIVERGENT) or (not self.analytic_member and c == CONVERGENT)

    @property
    def inconclusive(self) -> bool:
        return self.oracle.classification == INCONCLUSIVE

    def to_dict(self) -> dict:
        g = self.query.group
        return {
            "group": str(g),
            "a": fmt(self.query.a),
            "b": fmt(self.query.b),
            "theta": fmt(self.query.theta),
            "analytic": "member" if self.analytic_member else "non-member",
            "margin": fmt(self.margin),
            "oracle": self.oracle.classification,
            "growth_rate": mpmath.nstr(mpmath.mpf(self.oracle.growth_rate), 17),
            "totals": [mpmath.nstr(s.total, 17) for s in self.oracle.statistics],
            "contradiction": self.contradiction,
        }


def _check_one(args) -> CheckRecord:
    query, member, margin, schedule, thresholds = args
    sched = schedule if schedule is not None else default_schedule(query.group)
    return CheckRecord(query, member, margin, classify_membership(query, sched, thresholds))


def run_checks(items: Sequence[Tuple[SummabilityQuery, MembershipAnswer]],
               schedule: Optional[TruncationSchedule] = None,
               thresholds: Thresholds = Thresholds(),
               workers: Optional[int] = None) -> List[CheckRecord]:
    """Oracle classification for every item; results keep the input order."""
    jobs = [(q, ans.member, ans.margin, schedule, thresholds) for q, ans in items]
    workers = worker_count(workers)
    if workers == 1 or len(jobs) < 2:
        return [_check_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_check_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass
class CampaignSummary:
    total: int
    members: int
    non_members: int
    agreements: int
    inconclusive: int
    contradictions: int
    boundary: int

    @property
    def inconclusive_rate(self) -> float:
        return self.inconclusive / self.total if self.total else 0.0

    @property
    def passed(self) -> bool:
        return self.contradictions == 0

    def to_dict(self) -> dict:
        return {
            "total": self.total, "members": self.members, "non_members": self.non_members,
            "agreements": self.agreements, "inconclusive": self.inconclusive,
            "contradictions": self.contradictions, "boundary": self.boundary,
            "inconclusive_rate": mpmath.nstr(mpmath.mpf(self.inconclusive_rate), 17),
        }


def summarize(records: Sequence[CheckRecord]) -> CampaignSummary:
    agree = sum(
        1 for r in records
        if (r.analytic_member and r.oracle.classification == CONVERGENT)
        or (not r.analytic_member and r.oracle.classification == DIVERGENT)
    )
    return CampaignSummary(
        total=len(records),
        members=sum(r.analytic_member for r in records),
        non_members=sum(not r.analytic_member for r in records),
        agreements=agree,
        inconclusive=sum(r.inconclusive for r in records),
        contradictions=sum(r.contradiction for r in records),
        boundary=sum(r.boundary for r in records),
    )

