"""Numerical l^theta classifier for psi^(a,b), independent of the closed forms.

For every group the norm of A_{n,m1,m2} has the shape c0(n) + c1(n)|x| + c2(n)|y|
with (x, y) = (m1, m2) for standard groups and (x, y) = (m1, m1^2 - m2) for
Toeplitz groups (a bijection of Z^2 at fixed m1).  Truncation boxes are taken
in (x, y), so each n contributes a rectangle sum

    R = sum_{x, y} (c0 + c1|x| + c2|y|)^(-s),   s = b*theta,

which is evaluated without enumerating the rectangle through

    z^(-s) = 1/Gamma(s) * int_0^inf t^(s-1) exp(-z t) dt,

where the x and y sums under the integral are finite geometric series.  The
integral is a trapezoid rule in log t (the integrand is analytic in a strip,
so the rule converges geometrically).  This makes boxes with M ~ 2^170
affordable, which the slow octant-boundary growth of the m-directions needs.

Per-n rectangle sums are computed as float64 logarithms; level totals and
increments are accumulated in fixed order in 128-bit mpmath floats.  Level
increments are summed directly from the new shells, never by subtracting
totals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .exponents import ExtReal, is_inf
from .groups import FamilyIndex, GroupSpec, diagonal_exponents, matrix_A, norm_profile, norm_sum
from .sequences import SummabilityQuery

CONVERGENT = "Convergent"
DIVERGENT = "Divergent"
INCONCLUSIVE = "Inconclusive"

_PREC = 128
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class TruncationSchedule:
    levels: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        levels = tuple((int(n), int(m)) for n, m in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) < 4:
            raise ValueError("a schedule needs at least 4 levels")
        if levels[0][0] < 0 or levels[0][1] < 1:
            raise ValueError("first level must have N >= 0 and M >= 1")
        for (n0, m0), (n1, m1) in zip(levels, levels[1:]):
            if n1 <= n0:
                raise ValueError("N must be strictly increasing")
            if m1 < 2 * m0:
                raise ValueError("M must at least double from level to level")

    def __iter__(self):
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)


def default_schedule(group: GroupSpec, ns: Sequence[int] = (8, 20, 32, 44)) -> TruncationSchedule:
    """Levels (N, 2^ceil((D+1) N)) with D the spread of the diagonal exponents.

    Octant boundaries sit at |m| ~ 2^(n D); the extra factor 2^N leaves
    room for the m-tails at every scale.
    """
    ex = diagonal_exponents(group)
    spread = max(ex) - min(ex)
    return TruncationSchedule(
        tuple((n, 2 ** max(8, math.ceil((spread + 1) * n))) for n in ns)
    )


@dataclass(frozen=True)
class Thresholds:
    converge_ratio: Fraction = Fraction(1, 2)
    diverge_factor: Fraction = Fraction(4)

    def __post_init__(self):
        if not 0 < self.converge_ratio < 1:
            raise ValueError("converge_ratio must lie in (0, 1)")
        if not self.diverge_factor > 1:
            raise ValueError("diverge_factor must exceed 1")


@dataclass(frozen=True)
class LevelStat:
    n_bound: int
    m_bound: int
    total: mpmath.mpf
    increment: mpmath.mpf  # total minus previous total (the first level's total)


@dataclass
class OracleVerdict:
    classification: str
    statistics: List[LevelStat] = field(default_factory=list)
    growth_rate: float = 0.0

    def totals(self) -> List[mpmath.mpf]:
        return [s.total for s in self.statistics]


# -- log-domain rectangle sums ----------------------------------------------

def _log1mexp_of_log(lz: np.ndarray) -> np.ndarray:
    """log(1 - exp(-z)) for z = exp(lz) > 0, stable for tiny and large z."""
    z = np.exp(lz)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = lz - z / 2                        # z -> 0
        mid = np.log(-np.expm1(-z))
        large = np.log1p(-np.exp(-z))
    return np.where(lz < -20, small, np.where(z < _LN2, mid, large))


def _log_geometric(lz: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """log sum_{lo <= |x| <= hi} exp(-z|x|), counting +x and -x separately."""
    if hi < lo:
        return np.full_like(lz, -np.inf)
    if lo == 0:
        if hi == 0:
            return np.zeros_like(lz)
        return np.logaddexp(0.0, _log_geometric(lz, 1, hi))
    z = np.exp(lz)
    count = hi - lo + 1
    return (_LN2 - lo * z + _log1mexp_of_log(lz + math.log(count)) - _log1mexp_of_log(lz))


def log_rectangle_sums(lc0: np.ndarray, lc1: np.ndarray, lc2: np.ndarray, s: float,
                       xr: Tuple[int, int], yr: Tuple[int, int], h: float = 0.1) -> np.ndarray:
    """log of sum_{|x| in xr, |y| in yr} (c0 + c1|x| + c2|y|)^(-s), vectorized over rows.

    ``lc*`` are natural logs of the positive coefficients; ``xr`` and ``yr``
    are inclusive ranges of |x| and |y|.
    """
    lc0, lc1, lc2 = (np.asarray(v, dtype=float) for v in (lc0, lc1, lc2))
    if xr[1] < xr[0] or yr[1] < yr[0]:
        return np.full_like(lc0, -np.inf)
    if s == 0:
        def cnt(r):
            return 2 * r[1] + 1 if r[0] == 0 else 2 * (r[1] - r[0] + 1)
        return np.full_like(lc0, math.log(cnt(xr)) + math.log(cnt(yr)))
    # u = log(c0 t); the integrand dies off past u_hi and decays like
    # exp(s u) below the scale where both geometric sums saturate
    u_hi = math.log(4 * s + 80)
    span = math.log(max(xr[1], yr[1]) + 1)
    u_lo = lc0 - np.maximum(lc1, lc2) - span - 45.0 / s - 2.0
    width = u_hi - u_lo
    k = int(math.ceil(float(width.max()) / h))
    step = width / k
    u = u_lo[:, None] + step[:, None] * np.arange(k + 1)[None, :]
    tau = u - lc0[:, None]
    log_f = (s * tau - np.exp(u)
             + _log_geometric(lc1[:, None] + tau, *xr)
             + _log_geometric(lc2[:, None] + tau, *yr))
    peak = log_f.max(axis=1)
    total = np.log(np.exp(log_f - peak[:, None]).sum(axis=1))
    return peak + total + np.log(step) - math.lgamma(s)


# -- the classifier ----------------------------------------------------------

def _log_profile(group: GroupSpec, ns: Sequence[int]):
    rows = [tuple(float(c.log2(64)) * _LN2 for c in norm_profile(group, n)) for n in ns]
    arr = np.array(rows, dtype=float).reshape(len(ns), 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _mp_exp_sum(logs: np.ndarray) -> mpmath.mpf:
    """sum exp(logs) in fixed order at working precision."""
    with mpmath.workprec(_PREC):
        acc = mpmath.mpf(0)
        for v in logs:
            if np.isfinite(v):
                acc += mpmath.exp(mpmath.mpf(float(v)))
        return acc


def _sup_levels(query: SummabilityQuery, schedule: TruncationSchedule) -> List[LevelStat]:
    """theta = inf: ||A|| is minimal at x = y = 0, so sup_box psi = max_n 2^(na) c0^(-b)."""
    a, b = query.a, query.b
    stats, best, prev_n = [], None, None
    with mpmath.workprec(_PREC):
        af = mpmath.mpf(a.numerator) / a.denominator
        bf = mpmath.mpf(b.numerator) / b.denominator
        for n_bound, m_bound in schedule:
            ns = range(-n_bound, n_bound + 1) if prev_n is None else \
                [n for n in range(-n_bound, n_bound + 1) if abs(n) > prev_n]
            for n in ns:
                c0 = norm_profile(query.group, n)[0].to_mpf(_PREC)
                v = mpmath.power(2, n * af) * mpmath.power(c0, -bf)
                best = v if best is None or v > best else best
            inc = best if not stats else best - stats[-1].total
            stats.append(LevelStat(n_bound, m_bound, +best, +inc))
            prev_n = n_bound
    return stats


def _sum_levels(query: SummabilityQuery, schedule: TruncationSchedule) -> List[LevelStat]:
    theta = Fraction(query.theta)
    s = float(query.b * theta)
    a_theta = float(query.a * theta)
    n_max = schedule.levels[-1][0]
    all_n = np.arange(-n_max, n_max + 1)
    lc0, lc1, lc2 = _log_profile(query.group, list(all_n))
    scale = all_n * a_theta * _LN2  # log 2^(n a theta)

    def shell(mask, xr, yr):
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            return np.array([])
        return scale[idx] + log_rectangle_sums(lc0[idx], lc1[idx], lc2[idx], s, xr, yr)

    stats: List[LevelStat] = []
    prev: Optional[Tuple[int, int]] = None
    with mpmath.workprec(_PREC):
        total = mpmath.mpf(0)
        for n_bound, m_bound in schedule:
            absn = np.abs(all_n)
            if prev is None:
                inc = _mp_exp_sum(shell(absn <= n_bound, (0, m_bound), (0, m_bound)))
            else:
                pn, pm = prev
                inc = _mp_exp_sum(shell((absn > pn) & (absn <= n_bound), (0, m_bound), (0, m_bound)))
                old = absn <= pn
                inc += _mp_exp_sum(shell(old, (pm + 1, m_bound), (0, m_bound)))
                inc += _mp_exp_sum(shell(old, (0, pm), (pm + 1, m_bound)))
            total += inc
            stats.append(LevelStat(n_bound, m_bound, +total, +inc))
            prev = (n_bound, m_bound)
    return stats


def _classify(stats: List[LevelStat], th: Thresholds) -> str:
    ratio = mpmath.mpf(th.converge_ratio.numerator) / th.converge_ratio.denominator
    factor = mpmath.mpf(th.diverge_factor.numerator) / th.diverge_factor.denominator
    converging = diverging = True
    for j in range(2, len(stats)):
        d_prev, d_cur = stats[j - 1].increment, stats[j].increment
        if not (d_cur == 0 or (d_prev > 0 and d_cur <= ratio * d_prev)):
            converging = False
        s_prev, s_cur = stats[j - 1].total, stats[j].total
        if not (s_prev > 0 and s_cur >= factor * s_prev):
            diverging = False
    if converging and not diverging:
        return CONVERGENT
    if diverging and not converging:
        return DIVERGENT
    return INCONCLUSIVE


def _growth_rate(stats: List[LevelStat]) -> float:
    xs = [s.n_bound for s in stats if s.total > 0]
    ys = [float(mpmath.log(s.total, 2)) for s in stats if s.total > 0]
    if len(xs) < 2:
        return 0.0
    return float(np.polyfit(np.array(xs, dtype=float), np.array(ys), 1)[0])


def classify_membership(query: SummabilityQuery, schedule: Optional[TruncationSchedule] = None,
                        thresholds: Thresholds = Thresholds()) -> OracleVerdict:
    """Classify psi^(a,b) in l^theta by the trend of truncated sums or suprema."""
    if schedule is None:
        schedule = default_schedule(query.group)
    if not isinstance(schedule, TruncationSchedule):
        schedule = TruncationSchedule(tuple(schedule))
    stats = _sup_levels(query, schedule) if is_inf(query.theta) else _sum_levels(query, schedule)
    return OracleVerdict(_classify(stats, thresholds), stats, _growth_rate(stats))


# -- direct enumeration, for small boxes -----------------------------------

def reindexed_m2(group: GroupSpec, x: int, y: int) -> int:
    """m2 for the reindexed coordinates (x, y)."""
    from .groups import Standard
    return y if isinstance(group, Standard) else x * x - y


def direct_box_sum(group: GroupSpec, a, b, theta: ExtReal, n_range: Sequence[int],
                   x_range: Sequence[int], y_range: Sequence[int], prec: int = _PREC) -> mpmath.mpf:
    """sum of psi^theta over an explicit box in (n, x, y), by enumeration."""
    a, b, theta = Fraction(a), Fraction(b), Fraction(theta)
    with mpmath.workprec(prec):
        af = mpmath.mpf(a.numerator) / a.denominator
        sf = mpmath.mpf((b * theta).numerator) / (b * theta).denominator
        tf = mpmath.mpf(theta.numerator) / theta.denominator
        acc = mpmath.mpf(0)
        for n in n_range:
            two = mpmath.power(2, n * af * tf)
            for x in x_range:
                for y in y_range:
                    norm = norm_sum(matrix_A(group, FamilyIndex(n, x, reindexed_m2(group, x, y)))).to_mpf(prec)
                    acc += two * mpmath.power(norm, -sf)
        return acc
