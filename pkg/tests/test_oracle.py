import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from shearlet_embed.analytic import psi_in_ltheta
from shearlet_embed.exponents import INF
from shearlet_embed.groups import Standard, Toeplitz, norm_profile
from shearlet_embed.oracle import (
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    LevelStat,
    Thresholds,
    TruncationSchedule,
    _classify,
    classify_membership,
    default_schedule,
    direct_box_sum,
    log_rectangle_sums,
)
from shearlet_embed.sequences import SummabilityQuery

F = Fraction


def numpy_box_sum(l1, l2, a, s, n_max, m_max):
    """Plain float enumeration of sum psi^theta over a standard-group box."""
    m = np.abs(np.arange(-m_max, m_max + 1, dtype=float))
    total = 0.0
    for n in range(-n_max, n_max + 1):
        p0, p1, p2 = 2.0 ** n, 2.0 ** (n * l1), 2.0 ** (n * l2)
        norm = p0 + p1 * (1 + m[:, None]) + p2 * (1 + m[None, :])
        total += 2.0 ** (n * a) * np.sum(norm ** -s)
    return total


def test_plateau_matches_brute_force():
    # theta = 1, so psi^theta = psi; the schedule here is small enough to enumerate
    sched = TruncationSchedule(((2, 16), (4, 64), (6, 128), (8, 256)))
    v = classify_membership(SummabilityQuery(F(9, 2), 3, F(1), Standard(1, 2)), sched)
    for stat in v.statistics:
        ref = numpy_box_sum(1, 2, 4.5, 3.0, stat.n_bound, stat.m_bound)
        assert float(stat.total) == pytest.approx(ref, rel=1e-10)


def test_default_schedule_examples():
    member = classify_membership(SummabilityQuery(F(9, 2), 3, F(1), Standard(1, 2)))
    assert member.classification == CONVERGENT
    # the plateau: the increments shrink geometrically and the total settles
    assert float(member.statistics[-1].total) == pytest.approx(6.8722, abs=2e-3)
    assert classify_membership(SummabilityQuery(6, 3, F(1), Standard(1, 2))).classification == DIVERGENT
    for g in (Standard(1, 1), Toeplitz(-1), Standard(-1, 2)):
        v = classify_membership(SummabilityQuery(0, 0, INF, g))
        assert v.classification == CONVERGENT
        assert all(s.total == 1 for s in v.statistics)


@pytest.mark.parametrize("group", [Standard(1, 2), Standard(-1, 2), Toeplitz(F(1, 2)), Toeplitz(-1)])
@pytest.mark.parametrize("s", [1, F(5, 2), 6])
def test_rectangle_sums_match_enumeration(group, s):
    for n in (-3, 0, 2):
        lc = [float(c.log2()) * math.log(2) for c in norm_profile(group, n)]
        got = log_rectangle_sums(np.array([lc[0]]), np.array([lc[1]]), np.array([lc[2]]), float(s),
                                 (3, 9), (0, 6))[0]
        xs = [x for x in range(-9, 10) if abs(x) >= 3]
        ref = direct_box_sum(group, 0, s, 1, [n], xs, range(-6, 7))
        assert float(mpmath.exp(got) / ref) == pytest.approx(1, abs=1e-12)


def test_rectangle_sums_on_huge_boxes_are_finite():
    lc = np.array([0.0]), np.array([-80.0]), np.array([-90.0])
    v = log_rectangle_sums(*lc, 3.0, (0, 2 ** 150), (0, 2 ** 150))
    assert np.isfinite(v).all()


def test_schedule_validation():
    with pytest.raises(ValueError):
        TruncationSchedule(((1, 2), (2, 4), (3, 8)))
    with pytest.raises(ValueError):
        TruncationSchedule(((1, 2), (2, 4), (2, 8), (3, 16)))
    with pytest.raises(ValueError):
        TruncationSchedule(((1, 2), (2, 4), (3, 7), (4, 16)))
    with pytest.raises(ValueError):
        Thresholds(converge_ratio=F(1))
    for g in (Standard(1, 1), Standard(-1, 2), Toeplitz(1)):
        assert len(default_schedule(g)) == 4


def _stats(totals):
    out, prev = [], 0
    for i, t in enumerate(totals):
        t = mpmath.mpf(t)
        out.append(LevelStat(i, 2 ** (i + 1), t, t - prev))
        prev = t
    return out


def test_classification_rules():
    th = Thresholds()
    assert _classify(_stats([1, 1.5, 1.75, 1.875]), th) == CONVERGENT
    assert _classify(_stats([1, 1, 1, 1]), th) == CONVERGENT
    assert _classify(_stats([1, 4, 16, 64]), th) == DIVERGENT
    assert _classify(_stats([1, 2, 3, 4]), th) == INCONCLUSIVE
    assert _classify(_stats([1, 2, 8, 9]), th) == INCONCLUSIVE


def test_deterministic_statistics():
    q = SummabilityQuery(F(7, 2), 3, F(2), Toeplitz(F(-1, 2)))
    a, b = classify_membership(q), classify_membership(q)
    assert [s.total for s in a.statistics] == [s.total for s in b.statistics]
    assert a.growth_rate == b.growth_rate


@pytest.mark.parametrize("query", [
    SummabilityQuery(F(9, 2), 3, F(1), Standard(1, 2)),
    SummabilityQuery(6, 3, F(4), Toeplitz(1)),
    SummabilityQuery(2, 1, INF, Standard(F(1, 2), 2)),
])
def test_partial_sums_monotone(query):
    totals = classify_membership(query).totals()
    assert all(x <= y for x, y in zip(totals, totals[1:]))


def test_toeplitz_lower_bound_has_no_theta_term():
    """For theta < inf the Toeplitz lower bound b(1-2 delta) and the standard
    pair's bound delta/theta + b(1-2 delta) disagree; the sums side with Toeplitz."""
    a, b, theta = F(1, 4), 3, F(1)
    tq = SummabilityQuery(a, b, theta, Toeplitz(F(1, 2)))
    sq = SummabilityQuery(a, b, theta, Standard(F(1, 2), 0))
    assert psi_in_ltheta(tq.group, a, b, theta).member
    assert not psi_in_ltheta(sq.group, a, b, theta).member
    assert classify_membership(tq).classification == CONVERGENT
    assert classify_membership(sq).classification == DIVERGENT
