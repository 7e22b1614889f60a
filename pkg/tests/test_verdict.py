import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from shearlet_embed.analytic import psi_in_ltheta
from shearlet_embed.exponents import INF, theta_from
from shearlet_embed.groups import Standard, Toeplitz, canonical_pair
from shearlet_embed.verdict import (
    CHARACTERIZED,
    DOES_NOT_EMBED,
    EMBEDS,
    GAP,
    GAP_REGIME,
    ParamTuple,
    Verdict,
    beta_ge_k_necessary,
    decide,
    exists_alpha,
    find_distinguishing_tuple,
    max_smoothness_k,
    same_embedding_behavior,
    shifted_exponent,
)

from strategies import ext_reals, groups, nonneg, positive_rationals, rationals, small_q

F = Fraction

small_or_inf_q = st.one_of(small_q, st.just(INF))
tuples = st.builds(ParamTuple, ext_reals, ext_reals, ext_reals, rationals(-8, 8), nonneg, st.integers(0, 4))
lebesgue_tuples = st.builds(
    lambda p, q, alpha, beta, k: ParamTuple(p, q, p, alpha, beta, k),
    small_q, small_q, rationals(-8, 8), nonneg, st.integers(0, 4))


def test_isotropic_example():
    v = decide(Standard(1, 1), ParamTuple(2, 2, 2, 0, 1, 1))
    assert v.answer == DOES_NOT_EMBED
    assert v.failed_first == "lower<=A"
    assert [(c.lhs, c.rhs) for c in v.trace[1:]] == [(1, 0), (0, 0)]


def test_p_greater_than_q_never_embeds():
    for g in (Standard(1, 2), Toeplitz(F(1, 2)), Standard(-1, 3)):
        v = decide(g, ParamTuple(2, 1, 2, 5, 3, 0))
        assert v.answer == DOES_NOT_EMBED and v.failed_first == "p<=q"


def test_case_i_boundary_embeds():
    v = decide(Standard(1, 2), ParamTuple(2, 2, 2, 2, 2, 1))
    assert v.answer == EMBEDS
    assert v.theta == INF and v.shift == 2
    assert [(c.lhs, c.rhs) for c in v.trace[1:]] == [(2, 2), (2, 2)]


def test_gap_regime():
    g = Standard(1, 2)
    # q = 4: sufficient form uses q_down = 4/3 (theta = 4, 9/4 < A < 15/4),
    # necessary form uses q = 4 (theta = inf, 2 <= A <= 4); A = alpha + 1
    v = decide(g, ParamTuple(2, 4, 2, 1, 2, 0))
    assert v.regime == GAP_REGIME
    assert v.answer == GAP
    assert v.theta == 4 and v.necessary_theta == INF
    assert all(c.satisfied for c in v.necessary_trace)
    assert decide(g, ParamTuple(2, 4, 2, F(3, 2), 2, 0)).answer == EMBEDS
    no = decide(g, ParamTuple(2, 4, 2, 9, 2, 0))
    assert no.answer == DOES_NOT_EMBED and not all(c.satisfied for c in no.necessary_trace)
    assert decide(g, ParamTuple(2, 2, 2, F(3, 2), 2, 0)).regime == CHARACTERIZED


def test_rejects_invalid_params():
    with pytest.raises(ValueError):
        ParamTuple(2, 2, 2, 0, -1, 0)
    with pytest.raises(ValueError):
        ParamTuple(2, 2, 2, 0, 1, -1)
    with pytest.raises(ValueError):
        ParamTuple(2, 2, 2, 0, 1, "1/2")
    with pytest.raises(ValueError):
        ParamTuple(0, 2, 2, 0, 1, 0)


def test_beta_ge_k_examples():
    assert not beta_ge_k_necessary(ParamTuple(2, 2, 2, 0, 0, 1))
    assert beta_ge_k_necessary(ParamTuple(2, 2, 2, 0, 2, 2))
    assert beta_ge_k_necessary(ParamTuple(2, 2, 2, 0, 3, 1))


def test_same_behavior_examples():
    assert same_embedding_behavior(Standard(1, 2), Standard(2, 1))
    assert same_embedding_behavior(Toeplitz(F(1, 2)), Standard(F(1, 2), 0))
    assert not same_embedding_behavior(Toeplitz(0), Toeplitz(1))


def test_exists_alpha_examples():
    for beta in (1, 2, F(7, 2)):
        assert exists_alpha(Standard(1, 1), 2, 2, beta, 1) is None
    for g in (Standard(1, 1), Standard(3, F(1, 2)), Toeplitz(F(-1, 3))):
        alpha = exists_alpha(g, 1, 2, 0, 0)
        assert alpha is not None
        assert decide(g, ParamTuple(1, 2, 1, alpha, 0, 0)).answer == EMBEDS
    assert exists_alpha(Standard(-1, 2), 2, 2, 1, 1) is not None
    for l1 in (F(1, 2), 1, 2):
        assert exists_alpha(Standard(l1, 2), 2, 2, 1, 1) is None
    with pytest.raises(ValueError):
        exists_alpha(Standard(1, 2), 2, 1, 1, 0)
    with pytest.raises(ValueError):
        exists_alpha(Standard(1, 2), 1, 4, 1, 0)


def test_max_k_examples():
    assert max_smoothness_k(Standard(1, 1), 2, 0, 5) is None
    assert max_smoothness_k(Standard(1, 2), 2, 2, 2) == 1
    for g in (Standard(1, 2), Toeplitz(F(1, 4)), Standard(-1, F(1, 2))):
        alpha = exists_alpha(g, 2, 2, 0, 0)
        assert max_smoothness_k(g, 2, alpha, 0) == 0


@settings(max_examples=400, deadline=None)
@given(groups, tuples)
def test_gate_consistency(g, t):
    v = decide(g, t)
    if v.answer == EMBEDS:
        assert t.p <= t.q and t.beta >= t.k
    if v.answer == GAP:
        assert t.q != INF and t.q > 2


@settings(max_examples=500, deadline=None)
@given(groups, ext_reals, small_or_inf_q, ext_reals, rationals(-8, 8), nonneg, st.integers(0, 4))
def test_reduction_to_psi(g, p, q, r, alpha, beta, k):
    t = ParamTuple(p, q, r, alpha, beta, k)
    v = decide(g, t)
    if beta < k:
        assert v.answer == DOES_NOT_EMBED
        return
    theta = theta_from(q, r)
    a = shifted_exponent(g, t)
    expected = p <= q and psi_in_ltheta(g, a, beta, theta).member and psi_in_ltheta(g, a, beta - k, theta).member
    assert (v.answer == EMBEDS) == expected


@settings(max_examples=400, deadline=None)
@given(groups, tuples)
def test_k_monotone(g, t):
    if decide(g, t).answer == EMBEDS:
        for k in range(t.k):
            assert decide(g, ParamTuple(t.p, t.q, t.r, t.alpha, t.beta, k)).answer == EMBEDS


@settings(max_examples=400, deadline=None)
@given(rationals(-2, 2, 4), lebesgue_tuples)
def test_toeplitz_matches_standard_pair(delta, t):
    a = decide(Toeplitz(delta), t).answer
    assert a == decide(Standard(1 - delta, 1 - 2 * delta), t).answer
    assert a == decide(Standard(1 - 2 * delta, 1 - delta), t).answer


def test_toeplitz_differs_from_standard_pair_outside_lebesgue_setting():
    t = ParamTuple(1, 1, INF, F(-1, 2), 3, 0)
    assert decide(Toeplitz(F(1, 2)), t).answer == EMBEDS
    assert decide(Standard(F(1, 2), 0), t).answer == DOES_NOT_EMBED


@settings(max_examples=300, deadline=None)
@given(groups, groups, lebesgue_tuples)
def test_same_behavior_sound(g1, g2, t):
    if same_embedding_behavior(g1, g2):
        assert decide(g1, t).answer == decide(g2, t).answer


quarter = rationals(-2, 3, 4)


@settings(max_examples=15, deadline=None)
@given(st.builds(Standard, quarter, quarter), st.builds(Standard, quarter, quarter))
def test_same_behavior_complete_on_probe_grid(g1, g2):
    assume(not same_embedding_behavior(g1, g2))
    t = find_distinguishing_tuple(g1, g2)
    assert t is not None
    assert decide(g1, t).answer != decide(g2, t).answer


@settings(max_examples=300, deadline=None)
@given(groups, small_q, small_q, nonneg, st.integers(0, 3))
def test_exists_alpha_witness_embeds(g, p, q, beta, k):
    p, q = min(p, q), max(p, q)
    alpha = exists_alpha(g, p, q, beta, k)
    if alpha is not None:
        assert decide(g, ParamTuple(p, q, p, alpha, beta, k)).answer == EMBEDS
    else:
        # no alpha on a wide lattice works either
        for i in range(-64, 65):
            assert decide(g, ParamTuple(p, q, p, F(i, 4), beta, k)).answer != EMBEDS


@settings(max_examples=200, deadline=None)
@given(groups, small_q, rationals(-6, 6), rationals(0, 6))
def test_max_k_matches_scan(g, p, alpha, beta):
    scan = [k for k in range(21) if decide(g, ParamTuple(p, p, p, alpha, beta, k)).answer == EMBEDS]
    assert max_smoothness_k(g, p, alpha, beta) == (max(scan) if scan else None)


@settings(max_examples=200, deadline=None)
@given(st.builds(Standard, rationals(1, 3, 4), rationals(1, 3, 4)), rationals(-6, 6), rationals(0, 6))
def test_smoother_for_smaller_p(g, alpha, beta):
    assume(max(g.lambda1, g.lambda2) > 1)
    ks = [max_smoothness_k(g, p, alpha, beta) for p in (F(1, 2), F(1), F(3, 2), F(2))]
    for x, y in zip(ks, ks[1:]):
        if x is not None and y is not None:
            assert x >= y


@settings(max_examples=200, deadline=None)
@given(groups, tuples)
def test_json_round_trip(g, t):
    v = decide(g, t)
    text = json.dumps(v.to_dict(), indent=2)
    again = json.dumps(Verdict.from_dict(json.loads(text)).to_dict(), indent=2)
    assert text == again


def test_canonical_pair_is_what_is_compared():
    assert canonical_pair(Toeplitz(-1)) == (2, 3)
    assert same_embedding_behavior(Toeplitz(-1), Standard(3, 2))
