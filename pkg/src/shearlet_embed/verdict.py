"""Sobolev embedding decisions for shearlet coorbit spaces, plus the structural
queries built on them (same embedding behavior, feasible alpha, maximal k).

The decision combines the summability exponent theta with the shifted scale
exponent A = alpha + c * gamma, where |det A_n| = 2^(c n), and evaluates one
chain of exact inequalities.  For q in (2, inf) only a sufficient form (with
q_down) and a necessary form (with q in place of q_down) are available, which
leaves a gap in between.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .analytic import Condition, applicable_standard_cases, standard_case
from .exponents import (
    INF,
    ExtReal,
    fmt,
    from_reciprocal,
    gamma,
    inv_theta,
    is_inf,
    parse_ext,
    parse_rational,
    q_down,
    reciprocal,
)
from .groups import GroupSpec, Standard, Toeplitz, WeightSpec, canonical_pair, det_exponent_rate

EMBEDS = "Embeds"
DOES_NOT_EMBED = "DoesNotEmbed"
GAP = "IndeterminateGap"
ANSWERS = (EMBEDS, DOES_NOT_EMBED, GAP)

CHARACTERIZED = "characterized"  # q in (0, 2] or q = inf
GAP_REGIME = "gap"               # q in (2, inf)

GAP_NOTE = "necessary form: q replaces q_down inside theta, then the chain for that theta is used as printed"


@dataclass(frozen=True)
class ParamTuple:
    p: ExtReal
    q: ExtReal
    r: ExtReal
    alpha: Fraction
    beta: Fraction
    k: int

    def __post_init__(self):
        for name in ("p", "q", "r"):
            object.__setattr__(self, name, parse_ext(getattr(self, name)))
        object.__setattr__(self, "alpha", parse_rational(self.alpha))
        object.__setattr__(self, "beta", parse_rational(self.beta))
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        k = self.k
        if isinstance(k, (str, Fraction)):
            kf = parse_rational(k)
            if kf.denominator != 1:
                raise ValueError(f"k must be an integer, got {k}")
            k = kf.numerator
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(k))

    @property
    def weight(self) -> WeightSpec:
        return WeightSpec(self.alpha, self.beta)

    def to_dict(self) -> Dict[str, str]:
        return {"p": fmt(self.p), "q": fmt(self.q), "r": fmt(self.r), "alpha": fmt(self.alpha),
                "beta": fmt(self.beta), "k": str(self.k)}

    @classmethod
    def from_dict(cls, d: Dict[str, str]) -> "ParamTuple":
        return cls(d["p"], d["q"], d["r"], d["alpha"], d["beta"], int(d["k"]))


def group_to_dict(group: GroupSpec) -> Dict[str, str]:
    if isinstance(group, Standard):
        return {"type": "standard", "lambda1": fmt(group.lambda1), "lambda2": fmt(group.lambda2)}
    return {"type": "toeplitz", "delta": fmt(group.delta)}


def group_from_dict(d: Dict[str, str]) -> GroupSpec:
    if d["type"] == "standard":
        return Standard(d["lambda1"], d["lambda2"])
    if d["type"] == "toeplitz":
        return Toeplitz(d["delta"])
    raise ValueError(f"unknown group type {d['type']!r}")


def _cond_to_dict(c: Condition) -> Dict:
    return {"name": c.name, "lhs": fmt(c.lhs), "relation": c.relation, "rhs": fmt(c.rhs),
            "satisfied": c.satisfied}


def _cond_from_dict(d: Dict) -> Condition:
    def val(x):
        return INF if x == "inf" else parse_rational(x)
    return Condition(d["name"], val(d["lhs"]), d["relation"], val(d["rhs"]), bool(d["satisfied"]))


@dataclass
class Verdict:
    group: GroupSpec
    params: ParamTuple
    answer: str
    regime: str
    theta: ExtReal
    case: str
    shift: Fraction
    trace: List[Condition]
    failed_first: Optional[str] = None
    necessary_theta: Optional[ExtReal] = None
    necessary_trace: Optional[List[Condition]] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "group": group_to_dict(self.group),
            "params": self.params.to_dict(),
            "answer": self.answer,
            "regime": self.regime,
            "theta": fmt(self.theta),
            "case": self.case,
            "shift": fmt(self.shift),
            "trace": [_cond_to_dict(c) for c in self.trace],
            "necessary": None if self.necessary_trace is None else {
                "theta": fmt(self.necessary_theta),
                "trace": [_cond_to_dict(c) for c in self.necessary_trace],
            },
            "failed_first": self.failed_first,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: Dict) -> "Verdict":
        nec = d.get("necessary")
        return cls(
            group=group_from_dict(d["group"]),
            params=ParamTuple.from_dict(d["params"]),
            answer=d["answer"],
            regime=d["regime"],
            theta=parse_ext(d["theta"]),
            case=d["case"],
            shift=parse_rational(d["shift"]),
            trace=[_cond_from_dict(c) for c in d["trace"]],
            failed_first=d.get("failed_first"),
            necessary_theta=None if nec is None else parse_ext(nec["theta"]),
            necessary_trace=None if nec is None else [_cond_from_dict(c) for c in nec["trace"]],
            notes=list(d.get("notes", [])),
        )

    def render_text(self) -> str:
        lines = [
            f"group:  {self.group}",
            "params: " + ", ".join(f"{k}={v}" for k, v in self.params.to_dict().items()),
            f"answer: {self.answer}",
            f"regime: {self.regime}",
            f"case:   {self.case}",
            f"theta:  {fmt(self.theta)}",
            f"A:      {fmt(self.shift)}",
            "trace:",
        ]
        lines += [f"  {c}" for c in self.trace]
        if self.necessary_trace is not None:
            lines.append(f"necessary form (theta = {fmt(self.necessary_theta)}):")
            lines += [f"  {c}" for c in self.necessary_trace]
        if self.failed_first:
            lines.append(f"first failed: {self.failed_first}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


# -- inequality chains --------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    """lower (<|<=) A (<|<=) upper, plus the beta > k + 2/theta requirement if theta < inf."""

    case: str
    lower: Fraction
    upper: Fraction
    strict: bool


def _standard_bounds(case: str, l1: Fraction, l2: Fraction, beta: Fraction, k: int, s: Fraction) -> Bounds:
    bk = beta - k
    low_mix = max(beta * l1, bk * l1)
    if case == "i":
        lo, hi = (l1 + l2 - 2) * s + beta, (l1 - l2) * s + bk * l2
    elif case == "ii":
        lo, hi = (l2 - l1) * s + low_mix, (l1 + l2 - 2) * s + bk
    else:
        lo, hi = (l2 - l1) * s + low_mix, (l1 - l2) * s + bk * l2
    return Bounds(case, lo, hi, s != 0)


def _toeplitz_bounds(delta: Fraction, beta: Fraction, k: int, s: Fraction) -> Bounds:
    bk = beta - k
    e2 = 1 - 2 * delta
    if delta >= 0:
        return Bounds("delta>=0", max(beta * e2, bk * e2), -3 * delta * s + bk, s != 0)
    return Bounds("delta<0", -3 * delta * s + beta, bk * e2, s != 0)


def _all_bounds(group: GroupSpec, beta: Fraction, k: int, s: Fraction) -> List[Bounds]:
    """Bounds of every applicable case; the canonical case comes first."""
    if isinstance(group, Toeplitz):
        return [_toeplitz_bounds(group.delta, beta, k, s)]
    l1, l2 = sorted((group.lambda1, group.lambda2))
    first = standard_case(l1, l2)
    cases = [first] + [c for c in applicable_standard_cases(l1, l2) if c != first]
    return [_standard_bounds(c, l1, l2, beta, k, s) for c in cases]


def _chain(p: ExtReal, q: ExtReal, bounds: Bounds, shift: Fraction, beta: Fraction, k: int,
           s: Fraction) -> List[Condition]:
    conds = [Condition.check("p<=q", p, "<=", q)]
    if bounds.strict:
        conds.append(Condition.check("beta>k+2/theta", beta, ">", k + 2 * s))
        conds.append(Condition.check("lower<A", bounds.lower, "<", shift))
        conds.append(Condition.check("A<upper", shift, "<", bounds.upper))
    else:
        conds.append(Condition.check("lower<=A", bounds.lower, "<=", shift))
        conds.append(Condition.check("A<=upper", shift, "<=", bounds.upper))
    return conds


def _evaluate(group: GroupSpec, params: ParamTuple, shift: Fraction, s: Fraction) -> Tuple[str, List[Condition]]:
    results = [(b.case, _chain(params.p, params.q, b, shift, params.beta, params.k, s))
               for b in _all_bounds(group, params.beta, params.k, s)]
    flags = {all(c.satisfied for c in conds) for _, conds in results}
    if len(flags) != 1:
        raise AssertionError(f"overlapping cases disagree for {group} at {params}")
    return results[0]


def shifted_exponent(group: GroupSpec, params: ParamTuple) -> Fraction:
    """A = alpha + c * gamma with |det A_n| = 2^(c n)."""
    return params.alpha + det_exponent_rate(group) * gamma(params.p, params.q, params.r)


def _first_failure(conds: Sequence[Condition]) -> Optional[str]:
    return next((c.name for c in conds if not c.satisfied), None)


def decide(group: GroupSpec, params: ParamTuple) -> Verdict:
    """Does Co(L^{p,r}_{v^(alpha,beta)}) embed into W^{k,q}(R^3)?"""
    shift = shifted_exponent(group, params)
    q, r = params.q, params.r
    s_suf = inv_theta(q_down(q), r)
    case, trace = _evaluate(group, params, shift, s_suf)
    sufficient = all(c.satisfied for c in trace)
    verdict = Verdict(group, params, DOES_NOT_EMBED, CHARACTERIZED, from_reciprocal(s_suf), case, shift, trace)

    if is_inf(q) or q <= 2:
        verdict.answer = EMBEDS if sufficient else DOES_NOT_EMBED
        verdict.failed_first = _first_failure(trace)
    else:
        s_nec = inv_theta(q, r)
        _, nec = _evaluate(group, params, shift, s_nec)
        verdict.regime = GAP_REGIME
        verdict.necessary_theta = from_reciprocal(s_nec)
        verdict.necessary_trace = nec
        verdict.notes.append(GAP_NOTE)
        if sufficient:
            verdict.answer = EMBEDS
        elif not all(c.satisfied for c in nec):
            verdict.answer = DOES_NOT_EMBED
            verdict.failed_first = _first_failure(nec)
        else:
            verdict.answer = GAP
            verdict.failed_first = _first_failure(trace)

    if verdict.answer == EMBEDS and not (params.p <= params.q and beta_ge_k_necessary(params)):
        raise AssertionError(f"Embeds without p <= q and beta >= k: {params}")
    return verdict


def beta_ge_k_necessary(params: ParamTuple) -> bool:
    return params.beta >= params.k


# -- structural queries --------------------------------------------------------

def same_embedding_behavior(g1: GroupSpec, g2: GroupSpec) -> bool:
    """Equal unordered diagonal-exponent pairs ({l1, l2}, or {1-delta, 1-2delta})."""
    return canonical_pair(g1) == canonical_pair(g2)


def _check_lebesgue_setting(p: ExtReal, q: ExtReal) -> Tuple[ExtReal, ExtReal]:
    p, q = parse_ext(p), parse_ext(q)
    if p > q:
        raise ValueError(f"needs p <= q, got p={fmt(p)}, q={fmt(q)}")
    if is_inf(q) or q > 2:
        raise ValueError(f"needs q in (0, 2], got q={fmt(q)}")
    return p, q


def exists_alpha(group: GroupSpec, p: ExtReal, q: ExtReal, beta, k: int) -> Optional[Fraction]:
    """A weight exponent alpha making Co(L^p_{v^(alpha,beta)}) embed into W^{k,q}, if any.

    With r = p <= q <= 2 the summability exponent is infinite and the
    condition is lower <= A <= upper; the witness puts A on the upper bound.
    """
    p, q = _check_lebesgue_setting(p, q)
    beta = parse_rational(beta)
    if beta < 0 or k < 0:
        raise ValueError("needs beta >= 0 and k >= 0")
    b = _all_bounds(group, beta, k, Fraction(0))[0]
    if b.lower > b.upper:
        return None
    return b.upper - det_exponent_rate(group) * (Fraction(1, 2) - reciprocal(q))


def max_smoothness_k(group: GroupSpec, p: ExtReal, alpha, beta) -> Optional[int]:
    """Largest k with Co(L^p_{v^(alpha,beta)}) embedding into W^{k,p}, or None.

    The upper bound (beta - k) * c of the chain gives k <= beta - A/c; that
    candidate is then confirmed by descending through decide.
    """
    p, _ = _check_lebesgue_setting(p, p)
    alpha, beta = parse_rational(alpha), parse_rational(beta)
    shift = alpha + det_exponent_rate(group) * (Fraction(1, 2) - reciprocal(p))
    # upper bound is affine in k: upper(k) = upper(0) - c k with c > 0
    up0 = _all_bounds(group, beta, 0, Fraction(0))[0].upper
    c = up0 - _all_bounds(group, beta, 1, Fraction(0))[0].upper
    k0 = math.floor(min(beta, beta - shift / c))
    for k in range(k0, -1, -1):
        if decide(group, ParamTuple(p, p, p, alpha, beta, k)).answer == EMBEDS:
            return k
    return None


def probe_grid(alpha_step: Fraction = Fraction(1, 16), alpha_bound: int = 24) -> Iterable[ParamTuple]:
    """Finite probe set: q in {2, 1}, p = r = q, beta, k in {0, 1, 2}, alpha on a lattice.

    q = 2 makes the shift vanish and isolates the bounds; q = 1 shifts A by
    a multiple of the determinant rate, which separates pairs with equal
    bounds but different sums.
    """
    steps = int(alpha_bound / alpha_step)
    alphas = [alpha_step * i for i in range(-steps, steps + 1)]
    # beta = 1, k = 0 exposes both interval ends, so it goes first
    pairs = sorted(itertools.product(range(3), range(3)), key=lambda bk: (bk != (1, 0), bk))
    for beta, k in pairs:
        for q in (Fraction(2), Fraction(1)):
            for alpha in alphas:
                yield ParamTuple(q, q, q, alpha, beta, k)


def find_distinguishing_tuple(g1: GroupSpec, g2: GroupSpec,
                              probes: Optional[Iterable[ParamTuple]] = None) -> Optional[ParamTuple]:
    """First probe tuple on which the two groups get different verdicts."""
    for t in probe_grid() if probes is None else probes:
        if decide(g1, t).answer != decide(g2, t).answer:
            return t
    return None
