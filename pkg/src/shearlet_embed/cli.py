"""Command-line front end.

    shearlet-embed decide --group standard --lambda1 1 --lambda2 2 --p 2 --q 2 --r 2 \\
        --alpha 2 --beta 2 --k 1
    shearlet-embed sweep --config sweep.cfg --format csv
    shearlet-embed verify --margin 1/4
    shearlet-embed exists-alpha --group toeplitz --delta 1/2 --p 1 --q 2 --beta 1 --k 0
    shearlet-embed max-k --group standard --lambda1 1 --lambda2 2 --p 2 --alpha 2 --beta 2

Exit codes of ``decide``: 0 Embeds, 1 DoesNotEmbed, 2 IndeterminateGap, 3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .analytic import psi_in_ltheta
from .campaign import margin_grid, run_checks, summarize, worker_count
from .exponents import fmt, parse_ext, parse_rational
from .groups import GroupSpec, Standard, Toeplitz
from .oracle import Thresholds, TruncationSchedule
from .sequences import SummabilityQuery
from .verdict import (
    DOES_NOT_EMBED,
    EMBEDS,
    GAP,
    ParamTuple,
    decide,
    exists_alpha,
    max_smoothness_k,
)

EXIT_CODES = {EMBEDS: 0, DOES_NOT_EMBED: 1, GAP: 2}
EXIT_USAGE = 3

CSV_HEADER = ["group", "lambda1", "lambda2", "delta", "p", "q", "r", "alpha", "beta", "k",
              "theta", "case", "answer", "failed_first"]

DEFAULT_MAX_TUPLES = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 is taken by IndeterminateGap."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let negative rationals such as -1/2 through as option values
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- config files --------------------------------------------------------------

_LIST_SPLIT = re.compile(r"[,\s]+")


def parse_list(text: str) -> List[str]:
    """``"[1, 3/2, 2]"``, ``"1, 3/2"`` or ``"2"`` -> list of tokens; ``"[]"`` is empty."""
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    return [tok for tok in _LIST_SPLIT.split(t.strip()) if tok]


def read_config(path: str) -> Dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out: Dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def merged_settings(args: argparse.Namespace, keys: Sequence[str]) -> Dict[str, str]:
    settings = read_config(args.config) if getattr(args, "config", None) else {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


# -- shared argument handling ------------------------------------------------------

def _group_args(p: argparse.ArgumentParser):
    p.add_argument("--group", choices=["standard", "toeplitz"], required=True)
    p.add_argument("--lambda1")
    p.add_argument("--lambda2")
    p.add_argument("--delta")


def _group_from_args(args) -> GroupSpec:
    if args.group == "standard":
        if args.lambda1 is None or args.lambda2 is None:
            raise UsageError("--group standard needs --lambda1 and --lambda2")
        if args.delta is not None:
            raise UsageError("--delta belongs to --group toeplitz")
        return Standard(args.lambda1, args.lambda2)
    if args.delta is None:
        raise UsageError("--group toeplitz needs --delta")
    if args.lambda1 is not None or args.lambda2 is not None:
        raise UsageError("--lambda1/--lambda2 belong to --group standard")
    return Toeplitz(args.delta)


def _parse_k(text: str) -> int:
    k = parse_rational(text)
    if k.denominator != 1 or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {text!r}")
    return k.numerator


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


# -- decide -------------------------------------------------------------------------

def cmd_decide(args) -> int:
    group = _group_from_args(args)
    params = ParamTuple(args.p, args.q, args.r, args.alpha, args.beta, _parse_k(args.k))
    verdict = decide(group, params)
    if args.format == "json":
        print(_dump_json(verdict.to_dict()))
    else:
        print(verdict.render_text())
    return EXIT_CODES[verdict.answer]


# -- sweep --------------------------------------------------------------------------

SWEEP_KEYS = ["group", "lambda1", "lambda2", "delta", "p", "q", "r", "alpha", "beta", "k",
              "format", "max_tuples"]


def _lattice(settings: Dict[str, str], key: str, parse) -> list:
    if key not in settings:
        raise UsageError(f"sweep needs a lattice for {key!r}")
    return [parse(tok) for tok in parse_list(settings[key])]


def sweep_groups(settings: Dict[str, str]) -> List[GroupSpec]:
    kinds = parse_list(settings.get("group", "standard"))
    groups: List[GroupSpec] = []
    for kind in kinds:
        if kind == "standard":
            l1s = _lattice(settings, "lambda1", parse_rational)
            l2s = _lattice(settings, "lambda2", parse_rational)
            groups += [Standard(a, b) for a, b in itertools.product(l1s, l2s)]
        elif kind == "toeplitz":
            groups += [Toeplitz(d) for d in _lattice(settings, "delta", parse_rational)]
        else:
            raise UsageError(f"unknown group {kind!r}")
    return groups


def sweep_tuples(settings: Dict[str, str]):
    """(groups, tuples) in lexicographic lattice order, with the product size."""
    groups = sweep_groups(settings)
    lattices = [_lattice(settings, key, parse_ext) for key in ("p", "q", "r")]
    lattices += [_lattice(settings, key, parse_rational) for key in ("alpha", "beta")]
    lattices.append(_lattice(settings, "k", _parse_k))
    size = len(groups)
    for lat in lattices:
        size *= len(lat)
    return groups, lattices, size


def _row(group: GroupSpec, params: ParamTuple) -> List[str]:
    v = decide(group, params)
    if isinstance(group, Standard):
        gcols = ["standard", fmt(group.lambda1), fmt(group.lambda2), ""]
    else:
        gcols = ["toeplitz", "", "", fmt(group.delta)]
    pd = params.to_dict()
    return gcols + [pd[key] for key in ("p", "q", "r", "alpha", "beta", "k")] + [
        fmt(v.theta), v.case, v.answer, v.failed_first or ""]


def _rows_for_group(job) -> List[List[str]]:
    group, lattices = job
    return [_row(group, ParamTuple(*combo)) for combo in itertools.product(*lattices)]


def render_sweep(rows: List[List[str]], fmt_name: str) -> str:
    if fmt_name == "json":
        return _dump_json({"columns": CSV_HEADER, "rows": [dict(zip(CSV_HEADER, r)) for r in rows]}) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    settings = merged_settings(args, SWEEP_KEYS)
    fmt_name = settings.get("format", "csv")
    if fmt_name not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt_name!r}")
    cap = int(settings.get("max_tuples", DEFAULT_MAX_TUPLES))
    groups, lattices, size = sweep_tuples(settings)
    print(f"tuples: {size}", file=sys.stderr)
    if size > cap:
        raise UsageError(f"{size} tuples exceed the cap of {cap} (raise --max-tuples)")
    jobs = [(g, lattices) for g in groups]
    workers = worker_count()
    if workers > 1 and size > 2000:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_rows_for_group, jobs))
    else:
        chunks = [_rows_for_group(j) for j in jobs]
    rows = [row for chunk in chunks for row in chunk]
    text = render_sweep(rows, fmt_name)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- verify -------------------------------------------------------------------------

VERIFY_KEYS = ["margin", "oracle_n", "oracle_m", "converge_ratio", "diverge_factor", "format"]


def _schedule(settings: Dict[str, str]) -> Optional[TruncationSchedule]:
    if "oracle_n" not in settings and "oracle_m" not in settings:
        return None
    if "oracle_n" not in settings or "oracle_m" not in settings:
        raise UsageError("oracle_n and oracle_m must be given together")
    ns = [int(t) for t in parse_list(settings["oracle_n"])]
    ms = [int(t) for t in parse_list(settings["oracle_m"])]
    if len(ns) != len(ms):
        raise UsageError("oracle_n and oracle_m need equal lengths")
    return TruncationSchedule(tuple(zip(ns, ms)))


def _thresholds(settings: Dict[str, str]) -> Thresholds:
    kw = {}
    for key in ("converge_ratio", "diverge_factor"):
        if key in settings:
            kw[key] = parse_rational(settings[key])
    return Thresholds(**kw)


def cmd_verify(args) -> int:
    settings = merged_settings(args, VERIFY_KEYS)
    schedule = _schedule(settings)
    thresholds = _thresholds(settings)
    if args.a is not None or args.group is not None:
        if None in (args.group, args.a, args.b, args.theta):
            raise UsageError("a single-point verify needs --group, --a, --b and --theta")
        group = _group_from_args(args)
        theta = parse_ext(args.theta)
        items = [(SummabilityQuery(args.a, args.b, theta, group),
                  psi_in_ltheta(group, args.a, args.b, theta))]
    else:
        margin = parse_rational(settings.get("margin", "1/4"))
        if margin < 0:
            raise UsageError("margin must be >= 0")
        items = margin_grid(margin)
    records = run_checks(items, schedule, thresholds)
    summary = summarize(records)
    if settings.get("format", "text") == "json":
        print(_dump_json({"summary": summary.to_dict(), "records": [r.to_dict() for r in records]}))
    else:
        for r in records:
            d = r.to_dict()
            flag = "CONTRADICTION" if r.contradiction else ""
            print(f"{d['group']:>18} a={d['a']:>6} b={d['b']} theta={d['theta']:>3}  "
                  f"{d['analytic']:>10}  {d['oracle']:<12} {flag}".rstrip())
        s = summary
        print(f"queries {s.total} (members {s.members}, non-members {s.non_members}); "
              f"agreements {s.agreements}, inconclusive {s.inconclusive}, "
              f"contradictions {s.contradictions}")
    return 0 if summary.passed else 1


# -- structural queries -------------------------------------------------------------

def cmd_exists_alpha(args) -> int:
    alpha = exists_alpha(_group_from_args(args), args.p, args.q, args.beta, _parse_k(args.k))
    print("none" if alpha is None else fmt(alpha))
    return 0 if alpha is not None else 1


def cmd_max_k(args) -> int:
    k = max_smoothness_k(_group_from_args(args), args.p, args.alpha, args.beta)
    print("none" if k is None else k)
    return 0 if k is not None else 1


# -- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shearlet-embed",
                     description="Sobolev embeddings of shearlet coorbit spaces in dimension three.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="decide one embedding")
    _group_args(p)
    for name in ("p", "q", "r", "alpha", "beta", "k"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("sweep", help="decide every tuple of a parameter lattice")
    p.add_argument("--config")
    p.add_argument("--group", help="standard, toeplitz or a list of both")
    for name in ("lambda1", "lambda2", "delta", "p", "q", "r", "alpha", "beta", "k"):
        p.add_argument(f"--{name}", help="value list, e.g. '[1, 3/2, 2]'")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--max-tuples", dest="max_tuples")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check the closed forms against the numerical oracle")
    p.add_argument("--config")
    p.add_argument("--margin")
    p.add_argument("--oracle-n", dest="oracle_n")
    p.add_argument("--oracle-m", dest="oracle_m")
    p.add_argument("--converge-ratio", dest="converge_ratio")
    p.add_argument("--diverge-factor", dest="diverge_factor")
    p.add_argument("--format", choices=["text", "json"])
    p.add_argument("--group", choices=["standard", "toeplitz"])
    p.add_argument("--lambda1")
    p.add_argument("--lambda2")
    p.add_argument("--delta")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--theta")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exists-alpha", help="witness alpha for an embedding into W^{k,q}")
    _group_args(p)
    for name in ("p", "q", "beta", "k"):
        p.add_argument(f"--{name}", required=True)
    p.set_defaults(func=cmd_exists_alpha)

    p = sub.add_parser("max-k", help="largest k with an embedding into W^{k,p}")
    _group_args(p)
    for name in ("p", "alpha", "beta"):
        p.add_argument(f"--{name}", required=True)
    p.set_defaults(func=cmd_max_k)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"shearlet-embed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
