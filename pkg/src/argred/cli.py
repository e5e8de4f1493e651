"""Command-line surface: constant tables, single reductions, verification
campaigns, and the two-rounding failure demo.

Output is either a table in the significand * 2^exponent layout (easy to
diff against the published constants) or JSON with stable key order, so
identical arguments and seed give byte-identical output.  Decimal
arguments are converted by exact rational rounding, never through a
host float, so results are platform-independent.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from .constgen import HypothesisViolation, audit, format_table, gen_constants, set_to_record
from .realnum import Constant, RealEnclosure, round_rational
from .reduction import ReductionRangeError, reduce
from .softfp import TIES_AWAY, TIES_EVEN, Format, Fpn
from .theorems import (
    FORMATS,
    NAMED_CONSTANTS,
    CheckConfig,
    default_jobs,
    demo_codywaite,
    run_check,
)

__all__ = ["main"]

_DECIMAL_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$")


def parse_decimal(text: str) -> Fraction:
    """Exact decimal-to-rational conversion ('10.0', '-3.25e2', ...)."""
    m = _DECIMAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse decimal {text!r}")
    sign, intpart, fracpart, exp = m.groups()
    fracpart = fracpart or ""
    digits = int(intpart + fracpart) if intpart + fracpart else 0
    value = Fraction(digits, 10 ** len(fracpart))
    if exp:
        value *= Fraction(10) ** int(exp)
    return -value if sign == "-" else value


def parse_x(text: str, fmt: Format, ties: str) -> Fpn:
    """Accept the textual FPN form (contains '*') or an exact decimal."""
    if "*" in text:
        return Fpn.from_text(text, fmt)
    v = parse_decimal(text)
    return round_rational(v.numerator, v.denominator, fmt, ties=ties)


def _parse_dyadic(text: str) -> Fraction:
    m = re.match(r"^\s*([+-]?\d+)\s*\*\s*2\^([+-]?\d+)\s*$", text)
    if not m:
        raise ValueError(f"cannot parse dyadic bound {text!r}")
    sig, e = int(m.group(1)), int(m.group(2))
    return Fraction(sig) * Fraction(2) ** e


def load_constant(selector: str) -> Constant:
    """'pi', 'ln2', or a JSON file with dyadic enclosure bounds."""
    if selector in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[selector]
    path = Path(selector)
    if not path.is_file():
        raise ValueError(f"unknown constant {selector!r} (not a preset or a file)")
    data = json.loads(path.read_text())
    lo, hi = _parse_dyadic(data["lo"]), _parse_dyadic(data["hi"])
    bits = int(data.get("bits", 64))
    enc = RealEnclosure(lo, hi, bits, None)
    return Constant.from_enclosure(str(data.get("name", path.stem)), enc)


def resolve_format(args: argparse.Namespace) -> Format:
    if args.p is not None:
        if args.e_min_q is None:
            raise ValueError("--p needs --e-min-q")
        return Format(p=args.p, e_min_q=args.e_min_q, e_max=args.e_max)
    return FORMATS[args.format]


def frac_sci(f: Fraction, digits: int = 6) -> str:
    """Short scientific rendering of an exact rational."""
    if f == 0:
        return "0"
    sign = "-" if f < 0 else ""
    a = abs(f)
    e10 = len(str(a.numerator)) - len(str(a.denominator))
    t = a * Fraction(10) ** (-e10)
    while t >= 10:
        t /= 10
        e10 += 1
    while t < 1:
        t *= 10
        e10 -= 1
    scaled = int(t * 10 ** (digits - 1) + Fraction(1, 2))
    if scaled >= 10**digits:
        scaled //= 10
        e10 += 1
    s = str(scaled)
    return f"{sign}{s[0]}.{s[1:]}e{e10:+d}"


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_constants(args: argparse.Namespace) -> int:
    if args.all:
        jobs = [(c, f) for c in ("pi", "ln2") for f in FORMATS]
    else:
        fmt_label = args.format if args.p is None else None
        jobs = [(args.const, fmt_label)]
    records = []
    grouped: dict[str, list] = {}
    for cname, flabel in jobs:
        constant = load_constant(cname)
        fmt = FORMATS[flabel] if flabel else resolve_format(args)
        try:
            cs = gen_constants(constant, fmt, n=args.N, q=args.q)
        except HypothesisViolation as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        records.append(set_to_record(cs))
        grouped.setdefault(constant.name, []).append(cs)
    audit_failures = []
    if args.json:
        _emit_json(records)
    else:
        for cname, sets in grouped.items():
            print(f"constant: {cname}  (N={args.N}, q={args.q})")
            print(format_table(sets))
            print()
    if args.audit:
        for cname, sets in grouped.items():
            for cs in sets:
                rep = audit(cs)
                if not args.json:
                    print(f"audit {cname}/{set_to_record(cs)['precision']}:")
                    for line in rep.lines():
                        print("  " + line)
                for c in rep.failed_checks():
                    audit_failures.append(f"{cname}: {c.theorem}: {c.hypothesis}")
        if audit_failures:
            for f in audit_failures:
                print(f"audit failure: {f}", file=sys.stderr)
            return 1
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    constant = load_constant(args.const)
    fmt = resolve_format(args)
    ties = args.ties
    try:
        cs = gen_constants(constant, fmt, n=args.N, q=args.q)
        x = parse_x(args.x, fmt, ties)
        out = reduce(x, cs, n=args.N, ties=ties)
    except ReductionRangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        print("the admissible bound is |x*R| <= 2^(p-N-2) - 2^-N", file=sys.stderr)
        return 1
    except (HypothesisViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    record = {
        "x": x.to_text(),
        "constant": constant.name,
        "N": args.N,
        "q": args.q,
        "z": out.z.to_text(),
        "u": out.u.to_text(),
        "v1": out.v1.to_text(),
        "v2": out.v2.to_text(),
        "w": out.w.to_text(),
        "ell": out.ell,
        "s": str(out.s),
        "exact_first": out.exact_first,
        "exact_second": out.exact_second,
        "rounding_ops_second": out.rounding_ops_second,
        "residual_hi": str(out.residual_hi) if out.residual_hi is not None else None,
    }
    if args.json:
        _emit_json(record)
        return 0
    print(f"x  = {record['x']}")
    print(f"z  = {record['z']}   (ell={out.ell}, s={frac_sci(out.s)})")
    print(f"u  = {record['u']}   exact={out.exact_first}")
    print(f"v1 = {record['v1']}")
    print(f"v2 = {record['v2']}   exact v1+v2={out.exact_second}, ops={out.rounding_ops_second}")
    print(f"w  = {record['w']}")
    if out.residual_hi is not None:
        print(f"|v1 + w - (x - z*C)| in [{frac_sci(out.residual_lo)}, {frac_sci(out.residual_hi)}]")
    return 0


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t != "")


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = CheckConfig(
        theorem=args.theorem,
        beta=args.beta,
        p=args.p,
        p1=args.p1,
        p2=args.p2,
        window=args.window,
        n_values=_int_list(args.N) if args.N else (0, 1, 2),
        q_values=_int_list(args.q) if args.q else (2,),
        mode="exhaustive" if args.exhaustive else "randomized",
        seed=args.seed,
        trials=args.trials,
        ties=args.ties,
        constant=args.const,
        fmt=args.format,
        r_step=args.r_step,
        jobs=args.jobs,
    )
    try:
        res = run_check(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        _emit_json(res.to_record())
    else:
        status = "pass" if res.passed else "FAIL"
        print(f"{res.theorem}: {status} ({res.cases} cases)")
        for key, val in sorted(res.stats.items()):
            print(f"  {key}: {val}")
        for fail in res.failures[:20]:
            print(f"  counterexample: {json.dumps(fail, sort_keys=True)}")
        if len(res.failures) > 20:
            print(f"  ... {len(res.failures) - 20} more")
        if not res.failures and "correct1" == res.theorem and 1 in cfg.q_values:
            print("  no counterexample found (informative only, not a converse claim)")
    return 0 if res.passed else 1


def cmd_demo_codywaite(args: argparse.Namespace) -> int:
    report = demo_codywaite()
    if args.json:
        _emit_json(report)
        return 0
    print("two-rounding versus fma first step (double precision, C = pi)")
    print(f"  x                = {report['x']}")
    print(f"  z                = {report['z']}")
    print(f"  C1 (p-2 bits)    = {report['C1_pipeline']}")
    print(f"  C1 (full p bits) = {report['C1_full']}")
    print(f"  o(x - o(z*C1_full)) = {report['two_round_u']}")
    print(f"    product rounded: {report['two_round_product_inexact']}, "
          f"error vs x - z*C1_full = {report['two_round_error_vs_x_zC1full']}")
    print(f"  fma(x - z*C1)       = {report['fma_u']}")
    print(f"    exact: {report['fma_exact']} (error 0); cancelled bits: {report['cancellation_bits']}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_format_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=sorted(FORMATS), default="double")
    sp.add_argument("--p", type=int, default=None, help="explicit precision (with --e-min-q)")
    sp.add_argument("--e-min-q", type=int, default=None)
    sp.add_argument("--e-max", type=int, default=16383)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="argred",
        description="fma-based argument reduction: constants, reductions, verification",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="generate and print constant sets")
    c.add_argument("--const", default="pi", help="pi, ln2, or a JSON enclosure file")
    _add_format_args(c)
    c.add_argument("--N", type=int, default=0)
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--all", action="store_true", help="both constants x all four presets")
    c.add_argument("--audit", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_constants)

    r = sub.add_parser("reduce", help="run one reduction")
    r.add_argument("--x", required=True, help="decimal or 'm * 2^e'")
    r.add_argument("--const", default="pi")
    _add_format_args(r)
    r.add_argument("--N", type=int, default=0)
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--json", action="store_true")
    r.add_argument("--ties", choices=(TIES_EVEN, TIES_AWAY), default=TIES_EVEN)
    r.set_defaults(fn=cmd_reduce)

    v = sub.add_parser("verify", help="run a theorem check")
    v.add_argument(
        "--theorem",
        required=True,
        choices=("sterbenz", "sterbenz2", "thm3", "correct1", "correct2", "correct3", "thm6", "thm7", "eft"),
    )
    v.add_argument("--beta", type=int, default=2)
    v.add_argument("--p", type=int, default=None)
    v.add_argument("--p1", type=int, default=None)
    v.add_argument("--p2", type=int, default=None)
    v.add_argument("--window", type=int, default=8)
    v.add_argument("--N", default=None, help="comma-separated list")
    v.add_argument("--q", default=None, help="comma-separated list")
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--trials", type=int, default=10000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--const", choices=("pi", "ln2"), default="pi")
    v.add_argument("--format", choices=sorted(FORMATS), default="double")
    v.add_argument("--r-step", type=int, default=1)
    v.add_argument("--ties", choices=(TIES_EVEN, TIES_AWAY), default=TIES_EVEN)
    v.add_argument("--jobs", type=int, default=default_jobs())
    v.add_argument("--json", action="store_true")
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("demo-codywaite", help="show a two-rounding failure the fma avoids")
    d.add_argument("--json", action="store_true")
    d.set_defaults(fn=cmd_demo_codywaite)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
