"""The argument-reduction pipeline.

Four stages, all driven by one fma-capable kernel:

  z-extraction   z = fma(x, R, sigma) - sigma with sigma = 3 * 2^(p-N-2),
                 which snaps x*R onto the 2^-N grid in a single rounding;
  first step     u = fma(x, -z*C1): exact under the audited hypotheses;
  second step    the 9-flop sequence producing v1 + v2 = x - z*C1 - z*C2
                 exactly (Fast2Mult / Fast2Sum based);
  third step     w ~ v2 - z*C3, leaving the reduced argument in the
                 unevaluated sum v1 + w with about 2p significant bits.

Every stage reports exactness flags computed against the exact value,
and the second step counts its rounded operations (always 9).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .constgen import ConstantSet
from .softfp import (
    TIES_EVEN,
    Fpn,
    Format,
    OpCounter,
    PreconditionError,
    add,
    fast2mult,
    fast2sum,
    fma,
    sub,
)

__all__ = [
    "ReductionOutput",
    "ReductionRangeError",
    "TheoremViolation",
    "ZExtractInfo",
    "extract_z",
    "first_step",
    "reduce",
    "residual_interval",
    "second_step",
    "sigma_for",
    "third_step",
    "xr_bound",
]


class ReductionRangeError(ValueError):
    """|x*R| exceeds the admissible range for this N."""


class TheoremViolation(ArithmeticError):
    """A theorem conclusion failed at runtime (kernel or hypothesis bug)."""


def sigma_for(fmt: Format, n: int) -> Fpn:
    """The shift constant 3 * 2^(p-N-2) that places z's last bit at 2^-N."""
    return Fpn(1, 3, fmt.p - n - 2, fmt)


def xr_bound(fmt: Format, n: int) -> Fraction:
    """The admissible bound on |x*R|: 2^(p-N-2) - 2^-N."""
    return Fraction(2) ** (fmt.p - n - 2) - Fraction(2) ** (-n)


class ZExtractInfo(NamedTuple):
    k: int                  # z * 2^N, an integer
    ell: int                # bit length of |k|
    s: Fraction             # x*R - z, exactly
    in_thm_range: bool      # |z| >= 2^(1-N), where the z guarantees apply
    sigma: Fpn


def extract_z(
    x: Fpn,
    cs: ConstantSet,
    n: int | None = None,
    ties: str = TIES_EVEN,
    counter: OpCounter | None = None,
    check: bool = True,
) -> tuple[Fpn, ZExtractInfo]:
    """Extract z = k * 2^-N ~ x*R via the fma-and-subtract trick.

    Raises ReductionRangeError when |x*R| > 2^(p-N-2) - 2^-N.  With
    check=True the extraction guarantees (k integral; for |z| >= 2^(1-N):
    2 <= ell <= p-2 and |x*R - z| <= 2^(-N-1)) are verified exactly and
    a failure raises TheoremViolation.
    """
    if n is None:
        n = cs.n
    fmt = x.fmt
    r = cs.r
    # exact |x*R| <= 2^(p-N-2) - 2^-N, scaled by 2^N to the integer
    # inequality |x.m*r.m| * 2^(x.e+r.e+N) <= 2^(p-2) - 1
    xr_num = (x.sign * x.m) * r.m
    xr_exp = x.e + r.e
    a = abs(xr_num)
    shift = xr_exp + n
    top = (1 << (fmt.p - 2)) - 1
    in_bounds = (a << shift) <= top if shift >= 0 else a <= top << -shift
    if not in_bounds:
        raise ReductionRangeError(
            f"|x*R| exceeds 2^(p-N-2) - 2^-N for N={n}; "
            f"x={x.to_text()}, R={r.to_text()}"
        )
    sigma = sigma_for(fmt, n)
    t, _ = fma(x, r, sigma, ties, counter)
    z, _ = sub(t, sigma, ties, counter)

    # diagnostics, exactly in scaled integers
    if z.is_zero():
        k = 0
        in_range = False
    else:
        shift = z.e + n
        if shift >= 0:
            k = (z.sign * z.m) << shift
        elif z.m & ((1 << -shift) - 1) == 0:
            k = (z.sign * z.m) >> -shift
        else:
            if check:
                raise TheoremViolation(f"z*2^N is not an integer: z={z.to_text()}, N={n}")
            k = 0
        in_range = z.m.bit_length() - 1 + z.e >= 1 - n
    ell = abs(k).bit_length()
    e0 = min(xr_exp, z.e)
    s_num = (xr_num << (xr_exp - e0)) - ((z.sign * z.m) << (z.e - e0))
    s = Fraction(s_num << e0) if e0 >= 0 else Fraction(s_num, 1 << -e0)
    if check and in_range:
        if not 2 <= ell <= fmt.p - 2:
            raise TheoremViolation(f"ell={ell} outside [2, p-2] for z={z.to_text()}")
        # |s| <= 2^(-N-1)  <=>  |s_num| * 2^(e0+N+1) <= 1
        d = e0 + n + 1
        s_ok = (abs(s_num) << d) <= 1 if d >= 0 else abs(s_num) <= 1 << -d
        if not s_ok:
            raise TheoremViolation(f"|x*R - z| = {abs(s)} > 2^-(N+1)")
    return z, ZExtractInfo(k, ell, s, in_range, sigma)


def first_step(
    x: Fpn,
    z: Fpn,
    cs: ConstantSet,
    ties: str = TIES_EVEN,
    counter: OpCounter | None = None,
) -> tuple[Fpn, bool]:
    """u = fma(x - z*C1); exact is True when no rounding occurred.

    Under the audited hypotheses exactness is a theorem, so an inexact
    flag here is a finding for the harness, not a runtime error.
    """
    u, exact = fma(-z, cs.c1, x, ties, counter)
    return u, exact


class SecondStepResult(NamedTuple):
    v1: Fpn
    v2: Fpn
    exact: bool              # v1 + v2 == x - z*C1 - z*C2 exactly
    ops: int                 # rounded operations in this step (always 9)
    last_line_exact: bool    # the three final ops committed no rounding


def second_step(
    x: Fpn,
    z: Fpn,
    u: Fpn,
    cs: ConstantSet,
    ties: str = TIES_EVEN,
    counter: OpCounter | None = None,
    check: bool = True,
) -> SecondStepResult:
    """The 9-flop exact second reduction step.

    Runs  v1 = o(u - z*C2); (p1,p2) = Fast2Mult(z, C2);
    (t1,t2) = Fast2Sum(u, -p1); v2 = o(o(o(t1-v1)+t2)-p2)  and verifies
    the claimed exactness facts.  u comes from first_step, it is not
    recomputed.  A Fast2Sum precondition failure raises TheoremViolation
    (unreachable for audited constants).
    """
    ops = OpCounter()
    c2 = cs.c2
    v1, _ = fma(-z, c2, u, ties, ops)
    try:
        p1, p2 = fast2mult(z, c2, ties, ops)
        t1, t2 = fast2sum(u, -p1, ties, ops)
    except PreconditionError as exc:
        raise TheoremViolation(f"error-free transformation failed: {exc}") from exc
    d1, ex1 = sub(t1, v1, ties, ops)
    d2, ex2 = add(d1, t2, ties, ops)
    v2, ex3 = sub(d2, p2, ties, ops)
    last_line_exact = ex1 and ex2 and ex3

    # v1 + v2 == x - z*C1 - z*C2, compared exactly in scaled integers
    c1 = cs.c1
    zm = z.sign * z.m
    terms = (
        (v1.sign * v1.m, v1.e),
        (v2.sign * v2.m, v2.e),
        (-(x.sign * x.m), x.e),
        (zm * (c1.sign * c1.m), z.e + c1.e),
        (zm * (c2.sign * c2.m), z.e + c2.e),
    )
    e0 = min(t[1] for t in terms)
    exact = sum(num << (e - e0) for num, e in terms) == 0

    if check:
        if not last_line_exact:
            raise TheoremViolation(
                "second-step last line rounded: "
                f"x={x.to_text()}, z={z.to_text()}"
            )
        # proof facts: t1 and v1 sit on the 2^(-N-1) * ulp2(C1) grid
        fmt = x.fmt
        g = -cs.n - 1 + max(c1.e - (fmt.p - 1), fmt.e_min_q)
        for name, val in (("t1", t1), ("v1", v1)):
            if not val.is_zero() and val.max_quantum() < g:
                raise TheoremViolation(
                    f"{name} is not a multiple of 2^(-N-1)*ulp2(C1): {val.to_text()}"
                )
    if counter is not None:
        counter.rounded += ops.rounded
    return SecondStepResult(v1, v2, exact, ops.rounded, last_line_exact)


def third_step(
    v1: Fpn,
    v2: Fpn,
    z: Fpn,
    cs: ConstantSet,
    ties: str = TIES_EVEN,
    counter: OpCounter | None = None,
) -> Fpn:
    """w = o(v2 - z*C3); (v1, w) is the 2p-bit unevaluated reduced argument."""
    w, _ = fma(-z, cs.c3, v2, ties, counter)
    return w


def residual_interval(
    x: Fpn,
    z: Fpn,
    v1: Fpn,
    w: Fpn,
    cs: ConstantSet,
    bits: int | None = None,
) -> tuple[Fraction, Fraction]:
    """Bounds on |v1 + w - (x - z*C)| from the enclosure of C.

    The paper gives no accuracy theorem for the third step, so the
    residual is measured, not asserted.
    """
    if cs.constant is None:
        raise ValueError("synthetic constant sets have no underlying C")
    enc = cs.constant.enclosure(bits or 6 * cs.fmt.p)
    base = v1.value + w.value - x.value
    ends = (base + z.value * enc.lo, base + z.value * enc.hi)
    lo, hi = min(ends), max(ends)
    if lo <= 0 <= hi:
        return Fraction(0), max(abs(lo), abs(hi))
    return min(abs(lo), abs(hi)), max(abs(lo), abs(hi))


@dataclass(frozen=True)
class ReductionOutput:
    """Everything the pipeline produced for one x, plus diagnostics."""

    z: Fpn
    u: Fpn
    v1: Fpn
    v2: Fpn
    w: Fpn
    ell: int
    s: Fraction
    exact_first: bool
    exact_second: bool
    rounding_ops_second: int
    in_thm_range: bool
    residual_lo: Optional[Fraction] = None
    residual_hi: Optional[Fraction] = None


def reduce(
    x: Fpn,
    cs: ConstantSet,
    n: int | None = None,
    ties: str = TIES_EVEN,
    check: bool = True,
    measure_residual: bool = True,
) -> ReductionOutput:
    """Run the full pipeline: extract z, first, second, and third steps."""
    if n is None:
        n = cs.n
    z, info = extract_z(x, cs, n, ties, check=check)
    u, exact1 = first_step(x, z, cs, ties)
    ss = second_step(x, z, u, cs, ties, check=check)
    w = third_step(ss.v1, ss.v2, z, cs, ties)
    res_lo = res_hi = None
    if measure_residual and cs.constant is not None:
        res_lo, res_hi = residual_interval(x, z, ss.v1, w, cs)
    return ReductionOutput(
        z=z,
        u=u,
        v1=ss.v1,
        v2=ss.v2,
        w=w,
        ell=info.ell,
        s=info.s,
        exact_first=exact1,
        exact_second=ss.exact,
        rounding_ops_second=ss.ops,
        in_thm_range=info.in_thm_range,
        residual_lo=res_lo,
        residual_hi=res_hi,
    )
