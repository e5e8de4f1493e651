"""Kernel tests: rounding, fma, ulp, error-free transformations.

Expected values come from two independent oracles: a candidate-distance
oracle (exact |v - m*2^e| comparisons around the floor significand) and,
at small precision, full enumeration of every representable value in a
window.
"""

import random
from fractions import Fraction

import pytest

from argred.softfp import (
    DOUBLE,
    SINGLE,
    TIES_AWAY,
    TIES_EVEN,
    Format,
    Fpn,
    OpCounter,
    PreconditionError,
    UnderflowError,
    add,
    fast2mult,
    fast2sum,
    fma,
    is_representable,
    mul,
    round_nearest,
    sub,
    ulp,
    ulp2,
)

P4 = Format(p=4, e_min_q=-20, e_max=40)
P5 = Format(p=5, e_min_q=-20, e_max=40)
P6 = Format(p=6, e_min_q=-20, e_max=40)


def nearest_by_candidates(v: Fraction, fmt: Format, digits: int, ties: str = TIES_EVEN) -> Fpn:
    """Oracle: decide the rounding by exact distance comparison."""
    if v == 0:
        return Fpn.zero(fmt)
    a = abs(v)
    top = 0
    while Fraction(2) ** (top + 1) <= a:
        top += 1
    while Fraction(2) ** top > a:
        top -= 1
    eq = max(top - digits + 1, fmt.e_min_q)
    quantum = Fraction(2) ** eq
    m0 = int(a / quantum)
    best = None
    for m in (m0 - 1, m0, m0 + 1, m0 + 2):
        if m < 0:
            continue
        dist = abs(a - m * quantum)
        if best is None or dist < best[0]:
            best = (dist, m)
        elif dist == best[0]:
            if ties == TIES_AWAY:
                best = (dist, max(best[1], m))
            else:
                best = (dist, best[1] if best[1] % 2 == 0 else m)
    sign = 1 if v > 0 else -1
    return Fpn(sign, best[1], eq, fmt)


def all_values(fmt: Format, e_lo: int, e_hi: int, subnormals_at: int | None = None):
    """Every positive canonical value with quantum exponent in [e_lo, e_hi)."""
    out = []
    if subnormals_at is not None:
        for m in range(1, 1 << (fmt.p - 1)):
            out.append(Fpn(1, m << (subnormals_at - fmt.e_min_q), fmt.e_min_q, fmt))
    for e in range(e_lo, e_hi):
        for m in range(1 << (fmt.p - 1), 1 << fmt.p):
            out.append(Fpn(1, m, e, fmt))
    return out


# ---------------------------------------------------------------------------
# rounding
# ---------------------------------------------------------------------------


def test_round_one_third_double():
    got = round_nearest(Fraction(1, 3), DOUBLE, 53)
    assert got == Fpn(1, 6004799503160661, -54, DOUBLE)
    assert got == nearest_by_candidates(Fraction(1, 3), DOUBLE, 53)


def test_round_is_projection():
    rng = random.Random(7)
    for _ in range(2000):
        m = rng.randrange(1, 1 << DOUBLE.p)
        e = rng.randrange(-200, 200)
        x = Fpn(1, m, e, DOUBLE)
        assert round_nearest(x.value, DOUBLE) == x


def test_round_recip_r_to_51_bits_matches_table():
    # pi double column: C1 = o_51(1/R) re-expressed canonically at p=53
    r = Fpn.from_text("5734161139222659 * 2^-54", DOUBLE)
    got = round_nearest(1 / r.value, DOUBLE, 51)
    assert got.to_text() == "7074237752028440 * 2^-51"


def test_round_identity_exhaustive_small_p():
    # 16-binade window, p = 4..6: rounding is the identity on representable values
    for fmt in (P4, P5, P6):
        for x in all_values(fmt, -8, 8, subnormals_at=fmt.e_min_q):
            assert round_nearest(x.value, fmt) == x
            assert round_nearest(-x.value, fmt) == -x


def test_round_matches_enumeration_oracle_exhaustive():
    # every midpoint-adjacent rational in a window, checked against full enumeration
    fmt = P4
    values = all_values(fmt, -4, 4)
    grid = sorted(set(v.value for v in values))
    probes = []
    for a, b in zip(grid, grid[1:]):
        mid = (a + b) / 2
        probes += [mid, (a + mid) / 2, (mid + b) / 2, mid + Fraction(1, 997)]
    for ties in (TIES_EVEN, TIES_AWAY):
        for v in probes:
            got = round_nearest(v, fmt, ties=ties)
            best = min(grid, key=lambda g: (abs(v - g),))
            dist = abs(v - best)
            cands = [g for g in grid if abs(v - g) == dist]
            if len(cands) == 1:
                assert got.value == cands[0], (v, ties)
            else:
                assert got.value in cands
                lo, hi = min(cands), max(cands)
                if ties == TIES_AWAY:
                    assert got.value == hi
                else:
                    assert got.m % 2 == 0


def test_round_monotone():
    fmt = P4
    vals = sorted(v.value for v in all_values(fmt, -4, 4))
    probes = []
    rng = random.Random(3)
    for _ in range(4000):
        a = Fraction(rng.randrange(-(1 << 12), 1 << 12), rng.randrange(1, 1 << 10))
        probes.append(a)
    probes.sort()
    for ties in (TIES_EVEN, TIES_AWAY):
        prev = None
        for v in probes:
            cur = round_nearest(v, fmt, ties=ties)
            if prev is not None:
                assert prev <= cur
            prev = cur
    assert vals == sorted(vals)


def test_round_error_at_most_half_ulp():
    rng = random.Random(11)
    for _ in range(3000):
        v = Fraction(rng.randrange(1, 1 << 40), rng.randrange(1, 1 << 20))
        r = round_nearest(v, SINGLE)
        if r.is_normal():
            assert abs(r.value - v) <= ulp(r) / 2


def test_round_overflow_raises():
    with pytest.raises(OverflowError):
        round_nearest(Fraction(1 << 50), P4)
    # largest finite value rounds fine
    top = Fpn(1, (1 << P4.p) - 1, P4.e_max - P4.p + 1, P4)
    assert round_nearest(top.value, P4) == top
    with pytest.raises(OverflowError):
        round_nearest(top.value + ulp(top), P4)


def test_subnormal_rounding_and_zero_ties():
    lam = Fpn.pow2(P4.e_min_q, P4)
    assert round_nearest(lam.value / 2, P4) == Fpn.zero(P4)  # tie to even 0
    assert round_nearest(lam.value / 2, P4, ties=TIES_AWAY) == lam
    assert round_nearest(lam.value / 3, P4) == Fpn.zero(P4)
    assert round_nearest(2 * lam.value / 3, P4) == lam


# ---------------------------------------------------------------------------
# arithmetic ops
# ---------------------------------------------------------------------------


def test_fma_spec_examples():
    r = Fpn.from_text("5734161139222659 * 2^-54", DOUBLE)
    sigma = Fpn(1, 3, 51, DOUBLE)
    x = Fpn.from_int(3, DOUBLE)
    got, exact = fma(x, r, sigma)
    assert got.value == sigma.value + 1
    assert not exact  # low bits of 3R were absorbed

    one = Fpn.from_int(1, DOUBLE)
    small, exact = fma(one, Fpn.from_int(5, DOUBLE), Fpn.zero(DOUBLE))
    assert small.value == 5 and exact

    tie, _ = fma(one, one, Fpn.pow2(-DOUBLE.p, DOUBLE))
    assert tie == one  # ties-to-even keeps the even significand


def test_fma_against_exact_oracle_random_campaign():
    # spec invariant: fma = round(exact(a*b + c)), 10^6 random triples
    rng = random.Random(20240817)
    trials = 1_000_000
    fmt = DOUBLE
    lo_m, hi_m = 1 << (fmt.p - 1), 1 << fmt.p
    for i in range(trials):
        a = Fpn(rng.choice((1, -1)), rng.randrange(lo_m, hi_m), rng.randrange(-40, 40), fmt)
        b = Fpn(rng.choice((1, -1)), rng.randrange(lo_m, hi_m), rng.randrange(-40, 40), fmt)
        c = Fpn(rng.choice((1, -1)), rng.randrange(lo_m, hi_m), rng.randrange(-40, 40), fmt)
        got, exact = fma(a, b, c)
        v = a.value * b.value + c.value
        assert got == round_nearest(v, fmt), (a, b, c)
        assert exact == (got.value == v)


def test_add_sub_mul_flags():
    x = Fpn.from_int(3, DOUBLE)
    assert sub(x, x).value == Fpn.zero(DOUBLE)
    assert sub(x, x).value.sign == 1  # +0
    assert sub(x, x).exact

    y = Fpn.pow2(-70, DOUBLE)
    s, exact = add(Fpn.from_int(1, DOUBLE), y)
    assert not exact and s == Fpn.from_int(1, DOUBLE)

    z, exact = mul(Fpn.pow2(12, DOUBLE), x)
    assert exact and z.value == 3 * (1 << 12)


def test_sterbenz_subtraction_exact_exhaustive():
    # y/2 <= x <= 2y implies sub is exact, exhaustively at p in {4,5,6}
    for fmt in (P4, P5, P6):
        vals = all_values(fmt, 0, 8, subnormals_at=0)
        for ties in (TIES_EVEN, TIES_AWAY):
            for y in vals:
                for x in vals:
                    if 2 * x.value >= y.value and x.value <= 2 * y.value:
                        assert sub(x, y, ties=ties).exact, (x, y, fmt.p)


def test_mixed_format_rejected():
    with pytest.raises(ValueError):
        add(Fpn.from_int(1, P4), Fpn.from_int(1, P5))


# ---------------------------------------------------------------------------
# ulp and representability
# ---------------------------------------------------------------------------


def test_ulp_values():
    c1 = Fpn.from_text("7074237752028440 * 2^-51", DOUBLE)
    assert ulp(c1) == Fraction(1, 2**51)
    assert ulp2(c1) == Fraction(1, 2**103)
    assert ulp(Fpn.from_int(1, DOUBLE)) == Fraction(1, 2 ** (DOUBLE.p - 1))
    lam = Fpn.pow2(DOUBLE.e_min_q, DOUBLE)
    assert ulp(lam) == lam.value
    assert ulp(Fpn.zero(DOUBLE)) == lam.value


def test_is_representable():
    assert is_representable(Fraction(3, 2**5), 2, DOUBLE)
    assert not is_representable(Fraction((1 << DOUBLE.p) + 1), DOUBLE.p, DOUBLE)
    assert is_representable(0, 2, DOUBLE)
    assert not is_representable(Fraction(1, 3), DOUBLE.p, DOUBLE)
    assert not is_representable(Fraction(1, 2 ** (-DOUBLE.e_min_q + 1)), DOUBLE.p, DOUBLE)


# ---------------------------------------------------------------------------
# error-free transformations
# ---------------------------------------------------------------------------


def rand_fpn(rng, fmt, e_lo, e_hi, allow_zero=False):
    if allow_zero and rng.random() < 0.01:
        return Fpn.zero(fmt)
    m = rng.randrange(1 << (fmt.p - 1), 1 << fmt.p)
    return Fpn(rng.choice((1, -1)), m, rng.randrange(e_lo, e_hi), fmt)


def test_fast2sum_trivial_cases():
    one = Fpn.from_int(1, DOUBLE)
    x = Fpn.from_text("123456789 * 2^-13", DOUBLE)
    s, e = fast2sum(x, Fpn.zero(DOUBLE))
    assert s == x and e.is_zero()
    s, e = fast2sum(one, Fpn.pow2(-DOUBLE.p, DOUBLE))
    assert s == one and e == Fpn.pow2(-DOUBLE.p, DOUBLE)


def test_fast2sum_random_recomposition():
    rng = random.Random(99)
    fmt = DOUBLE
    n = 0
    while n < 100_000:
        a = rand_fpn(rng, fmt, -30, 30, allow_zero=True)
        b = rand_fpn(rng, fmt, -30, 30, allow_zero=True)
        if abs(a).value < abs(b).value:
            a, b = b, a
        for ties in (TIES_EVEN, TIES_AWAY):
            s, e = fast2sum(a, b, ties=ties)
            assert s.value + e.value == a.value + b.value
            assert s == round_nearest(a.value + b.value, fmt, ties=ties)
        n += 1


def test_fast2sum_precondition_checked():
    # small |a| with a coarser-grained b: no valid exponent ordering
    fmt = P4
    a = Fpn(1, 9, -6, fmt)   # 9 * 2^-6, odd significand
    b = Fpn(1, 9, 0, fmt)    # much larger magnitude
    with pytest.raises(PreconditionError):
        fast2sum(a, b)
    # the exponent-ordering escape hatch: a tiny but coarse a is fine
    a2 = Fpn.pow2(3, fmt)
    b2 = Fpn(1, 9, 0, fmt)
    s, e = fast2sum(a2, b2)  # |a2| < |b2| but e_a >= e_b holds
    assert s.value + e.value == a2.value + b2.value


def test_fast2mult_random_recomposition():
    rng = random.Random(100)
    fmt = DOUBLE
    for _ in range(100_000):
        a = rand_fpn(rng, fmt, -20, 20)
        b = rand_fpn(rng, fmt, -20, 20)
        h, low = fast2mult(a, b)
        assert h.value + low.value == a.value * b.value
    h, low = fast2mult(Fpn.from_int(3, fmt), Fpn.pow2(9, fmt))
    assert low.is_zero() and h.value == 3 * 512


def test_fast2mult_tail_underflow_raises():
    fmt = P4
    a = Fpn(1, 9, fmt.e_min_q, fmt)
    b = Fpn(1, 9, -3, fmt)  # product tail falls below 2^e_min_q
    with pytest.raises(UnderflowError):
        fast2mult(a, b)


def test_op_counter_counts_rounded_ops():
    c = OpCounter()
    one = Fpn.from_int(1, DOUBLE)
    fast2sum(one, Fpn.pow2(-10, DOUBLE), counter=c)
    assert c.rounded == 3
    fast2mult(one, one, counter=c)
    assert c.rounded == 5
    fma(one, one, one, counter=c)
    assert c.rounded == 6


# ---------------------------------------------------------------------------
# representation plumbing
# ---------------------------------------------------------------------------


def test_text_roundtrip_decimal_and_hex():
    rng = random.Random(5)
    for _ in range(500):
        x = rand_fpn(rng, DOUBLE, -300, 300, allow_zero=True)
        assert Fpn.from_text(x.to_text(), DOUBLE) == x
        assert Fpn.from_text(x.to_text(hex_sig=True), DOUBLE) == x
    assert Fpn.from_text("-11464520 * 2^-45", SINGLE).sign == -1


def test_canonical_construction():
    # non-canonical inputs canonicalize; inexact ones are rejected
    assert Fpn(1, 6, 0, P4) == Fpn(1, 12, -1, P4)
    assert Fpn(1, 1 << 10, -3, P4).m == 8  # 2^10 * 2^-3 == 8 * 2^4
    with pytest.raises(ValueError):
        Fpn(1, (1 << P4.p) + 1, 0, P4)
    with pytest.raises(ValueError):
        Fpn(1, 3, P4.e_min_q - 1, P4)
    z = Fpn(-1, 0, 5, P4)
    assert z.sign == 1 and z.e == P4.e_min_q


def test_next_up_down_adjacent_exhaustive():
    fmt = P4
    vals = [Fpn.zero(fmt)] + all_values(fmt, fmt.e_min_q, fmt.e_min_q + 6, subnormals_at=fmt.e_min_q)
    ordered = sorted(set(vals), key=lambda v: v.value)
    for a, b in zip(ordered, ordered[1:]):
        assert a.next_up() == b
        assert b.next_down() == a
        assert (-b).next_up() == -a
