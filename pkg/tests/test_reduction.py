"""Pipeline tests: z-extraction, the exact first/second steps, the third step."""

import random
from fractions import Fraction

import pytest

from argred.softfp import DOUBLE, SINGLE, TIES_AWAY, TIES_EVEN, Fpn, Format, ulp
from argred.realnum import LN2, PI
from argred.constgen import gen_constants, synthetic_set
from argred.reduction import (
    ReductionRangeError,
    extract_z,
    first_step,
    reduce,
    residual_interval,
    second_step,
    sigma_for,
    third_step,
    xr_bound,
)

CS_PI = gen_constants(PI, DOUBLE)
CS_LN2 = gen_constants(LN2, DOUBLE)


def test_sigma_and_bound():
    assert sigma_for(DOUBLE, 0).value == 3 * 2**51
    assert xr_bound(DOUBLE, 0) == 2**51 - 1
    assert xr_bound(DOUBLE, 3) == 2**48 - Fraction(1, 8)


def test_extract_z_zero():
    z, info = extract_z(Fpn.zero(DOUBLE), CS_PI)
    assert z.is_zero() and info.k == 0 and info.s == 0 and not info.in_thm_range


def test_extract_z_small_arguments():
    z, info = extract_z(Fpn.from_int(3, DOUBLE), CS_PI)
    assert z.value == 1  # 3*R ~ 0.955 snaps to 1
    z, info = extract_z(Fpn.from_int(10, DOUBLE), CS_PI)
    assert z.value == 3 and info.ell == 2
    assert abs(info.s) <= Fraction(1, 2)
    assert info.s == 10 * CS_PI.r.value - 3


def test_extract_z_respects_n():
    # N = 3: z lands on the 2^-3 grid
    z, info = extract_z(Fpn.from_int(10, DOUBLE), CS_PI, n=3)
    assert info.k == z.value * 8
    assert abs(info.s) <= Fraction(1, 16)
    assert abs(z.value - 10 * CS_PI.r.value) <= Fraction(1, 16)


def test_extract_z_negative_symmetric():
    zp, ip = extract_z(Fpn.from_int(10, DOUBLE), CS_PI)
    zn, im = extract_z(Fpn.from_int(-10, DOUBLE), CS_PI)
    assert zn.value == -zp.value and im.s == -ip.s


def test_range_boundary():
    # largest in-range x succeeds; its successor raises
    bound = xr_bound(DOUBLE, 0)
    from argred.softfp import round_nearest

    x = round_nearest(bound / CS_PI.r.value, DOUBLE)
    while x.value * CS_PI.r.value > bound:
        x = x.next_down()
    assert reduce(x, CS_PI, measure_residual=False).rounding_ops_second == 9
    with pytest.raises(ReductionRangeError):
        extract_z(x.next_up(), CS_PI)


def test_first_step_examples():
    x = Fpn.from_int(10, DOUBLE)
    z, _ = extract_z(x, CS_PI)
    u, exact = first_step(x, z, CS_PI)
    assert exact
    assert u.value == 10 - 3 * CS_PI.c1.value
    assert abs(float(u.value) - 0.57522) < 1e-4
    # z = 0 leaves x untouched
    u0, exact0 = first_step(x, Fpn.zero(DOUBLE), CS_PI)
    assert exact0 and u0 == x


def test_second_step_example():
    x = Fpn.from_int(10, DOUBLE)
    z, _ = extract_z(x, CS_PI)
    u, _ = first_step(x, z, CS_PI)
    ss = second_step(x, z, u, CS_PI)
    assert ss.exact and ss.ops == 9 and ss.last_line_exact
    assert ss.v1.value + ss.v2.value == 10 - 3 * (CS_PI.c1.value + CS_PI.c2.value)
    # v1 is the correctly rounded u - z*C2
    target = u.value - 3 * CS_PI.c2.value
    assert abs(ss.v1.value - target) <= ulp(ss.v1) / 2


def test_fast2mult_exact_for_unit_z():
    # z = 1 against the double pi C2: head is C2 itself, tail zero
    from argred.softfp import fast2mult

    one = Fpn.from_int(1, DOUBLE)
    h, low = fast2mult(one, CS_PI.c2)
    assert h == CS_PI.c2 and low.is_zero()


def test_second_step_zero_z():
    x = Fpn.from_int(10, DOUBLE)
    z = Fpn.zero(DOUBLE)
    u, _ = first_step(x, z, CS_PI)
    ss = second_step(x, z, u, CS_PI)
    assert ss.v1 == u and ss.v2.is_zero() and ss.exact and ss.ops == 9


def test_third_step_and_residual():
    x = Fpn.from_int(10, DOUBLE)
    out = reduce(x, CS_PI)
    # w is the rounding of v2 - z*C3
    assert abs(out.w.value - (out.v2.value - 3 * CS_PI.c3.value)) <= ulp(out.w) / 2
    w = third_step(out.v1, out.v2, Fpn.zero(DOUBLE), CS_PI)
    assert w == out.v2  # z = 0 passes v2 through
    # the measured residual brackets the true error of v1 + w vs 10 - 3*pi
    enc = PI.enclosure(500)
    true_err = abs(out.v1.value + out.w.value - (10 - 3 * ((enc.lo + enc.hi) / 2)))
    assert out.residual_lo <= true_err <= out.residual_hi
    assert out.residual_hi < Fraction(1, 2**100)


def test_reduce_zero():
    out = reduce(Fpn.zero(DOUBLE), CS_PI)
    assert out.z.is_zero() and out.u.is_zero() and out.v1.is_zero()
    assert out.v2.is_zero() and out.w.is_zero()
    assert out.exact_first and out.exact_second and out.rounding_ops_second == 9


def test_reduce_ln2_700():
    out = reduce(Fpn.from_int(700, DOUBLE), CS_LN2)
    assert out.exact_first and out.exact_second
    assert out.residual_hi < Fraction(1, 2**100)
    # z should approximate 700/ln2 ~ 1009.9
    assert out.z.value == 1010


def test_boundary_x_near_half_quantum_times_r():
    # stress x close to 2^(-N-1)*R, where z = 2^-N: the q = 2 first-step
    # theorem covers this case and the pipeline must stay exact
    from argred.softfp import round_nearest

    for cs in (CS_PI, CS_LN2):
        for n in (0, 1, 4):
            center = round_nearest(cs.r.value * Fraction(1, 2 ** (n + 1)), DOUBLE)
            x = center
            for _ in range(40):
                x = x.next_down()
            for _ in range(80):
                out = reduce(x, cs, n=n, measure_residual=False)
                assert out.exact_first, (cs.c_id, n, x)
                assert out.exact_second, (cs.c_id, n, x)
                x = x.next_up()


def test_randomized_double_campaign_both_modes():
    rng = random.Random(20240501)
    for cs in (CS_PI, CS_LN2):
        for n in (0, 5):
            for _ in range(4000):
                m = rng.randrange(1 << 52, 1 << 53)
                e = rng.randrange(-70, -n - 4)
                x = Fpn(rng.choice((1, -1)), m, e, DOUBLE)
                for ties in (TIES_EVEN, TIES_AWAY):
                    try:
                        out = reduce(x, cs, n=n, ties=ties, measure_residual=False)
                    except ReductionRangeError:
                        break
                    assert out.exact_first and out.exact_second, (cs.c_id, n, ties, x)
                    assert out.rounding_ops_second == 9


def test_single_precision_pipeline():
    cs = gen_constants(PI, SINGLE)
    out = reduce(Fpn.from_int(10, SINGLE), cs)
    assert out.z.value == 3 and out.exact_first and out.exact_second


def test_first_step_exact_random_r_at_single_and_double():
    # the first-step exactness is generic in R, not a property of pi/ln2:
    # random normal R, random in-range x, exact fma every time
    from argred.constgen import HypothesisViolation

    rng = random.Random(616)
    for fmt, trials in ((SINGLE, 4000), (DOUBLE, 4000)):
        p = fmt.p
        done = 0
        while done < trials:
            r = Fpn(1, rng.randrange(1 << (p - 1), 1 << p), rng.randrange(-p - 4, -p + 8), fmt)
            try:
                cs = synthetic_set(r, n=rng.choice((0, 1, 5)))
            except HypothesisViolation:
                continue
            for _ in range(40):
                x = Fpn(
                    rng.choice((1, -1)),
                    rng.randrange(1 << (p - 1), 1 << p),
                    rng.randrange(-2 * p, -p + 2),
                    fmt,
                )
                try:
                    z, _ = extract_z(x, cs)
                except ReductionRangeError:
                    continue
                u, exact = first_step(x, z, cs)
                assert exact, (fmt.p, r, x)
                done += 1


def test_synthetic_small_precision_pipeline():
    fmt = Format(p=8, e_min_q=-40, e_max=40)
    r = Fpn(1, 0b10100011, -8, fmt)
    cs = synthetic_set(r, n=1)
    out = reduce(Fpn(1, 0b11010010, -5, fmt), cs, measure_residual=False)
    assert out.exact_first and out.exact_second and out.rounding_ops_second == 9


def test_residual_interval_requires_constant():
    fmt = Format(p=8, e_min_q=-40, e_max=40)
    cs = synthetic_set(Fpn(1, 0b10100011, -8, fmt), n=1)
    with pytest.raises(ValueError):
        residual_interval(
            Fpn.from_int(1, fmt), Fpn.zero(fmt), Fpn.zero(fmt), Fpn.zero(fmt), cs
        )
