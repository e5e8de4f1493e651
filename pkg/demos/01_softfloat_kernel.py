"""Tour of the soft-float kernel: exact values, one rounding per op.

Run:  python demos/01_softfloat_kernel.py
"""

from fractions import Fraction

from argred.softfp import (
    DOUBLE,
    Format,
    Fpn,
    fast2mult,
    fast2sum,
    fma,
    round_nearest,
    sub,
    ulp,
    ulp2,
)

# A format is just (precision, minimum quantum exponent, overflow bound).
# Presets match IEEE single/double/extended/quad, but any p > 3 works.
tiny = Format(p=8, e_min_q=-40, e_max=40)
print("double:", DOUBLE)
print("a toy 8-bit format:", tiny)

# Values are sign * m * 2^e, kept canonical, printed exactly.
x = Fpn.from_int(10, DOUBLE)
print("\n10.0 as an FPN:", x, "value =", x.value)

# Rounding takes an exact rational and returns the nearest FPN.
third = round_nearest(Fraction(1, 3), DOUBLE)
print("nearest double to 1/3:", third)
print("  error =", float(third.value - Fraction(1, 3)), "<= ulp/2 =", float(ulp(third) / 2))

# You can round to fewer digits than the format holds; the result is
# re-expressed canonically.  This is how the reduction constants get
# their trailing zero bits.
c1ish = round_nearest(Fraction(1, 3), DOUBLE, target_p=51)
print("1/3 at 51 bits:", c1ish, " last two bits zero:", c1ish.m % 4 == 0)

# fma rounds a*b + c once.  The exact flag tells you when it did not
# round at all; the whole argument-reduction story is about arranging
# for that flag to be True.
a = Fpn.from_int(3, DOUBLE)
r = Fpn.from_text("5734161139222659 * 2^-54", DOUBLE)  # ~ 1/pi
sigma = Fpn(1, 3, 51, DOUBLE)
res, exact = fma(a, r, sigma)
print("\nfma(3, ~1/pi, 3*2^51) =", res, " exact:", exact)
print("  the fractional part of 3/pi was absorbed by the big constant")

# Error-free transformations: two ops that return a rounded result plus
# the exact error, so nothing is lost.
s, e = fast2sum(Fpn.from_int(1, DOUBLE), Fpn.pow2(-53, DOUBLE))
print("\nfast2sum(1, 2^-53) = (", s, ",", e, ")")
print("  recomposes exactly:", s.value + e.value == 1 + Fraction(1, 2**53))

h, low = fast2mult(third, third)
print("fast2mult((1/3)_53, itself): head", h, " tail", low)
print("  head + tail == exact product:", h.value + low.value == third.value * third.value)

# Sterbenz subtraction: close operands subtract exactly.
y = Fpn.from_int(7, tiny)
z = Fpn.from_int(9, tiny)
print("\nsub(9, 7) in the toy format is exact:", sub(z, y).exact)

print("\nulp(1.0) at p=53:", ulp(Fpn.from_int(1, DOUBLE)))
print("ulp2 of the pi constant:", ulp2(Fpn.from_text("7074237752028440 * 2^-51", DOUBLE)))
