"""Why the fma matters: the classic two-rounding first step loses bits.

The naive sequence rounds twice: first the product o(z*C1), then the
subtraction o(x - o(z*C1)).  Once z needs enough bits, the product no
longer fits and the first rounding contaminates the reduced argument.
The fma computes x - z*C1 in one rounding, and under the audited
hypotheses that rounding is exact.

Run:  python demos/05_codywaite_failure.py
"""

from argred.constgen import gen_constants
from argred.realnum import PI
from argred.reduction import extract_z, first_step
from argred.softfp import DOUBLE, Fpn, mul, sub
from argred.theorems import demo_codywaite

report = demo_codywaite()
print("first failing x found by the scan:")
for key in ("x", "z", "C1_full", "two_round_u", "fma_u"):
    print(f"  {key:12s} = {report[key]}")
print("  two-rounding error vs x - z*C1_full:", report["two_round_error_vs_x_zC1full"])
print("  fma error vs x - z*C1:             ", report["fma_error_vs_x_zC1"])
print("  bits cancelled in x - z*C1:        ", report["cancellation_bits"])

# The effect grows with z: count how often the two-rounding path commits
# an error over the first thousand integers, versus the fma path.
cs = gen_constants(PI, DOUBLE)
two_round_bad = fma_bad = 0
for k in range(3, 1000):
    x = Fpn.from_int(k, DOUBLE)
    z, _ = extract_z(x, cs)
    if z.is_zero():
        continue
    prod, prod_exact = mul(z, cs.c1)
    u2, diff_exact = sub(x, prod)
    if not (prod_exact and diff_exact):
        two_round_bad += 1
    if not first_step(x, z, cs)[1]:
        fma_bad += 1
print(f"\nintegers 3..999: two-rounding path inexact for {two_round_bad}, "
      f"fma path inexact for {fma_bad}")
