"""Drive the verification harness: exhaustive sweeps and random campaigns.

Every check pits the pipeline against exact integer/rational arithmetic.
Run:  python demos/04_theorem_checks.py        (takes ~half a minute)
"""

from argred.theorems import (
    CheckConfig,
    check_correct1,
    check_correct3,
    check_sterbenz,
    check_sterbenz_approx2,
    check_thm6,
    check_thm7,
)

# Exact subtraction after cancellation, any radix: exhaustive.
res = check_sterbenz(CheckConfig(theorem="sterbenz", beta=3, p=4))
print(f"sterbenz radix 3, p=4: {res.cases} pairs, failures: {len(res.failures)}")

res = check_sterbenz_approx2(CheckConfig(theorem="sterbenz2", beta=2, p1=3, p2=6))
print(f"sterbenz2 p1=3 -> p2=6: {res.cases} pairs, failures: {len(res.failures)}")

# The z-extraction and first-step guarantees, exhaustive at p=8 over a
# slice of the R space (r_step strides the significands).
res = check_correct3(CheckConfig(theorem="correct3", p=8, r_step=16))
print(f"first step exhaustive p=8: {res.cases} cases, failures: {len(res.failures)}")
print("  ell values that occurred:", res.stats["ell_values"])

# The second-step equality on the real pi constants, seeded random.
res = check_thm6(
    CheckConfig(theorem="thm6", mode="randomized", constant="pi", fmt="double",
                n_values=(0,), trials=50_000, seed=7)
)
print(f"second step, 50k random doubles: failures: {len(res.failures)}, "
      f"always 9 flops: {res.stats['ops_always_9']}")

# The constant-distance bound across all eight preset sets.
res = check_thm7(CheckConfig(theorem="thm7"))
print(f"|C - C1| <= 4 ulp(C1) on {res.cases} preset sets: failures: {len(res.failures)}")

# Counterexample mining: weaken q >= 2 to q = 1 and search.  Absence of
# a counterexample is reported, never turned into a converse claim.
res = check_correct1(CheckConfig(theorem="correct1", p=6, r_step=2, n_values=(0,), q_values=(1,)))
if res.failures:
    print(f"q=1 mining: found {len(res.failures)} counterexamples, e.g. {res.failures[0]}")
else:
    print(f"q=1 mining: no counterexample found in {res.cases} cases (informative only)")
