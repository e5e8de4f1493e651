"""fma-based argument reduction toolkit with a generic soft-float kernel.

The package builds and audits Cody-Waite style constant sets (R, C1, C2,
C3) for C in {pi, ln 2}, runs the exact three-step reduction pipeline at
any binary precision, and ships a verification harness that checks the
exactness theorems the pipeline relies on, exhaustively at small
precision and by seeded random campaigns at single/double.
"""

from .softfp import (
    DOUBLE,
    DOUBLE_EXTENDED,
    QUAD,
    SINGLE,
    TIES_AWAY,
    TIES_EVEN,
    ExactReal,
    Format,
    Fpn,
    OpCounter,
    OpResult,
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
from .realnum import (
    LN2,
    PI,
    AmbiguousRoundingError,
    Constant,
    RealEnclosure,
    ln2_enclosure,
    pi_enclosure,
    round_rational,
    safe_round,
)
from .constgen import (
    AuditReport,
    ConstantSet,
    HypothesisViolation,
    adjust_r_for_rc1_le_1,
    audit,
    format_table,
    gen_constants,
    set_to_record,
    synthetic_set,
)
from .reduction import (
    ReductionOutput,
    ReductionRangeError,
    TheoremViolation,
    extract_z,
    first_step,
    reduce,
    residual_interval,
    second_step,
    third_step,
)
from .theorems import CheckConfig, CheckResult, demo_codywaite, run_check

__version__ = "0.1.0"
