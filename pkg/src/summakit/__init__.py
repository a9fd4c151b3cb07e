"""summakit: absolute matrix summability toolkit.

Normal (lower triangular, nonzero diagonal) matrix algebra, weighted-mean
transforms of series, truncated absolute k-norm profiles, boundedness
diagnostics for the summability factor conditions, and a verification
harness that replays the underlying algebraic identities numerically.
"""

__version__ = "0.1.0"

from .conditions import (
    ConditionReport,
    L1LkBound,
    TailSpec,
    check_c9,
    check_c10,
    check_c11,
    check_c12,
    check_c13,
    check_c14,
    check_c15,
    check_c16,
    check_theorem_a,
    classify_trend,
    default_tail,
    l1_lk_bound,
    w_sequence,
)
from .errors import (
    BadExponentError,
    ConfigError,
    DegenerateProbeError,
    IndexOutOfRangeError,
    LengthMismatchError,
    ShapeMismatchError,
    SizeMismatchError,
    SummakitError,
    TailUnavailableError,
    ZeroDiagonalError,
)
from .harness import (
    PROBE_DIFFERENCE,
    PROBE_SHIFT,
    Decomposition,
    ProbeResult,
    build_cnv,
    build_dnr,
    decompose,
    empirical_constant,
    inequality20_ratio,
    key_identity_check,
    probe_series,
    run_probe,
)
from .matrices import (
    NormalMatrix,
    WeightSequence,
    apply_lower,
    bar_columns,
    bar_of,
    cesaro_matrix,
    hat_columns,
    hat_of,
    identity_matrix,
    invert_hat,
    make_normal,
    riesz_matrix,
)
from .series import (
    AbsKProfile,
    FactorSequence,
    SeriesSample,
    abs_k_profile,
    delta_transform_via_hat,
    factored_series,
    transform_partial_sums,
    x_norm,
    y_norm,
    y_norm_pow,
)

__all__ = [
    "__version__",
    # matrices
    "NormalMatrix",
    "WeightSequence",
    "make_normal",
    "identity_matrix",
    "cesaro_matrix",
    "riesz_matrix",
    "bar_of",
    "bar_columns",
    "hat_of",
    "hat_columns",
    "invert_hat",
    "apply_lower",
    # series
    "SeriesSample",
    "FactorSequence",
    "AbsKProfile",
    "transform_partial_sums",
    "delta_transform_via_hat",
    "abs_k_profile",
    "factored_series",
    "x_norm",
    "y_norm",
    "y_norm_pow",
    # conditions
    "TailSpec",
    "ConditionReport",
    "L1LkBound",
    "default_tail",
    "classify_trend",
    "check_c9",
    "check_c10",
    "check_c11",
    "check_c12",
    "check_c13",
    "check_c14",
    "check_c15",
    "check_c16",
    "check_theorem_a",
    "w_sequence",
    "l1_lk_bound",
    # harness
    "PROBE_DIFFERENCE",
    "PROBE_SHIFT",
    "ProbeResult",
    "Decomposition",
    "probe_series",
    "run_probe",
    "inequality20_ratio",
    "empirical_constant",
    "decompose",
    "key_identity_check",
    "build_cnv",
    "build_dnr",
    # errors
    "SummakitError",
    "ZeroDiagonalError",
    "ShapeMismatchError",
    "LengthMismatchError",
    "SizeMismatchError",
    "TailUnavailableError",
    "BadExponentError",
    "IndexOutOfRangeError",
    "DegenerateProbeError",
    "ConfigError",
]
