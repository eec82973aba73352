"""Exact-arithmetic analysis of player effects, influence, and pivotality."""

from .analysis import (
    EFFECT_VARIANCE_RATIO,
    EffectEstimate,
    EffectIdentity,
    EffectReport,
    FourierTable,
    PivotalReport,
    count_effect,
    count_pivotal,
    effect,
    effect_identity,
    effect_report,
    estimate_effect,
    fourier,
    influence,
    pivotal_player,
    pivotal_report,
    pivotal_set,
    signed_effect,
)
from .boolfn import (
    Certificate,
    CertificateError,
    ConstantFn,
    DenseTable,
    DictatorFn,
    MajorityFn,
    MajPFn,
    MonotoneResult,
    ParityFn,
    PartialTable,
    PlayerFunction,
    PreconditionError,
    UpwardClosure,
    effect_counterexample,
    influence_counterexample,
    majp_fn,
    monotone_check,
    monotone_extend,
)
from .dist import (
    BINARY,
    PARTICIPATION,
    Alphabet,
    Distribution,
    DistributionError,
    ExplicitDist,
    KwiseResult,
    NullConditionError,
    Outcome,
    PivotalError,
    ProductDist,
    UndefinedPointError,
    mixture,
)
from .generators import (
    complement_mu,
    hadamard_mu,
    majp_dist,
    mixture_D,
    uniform_product,
)
from .theorems import (
    EliminationResult,
    ReductionResult,
    TightnessRow,
    Verdict,
    convex_decomposition_check,
    elimination_set,
    majp_tightness,
    reduce_to_binary,
    verify_binary_bound,
    verify_elimination,
    verify_reduction,
    verify_sum_bound,
    verify_thm1,
    verify_warmup,
)

__version__ = "0.1.0"
