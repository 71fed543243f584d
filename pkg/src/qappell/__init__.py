"""q-Appell double series: evaluation and identity verification."""

from .errors import (
    DegenerateCoefficient,
    DegenerateDenominator,
    DomainError,
    NoConvergence,
    QAppellError,
    UnknownIdentity,
    UnsupportedRelation,
)
from .phi_series import EvalConfig, PhiKind, PhiSpec, SeriesValue, eval_phi, term
from .qcore import qbinom, qpoch_finite, qpoch_inf
from .recursions import ShiftRequest, TheoremId, cross_check, recursion_residual, recursion_rhs
from .relations import (
    RelationId,
    TermList,
    Variant,
    contiguous_residual,
    contiguous_rhs,
    evaluate_term_list,
)
from .verifier import ResidualReport, SampleDomain, run_suite, sample_point

__version__ = "0.1.0"
