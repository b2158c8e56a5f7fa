"""Sign-change analysis and subelliptic spectral scaling for polynomials.

The package decides the one-sided sign-change assumptions H1/H2 for a
polynomial potential, evaluates the associated derivative-sum quantities
and commutator brackets exactly, and measures the small-eigenvalue
scaling of the discretized semiclassical quadratic form over a sweep of
the large parameter.
"""

from .catalog import COMPLIANT_SECTIONS, ENTRIES, CatalogEntry, by_name
from .poly import BivariatePoly, PolyParseError, UnivariatePoly, parse_poly
from .psi import (
    CurveBranch,
    H1Verdict,
    MultipleSignChanges,
    SlopeEstimate,
    branch_slope,
    check_h1,
    check_h2,
    trace_branches,
)
from .quantities import (
    ClosedFormMismatch,
    ProfileReport,
    QuantityContext,
    ZeroScale,
    bracket_A,
    finite_type_order_x,
    g,
    in_n1,
    in_n2,
    m1,
    m2,
    scaled_profile,
    slow_variation_scan,
)
from .roots import (
    IdenticallyZero,
    IsolatingInterval,
    SignChangeEvent,
    Transition,
    classify_sign_changes,
    refine_interval,
    section_psi_bar_ok,
    squarefree_decomposition,
    sturm_roots,
)
from .spectral import (
    ExponentFit,
    GridPolicy,
    GridSpec,
    InsufficientData,
    MinEigResult,
    NoConvergence,
    PreconditionViolated,
    SweepRecord,
    assemble_L,
    assemble_witten,
    dense_min_eig,
    dirichlet_min_eig_exact,
    energy_identity_check,
    fit_exponent,
    min_eig,
    oned_sign_lemma_check,
    sample_on_grid,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BivariatePoly",
    "COMPLIANT_SECTIONS",
    "CatalogEntry",
    "ClosedFormMismatch",
    "CurveBranch",
    "ENTRIES",
    "ExponentFit",
    "GridPolicy",
    "GridSpec",
    "H1Verdict",
    "IdenticallyZero",
    "InsufficientData",
    "IsolatingInterval",
    "MinEigResult",
    "MultipleSignChanges",
    "NoConvergence",
    "PolyParseError",
    "PreconditionViolated",
    "ProfileReport",
    "QuantityContext",
    "SignChangeEvent",
    "SlopeEstimate",
    "SweepRecord",
    "Transition",
    "UnivariatePoly",
    "ZeroScale",
    "assemble_L",
    "assemble_witten",
    "bracket_A",
    "branch_slope",
    "by_name",
    "check_h1",
    "check_h2",
    "classify_sign_changes",
    "dense_min_eig",
    "dirichlet_min_eig_exact",
    "energy_identity_check",
    "finite_type_order_x",
    "fit_exponent",
    "g",
    "in_n1",
    "in_n2",
    "m1",
    "m2",
    "min_eig",
    "oned_sign_lemma_check",
    "parse_poly",
    "refine_interval",
    "sample_on_grid",
    "scaled_profile",
    "section_psi_bar_ok",
    "slow_variation_scan",
    "squarefree_decomposition",
    "sturm_roots",
    "sweep",
    "trace_branches",
]
