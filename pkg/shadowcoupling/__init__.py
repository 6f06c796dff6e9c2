"""
Shadow Coupling - Exact Supermartingale Transport on the Line

This package computes shadow measures, the regime-switching level u*, the
support curves (R, S, T) and the increasing supermartingale coupling between
finitely supported measures, in exact rational arithmetic, together with an
independent LP oracle that certifies minimality and optimality.

Architecture:
    errors: Exception hierarchy (ShadowCouplingError and subclasses)
    config: Environment-driven settings (.env via python-dotenv)
    measure: Discrete measures, quantiles and the quantile lift
    pwl: Piecewise-linear functions, potentials, convex hulls
    order: Pointwise, convex, cd, pc and pcd order decisions with witnesses
    shadow: Shadow of mu in nu and its excess
    regime: c(u), u*, x* and the irreducible decomposition
    coupling: Increasing, antitone and quantile couplings; verification; cost
    curves: Support triples (G, R, S, T, phi), lifted kernel, sampler
    oracle: Exact two-phase simplex and the certification LPs
    export: JSON/CSV serialization of instances, couplings and curves
    validation: Instance sanity warnings
    instances: Seeded random instance generators
    cli: Command-line front end
"""

from .errors import (
    ShadowCouplingError,
    DomainError,
    OrderViolationError,
    ContractViolationError,
    NotAPotentialError,
    InternalInconsistencyError,
    RefusalError,
    MissingCostError,
    InputFormatError,
)
from .measure import (
    NEG_INF,
    POS_INF,
    ZERO,
    DiscreteMeasure,
    dirac,
    moments,
    quantile,
    lift,
    combine,
    refine,
)
from .pwl import (
    PwlFunction,
    evaluate,
    linear_combine,
    put_potential,
    call_potential,
    convex_hull,
    contact_bracket,
    min_subgradient,
    measure_of,
)
from .order import OrderKind, OrderResult, compare, maximal_element, disjoint_support_pc
from .shadow import ShadowResult, shadow, excess, shadow_sequence, shadow_is_minimal
from .regime import (
    c_of,
    c_grid,
    ustar,
    martingale_points,
    split_at_ustar,
    decompose,
    Component,
    IrreducibleDecomposition,
)
from .coupling import (
    Coupling,
    CouplingRow,
    VerificationReport,
    increasing_coupling,
    antitone_coupling,
    quantile_coupling,
    verify,
    cost,
)
from .curves import (
    Region,
    SupportTriple,
    TwoPointKernel,
    triple_at,
    triple_grid,
    lifted_kernel,
    sample_y,
    kernel_limit_check,
)
from .oracle import (
    LpProblem,
    LpSolution,
    LpStatus,
    lp_solve,
    min_over_eta,
    min_over_couplings,
    brute_force_pcd,
    spence_mirrlees_cost,
)
from .instances import Instance, generate
from .validation import check_instance

__all__ = [
    # Errors
    'ShadowCouplingError',
    'DomainError',
    'OrderViolationError',
    'ContractViolationError',
    'NotAPotentialError',
    'InternalInconsistencyError',
    'RefusalError',
    'MissingCostError',
    'InputFormatError',
    # Measures
    'NEG_INF',
    'POS_INF',
    'ZERO',
    'DiscreteMeasure',
    'dirac',
    'moments',
    'quantile',
    'lift',
    'combine',
    'refine',
    # Piecewise-linear functions
    'PwlFunction',
    'evaluate',
    'linear_combine',
    'put_potential',
    'call_potential',
    'convex_hull',
    'contact_bracket',
    'min_subgradient',
    'measure_of',
    # Orders
    'OrderKind',
    'OrderResult',
    'compare',
    'maximal_element',
    'disjoint_support_pc',
    # Shadows
    'ShadowResult',
    'shadow',
    'excess',
    'shadow_sequence',
    'shadow_is_minimal',
    # Regimes
    'c_of',
    'c_grid',
    'ustar',
    'martingale_points',
    'split_at_ustar',
    'decompose',
    'Component',
    'IrreducibleDecomposition',
    # Couplings
    'Coupling',
    'CouplingRow',
    'VerificationReport',
    'increasing_coupling',
    'antitone_coupling',
    'quantile_coupling',
    'verify',
    'cost',
    # Curves
    'Region',
    'SupportTriple',
    'TwoPointKernel',
    'triple_at',
    'triple_grid',
    'lifted_kernel',
    'sample_y',
    'kernel_limit_check',
    # Oracle
    'LpProblem',
    'LpSolution',
    'LpStatus',
    'lp_solve',
    'min_over_eta',
    'min_over_couplings',
    'brute_force_pcd',
    'spence_mirrlees_cost',
    # Instances
    'Instance',
    'generate',
    'check_instance',
]
