"""Matrix permanents, exactly and by sampling.

Exact routes: :func:`perm_naive`, :func:`perm_glynn`,
:func:`perm_macmahon`, :func:`perm_delta_oracle`. Stochastic route:
:func:`sample_estimate`. Spin-system identities live in :mod:`permprob.spin`.
"""

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    DomainError,
    InputError,
    NonFiniteEntry,
    NonInvertible,
    NotPositiveDefinite,
    NotSymmetric,
    OverflowToInfinity,
    ParseError,
    PermanentError,
    ShapeError,
)
from .estimators import (
    Distribution,
    EstimateReport,
    estimator_kernel,
    moment_check,
    sample_estimate,
    variance_profile,
)
from .exact import (
    delta_via_enumeration,
    perm_delta_oracle,
    perm_glynn,
    perm_naive,
    permutation_tensor,
    rademacher_full_enumeration,
)
from .matrix import GeneratorKind, MatrixSpec, SquareMatrix, generate, parse_matrix, serialize_matrix
from .multilinear import SubsetPolynomial, det_minor_expansion, perm_macmahon, series_inverse, subset_multiply
from .spin import (
    MvnSampler,
    SpinSystem,
    build_mvn_sampler,
    cosh_moment_mc,
    partition_function,
    perm_spin_fd,
)

__version__ = "0.1.0"
