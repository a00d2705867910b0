"""Matrix functions on the circle, Hankel operators and thematic factorizations."""

from .circle_fn import (CheckResult, CircleFunction, block_diag, evaluate, fourier_coefficients, is_co_outer_polynomial,
                        is_inner, max_deviation, sup_norm, toeplitz_index, winding_number)
from .config import DEFAULT_GRID, DEFAULT_TOL, GridSpec, ToleranceConfig
from .errors import (
    ThematicError, ParseError, NumericError, ShapeMismatch, NonUnitArgument, DenominatorNearZero,
    GridTooCoarse, UnsupportedRepresentation, NotBoundedAwayFromZero, NonIntegerWinding, NotUnimodular,
    NotAnalytic, NotNonincreasing, InvariantViolation, DegenerateInput, NotEquivalent, InconsistentTable,
    AmbiguousSpectrum, ZeroHankelWarning, TruncationWarning,
)
from .hankel import (dim_table, essential_norm_bound, hankel_matrix, hankel_norm, iota, maximizing_dim,
                     toeplitz_matrix)
from .invariance import (extract_residual, l_subspace_member, recover_monotone_indices, residual_equivalence,
                         theta_range_member, verify_dimension_formula)
from .thematic import FactorBundle, LiftedBlock, ThematicBlock, compose, indices, lift, verify_bundle, verify_thematic

__version__ = "0.1.0"
