"""Exact and asymptotic enumeration of preimage-constrained random mappings."""

from .constraint import (
    ALL_NONNEGATIVE,
    Admissibility,
    AdmissibilityClass,
    EmptyConstraintError,
    PreimageConstraint,
)
from .families import (
    CONNECTED,
    FUNCTION,
    PARTIAL_FUNCTION,
    TREE,
    XI_COMPONENT,
    XI_CYCLIC,
    FamilyKind,
    bounded_tree,
    xi_image,
    xi_partial_image,
)
from .series import (
    CompositionRequiresZeroConstant,
    FloatSeries,
    NonInvertibleEpsilon,
    NonInvertibleSeries,
    SeriesError,
    TruncatedSeries,
    exp_compose,
    lagrange_invert,
    lagrange_invert_float,
)
from .enumeration import (
    CountReport,
    NoFunctionsOfThisSize,
    count,
    expected_statistic,
    expected_statistic_float,
    family_series,
    function_coefficient,
    partial_function_coefficient,
    tree_coefficient,
)
from .asymptotics import (
    ConstraintNotAdmissible,
    LogValue,
    PeriodicConstraintWarning,
    SingularData,
    TauSequence,
    average_cyclic_asymptote,
    coalescence_metric,
    coefficient_asymptote,
    kth_image_asymptote,
    solve_singular,
    tau_sequence,
)
from .oracle import CapExceeded, OracleSummary, enumerate_mappings, enumerate_trees

__version__ = "0.1.0"
