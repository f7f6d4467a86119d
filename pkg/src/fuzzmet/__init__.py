"""Metrics and convergence diagnostics for upper semicontinuous fuzzy sets.

Fuzzy sets on R^m are represented exactly as finitely many nested alpha-cuts,
each a finite point cloud.
"""

from .compactness import (
    EpsilonNet,
    FuzzyFamily,
    StabilizationError,
    diagonal_limit_candidate,
    family_profile,
    greedy_epsilon_net,
    monotone_limit_residuals,
    pairwise_endograph,
    truncate_below,
)
from .convergence import (
    DEFAULT_RADII,
    DEFAULT_SPACING,
    ConnectedVerdict,
    ImplicationReport,
    ImplicationViolation,
    PreconditionError,
    ResidualTable,
    SequencePrefix,
    Verdict,
    admissible_grid,
    boundedness_profile,
    decay_verdict,
    endograph_gamma_residuals,
    gamma_equals_hend_on_connected,
    gamma_residual_table,
    hend_residuals,
    implication_report,
)
from .families import FamilySpec, generate, generate_prefix, limit_of
from .fuzzy import (
    ClassReport,
    LevelFuzzySet,
    RepresentationError,
    classify,
    crisp,
    cut,
    empty_fuzzy,
    from_level_family,
    from_membership,
    platform_points,
    strong_cut,
    support_function_trace,
)
from .geometry import (
    DimensionMismatch,
    GeometryConfig,
    PointCloud,
    bounding_radius,
    directed_hausdorff,
    hausdorff,
    is_connected,
    is_convex_sample,
    is_star_shaped,
    kernel,
)
from .io import SchemaError, dumps_fuzzy, fuzzy_from_dict, fuzzy_to_dict, load_fuzzy, loads_fuzzy
from .metrics import (
    ball_fuzzy,
    directed_endograph,
    dp_integral,
    dp_metric,
    endograph_metric,
    point_to_endograph,
    r_excess,
    sendograph_metric,
)

__version__ = "0.1.0"
