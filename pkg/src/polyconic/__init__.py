"""Polyellipses, Fermat-Weber points, Hausdorff distances and generalized conics.

A polyellipse is a level curve of a weighted sum of point distances; a
generalized conic is a level curve of the average distance to a focal curve.
The package evaluates and differentiates these functions, minimizes them with
optimality certificates, traces their level curves, measures Hausdorff
distances between the resulting sets, symmetrizes focal configurations under
dihedral groups, and verifies the quantitative curvature bounds that make
regular polygons non-approximable by polyellipses.
"""

from ._kernels import backend_name
from .errors import (
    CollinearPointsError,
    LevelAtMinimumError,
    LevelBelowMinimumError,
    NotAFocusError,
    NotSymmetricError,
    PolyconicError,
    QuadratureFailureError,
    RingViolationError,
    SceneError,
    SingularPointError,
    ZeroGradientError,
)
from .focal import (
    Polyellipse,
    SymMatrix2,
    WeightedFocalSet,
    curvature,
    dirderiv_plus,
    eval_F,
    gradient,
    hessian,
)
from .weber import (
    MinimizeResult,
    OptimalityCertificate,
    check_focal_optimality,
    check_smooth_optimality,
    weiszfeld_minimize,
)
from .trace import ClosedPolyline, TraceConfig, arc_point_on_axis, radial_trace, trace_level_set
from .hausdorff import (
    Polyline,
    RegularPolygonRep,
    directed_hausdorff,
    hausdorff_distance,
    hausdorff_witness,
)
from .symmetry import (
    CurvatureBoundReport,
    DihedralAction,
    ExcisionResult,
    circumradius,
    circumscribe_rescale,
    curvature_bound_report,
    dihedral_orbit,
    excise_focus,
    kappa_floor,
    symmetrize_polyellipse,
    symmetrized_level,
)
from .conic import (
    ConvergenceRow,
    CurvePartition,
    GeneralizedConic,
    ParamCurve,
    RiemannEnvelope,
    SandwichReport,
    approx_polyellipse,
    arclength,
    avg_distance,
    circle_curve,
    conic_convergence,
    equidistant_partition,
    polyline_curve,
    riemann_envelope,
    sandwich_check,
    segment_curve,
    sine_wave_curve,
    trace_conic,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "PolyconicError",
    "SingularPointError",
    "ZeroGradientError",
    "LevelBelowMinimumError",
    "LevelAtMinimumError",
    "CollinearPointsError",
    "NotAFocusError",
    "NotSymmetricError",
    "RingViolationError",
    "QuadratureFailureError",
    "SceneError",
    "WeightedFocalSet",
    "Polyellipse",
    "SymMatrix2",
    "eval_F",
    "gradient",
    "dirderiv_plus",
    "hessian",
    "curvature",
    "OptimalityCertificate",
    "MinimizeResult",
    "weiszfeld_minimize",
    "check_smooth_optimality",
    "check_focal_optimality",
    "ClosedPolyline",
    "TraceConfig",
    "trace_level_set",
    "arc_point_on_axis",
    "radial_trace",
    "Polyline",
    "RegularPolygonRep",
    "directed_hausdorff",
    "hausdorff_distance",
    "hausdorff_witness",
    "DihedralAction",
    "CurvatureBoundReport",
    "ExcisionResult",
    "dihedral_orbit",
    "symmetrized_level",
    "symmetrize_polyellipse",
    "circumscribe_rescale",
    "excise_focus",
    "circumradius",
    "curvature_bound_report",
    "kappa_floor",
    "ParamCurve",
    "GeneralizedConic",
    "CurvePartition",
    "RiemannEnvelope",
    "SandwichReport",
    "ConvergenceRow",
    "circle_curve",
    "segment_curve",
    "sine_wave_curve",
    "polyline_curve",
    "arclength",
    "avg_distance",
    "equidistant_partition",
    "approx_polyellipse",
    "riemann_envelope",
    "trace_conic",
    "sandwich_check",
    "conic_convergence",
]
