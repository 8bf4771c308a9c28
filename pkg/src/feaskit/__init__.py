"""Reflection and circumcenter based solvers for two-set feasibility
problems in the plane, with scalar root-finding reductions, a problem
catalog, convergence-rate diagnostics, and a CLI."""

from .analysis import (
    ComparisonRow,
    RateClass,
    RateKind,
    classify_rate,
    compare,
    comparison_to_csv,
    error_ratios,
    trace_errors,
)
from .errors import (
    DerivativeUndefined,
    DerivativeZero,
    DimensionMismatch,
    DistinctColinearInput,
    EmptyDomain,
    FeaskitError,
    NonFinitePoint,
    TooShort,
    UnknownMethod,
    UnknownProblem,
    ZeroSubgradient,
)
from .geometry import (
    DEFAULT_TOLERANCES,
    ColinearityCase,
    Tolerances,
    alignment_ratio,
    as_point,
    circumcenter,
    classify_triple,
)
from .plotting import TraceSeries, render_svg
from .problems import (
    CURVES,
    CaseLabel,
    CaseReport,
    Problem,
    builtin,
    classify_conditions,
    load_problem,
    make_curve,
    nearest_solution,
    problem_from_dict,
    problem_names,
    problem_to_dict,
    save_problem,
)
from .sets import (
    FeasibleSet,
    FunctionGraph,
    Hyperplane,
    Sphere,
    graph_normal_coefficient,
)
from .solvers import (
    METHODS,
    StepResult,
    StopReason,
    StopRule,
    Trace,
    altproj_step,
    crm_raw,
    ct_step,
    dr_step,
    newton_step,
    run,
    subgrad_proj_step,
)

__version__ = "0.1.0"

__all__ = [
    "CURVES",
    "CaseLabel",
    "CaseReport",
    "ColinearityCase",
    "ComparisonRow",
    "DEFAULT_TOLERANCES",
    "DerivativeUndefined",
    "DerivativeZero",
    "DimensionMismatch",
    "DistinctColinearInput",
    "EmptyDomain",
    "FeasibleSet",
    "FeaskitError",
    "FunctionGraph",
    "Hyperplane",
    "METHODS",
    "NonFinitePoint",
    "Problem",
    "RateClass",
    "RateKind",
    "Sphere",
    "StepResult",
    "StopReason",
    "StopRule",
    "TooShort",
    "Tolerances",
    "Trace",
    "TraceSeries",
    "UnknownMethod",
    "UnknownProblem",
    "ZeroSubgradient",
    "alignment_ratio",
    "altproj_step",
    "as_point",
    "builtin",
    "classify_conditions",
    "classify_rate",
    "classify_triple",
    "circumcenter",
    "compare",
    "comparison_to_csv",
    "crm_raw",
    "ct_step",
    "dr_step",
    "error_ratios",
    "graph_normal_coefficient",
    "load_problem",
    "make_curve",
    "nearest_solution",
    "newton_step",
    "problem_from_dict",
    "problem_names",
    "problem_to_dict",
    "render_svg",
    "run",
    "save_problem",
    "subgrad_proj_step",
    "trace_errors",
]
