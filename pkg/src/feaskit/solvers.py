"""Iterative operators for two-set feasibility and scalar root finding.

Vector methods build on reflections through the two sets: averaged
double reflection (``dr``), the circumcenter of a point and its two
successive reflections (``crm_raw``), and the hybrid ``ct_step`` that
takes the circumcenter when the reflection triple spans a triangle and
falls back to the averaged step when it degenerates to a line.  Scalar
reductions (``newton_step``, ``subgrad_proj_step``) act on the abscissa
of a function graph.  ``run`` drives any of them to a stopping rule and
returns the full trace.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DerivativeUndefined,
    DerivativeZero,
    DimensionMismatch,
    DistinctColinearInput,
    FeaskitError,
    NonFinitePoint,
    UnknownMethod,
    ZeroSubgradient,
)
from .geometry import (
    DEFAULT_TOLERANCES,
    ColinearityCase,
    Tolerances,
    as_point,
    circumcenter,
    classify_triple,
)
from .sets import FeasibleSet, FunctionGraph

METHODS = ("altproj", "crm", "dr", "newton", "subgrad")
_SCALAR_METHODS = ("newton", "subgrad")


class StopReason(Enum):
    """Why a run loop ended."""

    RESIDUAL_MET = "residual-met"
    MAX_ITER = "max-iter"
    CYCLE = "cycle"
    ERROR = "error"


@dataclass(frozen=True)
class StopRule:
    """Termination policy for ``run``.

    A cycle is a revisit of one of the last ``cycle_window`` iterates
    within ``point_eq_eps``; the lag of the revisit is the reported
    period, so a stalled sequence registers as a period-1 cycle.
    Setting ``cycle_window`` to 0 disables the detector.
    """

    residual_tol: float = 1e-10
    max_iter: int = 100
    cycle_window: int = 8

    def __post_init__(self):
        if not self.residual_tol > 0.0:
            raise ValueError("residual_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.cycle_window < 0:
            raise ValueError("cycle_window must be nonnegative")


@dataclass(frozen=True)
class StepResult:
    """One hybrid step: the new iterate plus its reflection substeps."""

    next: np.ndarray
    case: ColinearityCase
    rax: np.ndarray
    rbrax: np.ndarray
    used_circumcenter: bool

    def __post_init__(self):
        # A circumcenter of three distinct colinear points does not
        # exist, so that combination can never be reported.
        if self.used_circumcenter and self.case is ColinearityCase.DISTINCT_COLINEAR:
            raise ValueError("circumcenter cannot come from a distinct-colinear triple")


@dataclass
class Trace:
    """Complete history of one run."""

    method: str
    iterates: np.ndarray
    residuals: np.ndarray
    step_results: tuple[StepResult, ...] = ()
    stop: StopReason = StopReason.MAX_ITER
    wall_time: float = 0.0
    message: str = ""
    cycle_period: int | None = None
    dist_to_solution: np.ndarray | None = None

    def __post_init__(self):
        self.iterates = np.atleast_2d(np.asarray(self.iterates, dtype=float))
        self.residuals = np.asarray(self.residuals, dtype=float)
        if self.residuals.shape != (self.iterates.shape[0],):
            raise ValueError("residuals length must match iterates length")
        if self.residuals.size and float(self.residuals.min()) < 0.0:
            raise ValueError("residuals must be nonnegative")

    @property
    def iterations(self) -> int:
        """Number of steps taken (iterates minus the start point)."""
        return self.iterates.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


def _substeps(a: FeasibleSet, b: FeasibleSet, x, tol):
    rax = a.reflect(x, tol)
    rbrax = b.reflect(rax, tol)
    return rax, rbrax


def dr_step(a: FeasibleSet, b: FeasibleSet, x, tol: Tolerances | None = None) -> np.ndarray:
    """Averaged double reflection: (x + R_B R_A x) / 2."""
    x = as_point(x)
    _, rbrax = _substeps(a, b, x, tol)
    return 0.5 * (x + rbrax)


def crm_raw(a: FeasibleSet, b: FeasibleSet, x, tol: Tolerances | None = None) -> np.ndarray:
    """Circumcenter of (x, R_A x, R_B R_A x).

    Degenerate triples follow the circumcenter conventions (a single
    point maps to itself, two distinct points to their midpoint).  A
    triple of three distinct colinear points has no circumcenter and
    raises; ``ct_step`` handles that case by switching operators.
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    x = as_point(x)
    rax, rbrax = _substeps(a, b, x, tol)
    case = classify_triple(x, rax, rbrax, tol)
    if case is ColinearityCase.DISTINCT_COLINEAR:
        raise DistinctColinearInput(
            "reflection triple is distinct and colinear; no circumcenter exists"
        )
    return circumcenter(x, rax, rbrax, tol)


def ct_step(a: FeasibleSet, b: FeasibleSet, x, tol: Tolerances | None = None) -> StepResult:
    """Hybrid step: circumcenter when the triple spans a triangle,
    averaged double reflection on every colinear configuration."""
    tol = DEFAULT_TOLERANCES if tol is None else tol
    x = as_point(x)
    rax, rbrax = _substeps(a, b, x, tol)
    case = classify_triple(x, rax, rbrax, tol)
    if case is ColinearityCase.NON_COLINEAR:
        nxt = circumcenter(x, rax, rbrax, tol)
        used = True
    else:
        nxt = 0.5 * (x + rbrax)
        used = False
    return StepResult(next=nxt, case=case, rax=rax, rbrax=rbrax, used_circumcenter=used)


def altproj_step(a: FeasibleSet, b: FeasibleSet, x, tol: Tolerances | None = None) -> np.ndarray:
    """Alternating projections: P_B P_A x."""
    return b.project(a.project(as_point(x), tol), tol)


def newton_step(g: FunctionGraph, t: float, tol: Tolerances | None = None) -> float:
    """Newton update t - f(t) / f'(t) on the graph's function."""
    tol = DEFAULT_TOLERANCES if tol is None else tol
    t = float(t)
    if not g.derivative_defined_at(t, tol.point_eq_eps):
        raise DerivativeUndefined(f"derivative oracle undefined at t={t!r}")
    d = float(g.derivative(t))
    if abs(d) <= tol.point_eq_eps:
        raise DerivativeZero(f"derivative vanishes at t={t!r}")
    return t - float(g.f(t)) / d


def subgrad_proj_step(g, y, ystar, tol: Tolerances | None = None):
    """Subgradient projection update y - (f(y) / ||ystar||^2) ystar.

    ``g`` is a FunctionGraph or a bare callable giving f; ``y`` and
    ``ystar`` may be scalars or vectors of matching shape.  Scalar input
    returns a float.
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    f = g.f if isinstance(g, FunctionGraph) else g
    scalar = np.ndim(y) == 0
    y_vec = np.atleast_1d(np.asarray(y, dtype=float))
    ystar_vec = np.atleast_1d(np.asarray(ystar, dtype=float))
    if y_vec.shape != ystar_vec.shape:
        raise ZeroSubgradient("ystar shape must match y")
    nsq = float(ystar_vec @ ystar_vec)
    if math.sqrt(nsq) <= tol.point_eq_eps:
        raise ZeroSubgradient("ystar is numerically zero")
    fval = float(f(float(y_vec[0]) if scalar else y_vec))
    out = y_vec - (fval / nsq) * ystar_vec
    return float(out[0]) if scalar else out


def _residual(a: FeasibleSet, b: FeasibleSet, x, tol) -> float:
    return max(a.distance(x, tol), b.distance(x, tol))


def _scalar_graph(method, a, root_graph):
    if root_graph is not None:
        return root_graph
    if isinstance(a, FunctionGraph):
        return a
    raise UnknownMethod(
        f"method {method!r} needs a function graph; supply root_graph "
        "when the first set is not one"
    )


def run(
    method: str,
    a: FeasibleSet,
    b: FeasibleSet,
    x0,
    stop: StopRule | None = None,
    tol: Tolerances | None = None,
    solution=None,
    root_graph: FunctionGraph | None = None,
) -> Trace:
    """Iterate ``method`` from ``x0`` until the stop rule fires.

    Scalar methods step the abscissa of the function graph (``a`` when
    it is a graph, else ``root_graph``) and record iterates embedded as
    (t, 0).  Residuals are always measured against ``a`` and ``b``.
    Step errors are caught and reported through a trace with stop
    reason ERROR rather than raised.

    ``solution`` may be one point or a stack of candidate points; the
    recorded distances are to the candidate nearest the final iterate.
    """
    if method not in METHODS:
        raise UnknownMethod(f"unknown method {method!r}; choose from {METHODS}")
    stop = StopRule() if stop is None else stop
    tol = DEFAULT_TOLERANCES if tol is None else tol
    x = as_point(x0)
    graph = _scalar_graph(method, a, root_graph) if method in _SCALAR_METHODS else None
    if graph is not None and x.size != 2:
        raise UnknownMethod("scalar methods need a 2-dimensional start point")

    t_start = time.perf_counter()
    iterates = [x]
    residuals = [_residual(a, b, x, tol)]
    steps: list[StepResult] = []
    reason = StopReason.MAX_ITER
    message = ""
    cycle_period = None

    if residuals[0] <= stop.residual_tol:
        reason = StopReason.RESIDUAL_MET
    else:
        t_cur = float(x[0])
        for _ in range(stop.max_iter):
            try:
                if method == "dr":
                    rax, rbrax = _substeps(a, b, x, tol)
                    nxt = 0.5 * (x + rbrax)
                    steps.append(
                        StepResult(
                            next=nxt,
                            case=classify_triple(x, rax, rbrax, tol),
                            rax=rax,
                            rbrax=rbrax,
                            used_circumcenter=False,
                        )
                    )
                elif method == "crm":
                    result = ct_step(a, b, x, tol)
                    steps.append(result)
                    nxt = result.next
                elif method == "altproj":
                    nxt = altproj_step(a, b, x, tol)
                elif method == "newton":
                    t_cur = newton_step(graph, t_cur, tol)
                    nxt = np.array([t_cur, 0.0])
                else:
                    if not graph.derivative_defined_at(t_cur, tol.point_eq_eps):
                        raise DerivativeUndefined(
                            f"derivative oracle undefined at t={t_cur!r}"
                        )
                    t_cur = subgrad_proj_step(
                        graph, t_cur, float(graph.derivative(t_cur)), tol
                    )
                    nxt = np.array([t_cur, 0.0])
            except FeaskitError as exc:
                reason = StopReason.ERROR
                message = f"{type(exc).__name__}: {exc}"
                break

            iterates.append(nxt)
            residuals.append(_residual(a, b, nxt, tol))
            if residuals[-1] <= stop.residual_tol:
                reason = StopReason.RESIDUAL_MET
                break
            lag = _cycle_lag(iterates, stop.cycle_window, tol.point_eq_eps)
            if lag is not None:
                reason = StopReason.CYCLE
                cycle_period = lag
                break
            x = nxt

    dist = None
    if solution is not None:
        cand = np.atleast_2d(np.asarray(solution, dtype=float))
        if cand.ndim != 2 or cand.shape[1] != iterates[0].size:
            raise DimensionMismatch(
                f"solution shape {cand.shape} does not match iterate dimension"
                f" {iterates[0].size}"
            )
        if not np.all(np.isfinite(cand)):
            raise NonFinitePoint("solution coordinates must be finite")
        s = cand[int(np.argmin(np.linalg.norm(cand - iterates[-1], axis=1)))]
        dist = np.array([float(np.linalg.norm(p - s)) for p in iterates])

    return Trace(
        method=method,
        iterates=np.vstack(iterates),
        residuals=np.array(residuals),
        step_results=tuple(steps),
        stop=reason,
        wall_time=time.perf_counter() - t_start,
        message=message,
        cycle_period=cycle_period,
        dist_to_solution=dist,
    )


def _cycle_lag(iterates, window: int, eps: float) -> int | None:
    """Lag of a revisit of a recent iterate by the newest one, if any."""
    new = iterates[-1]
    for lag in range(1, window + 1):
        j = len(iterates) - 1 - lag
        if j < 0:
            break
        d = new - iterates[j]
        if float(np.sqrt(np.dot(d, d))) <= eps:
            return lag
    return None
