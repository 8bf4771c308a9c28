"""Closed sets with projection selectors.

Three set shapes are supported: hyperplanes, spheres (the shell, not the
ball), and graphs of scalar functions over an interval.  Each knows how
to project a point onto itself; reflections and distances derive from
the projection.  Projections onto hyperplanes and spheres are closed
form.  Graph projections run a bracketed one-dimensional search, so any
finite curve oracle works, smooth or not.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, EmptyDomain
from .geometry import DEFAULT_TOLERANCES, Tolerances, as_point

_GRID_POINTS = 2048
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class FeasibleSet(ABC):
    """A closed set with a deterministic projection selector."""

    @property
    @abstractmethod
    def dimension(self) -> int:
        """Ambient dimension of the set."""

    @abstractmethod
    def project(self, x, tol: Tolerances | None = None) -> np.ndarray:
        """Nearest point of the set to ``x`` (deterministic on ties)."""

    def reflect(self, x, tol: Tolerances | None = None) -> np.ndarray:
        """Reflection of ``x`` through the set: 2 P(x) - x."""
        x = as_point(x, self.dimension)
        return 2.0 * self.project(x, tol) - x

    def distance(self, x, tol: Tolerances | None = None) -> float:
        x = as_point(x, self.dimension)
        d = x - self.project(x, tol)
        return float(np.sqrt(np.dot(d, d)))


@dataclass(frozen=True, eq=False)
class Hyperplane(FeasibleSet):
    """Hyperplane {p : <normal, p> = offset}.

    The normal is rescaled to unit length on construction (the offset is
    rescaled with it, so the point set is unchanged).
    """

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        n = as_point(self.normal)
        scale = float(np.sqrt(np.dot(n, n)))
        if scale <= 0.0:
            raise DimensionMismatch("hyperplane normal must be nonzero")
        n = n / scale
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset) / scale)

    @property
    def dimension(self) -> int:
        return self.normal.size

    def project(self, x, tol: Tolerances | None = None) -> np.ndarray:
        x = as_point(x, self.dimension)
        return x - (float(self.normal @ x) - self.offset) * self.normal


@dataclass(frozen=True, eq=False)
class Sphere(FeasibleSet):
    """Sphere (shell) of given center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point(self.center).copy()
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if not float(self.radius) > 0.0:
            raise ValueError("sphere radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dimension(self) -> int:
        return self.center.size

    def project(self, x, tol: Tolerances | None = None) -> np.ndarray:
        tol = DEFAULT_TOLERANCES if tol is None else tol
        x = as_point(x, self.dimension)
        v = x - self.center
        n = float(np.sqrt(np.dot(v, v)))
        if n <= tol.point_eq_eps:
            # The center is equidistant from the whole shell; pick the
            # point along the first coordinate axis.
            e1 = np.zeros(self.dimension)
            e1[0] = 1.0
            return self.center + self.radius * e1
        return self.center + (self.radius / n) * v


def _eval_curve(f: Callable, ts: np.ndarray) -> np.ndarray:
    """Evaluate a curve oracle on a grid, vectorized when it allows."""
    try:
        out = np.asarray(f(ts), dtype=float)
        if out.shape == ts.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(t)) for t in ts])


def _golden_min(fun, a: float, b: float, xtol: float):
    """Golden-section minimum of ``fun`` on [a, b]; returns (x, fun(x))."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = fun(c)
    fd = fun(d)
    for _ in range(256):
        if b - a <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    return (c, fc) if fc < fd else (d, fd)


@dataclass(frozen=True, eq=False)
class FunctionGraph(FeasibleSet):
    """Graph {(t, f(t)) : t in domain} of a scalar function.

    Parameters
    ----------
    f : callable
        Finite-valued oracle on the domain.  Vectorized evaluation over
        numpy arrays is used when available, scalar calls otherwise.
    derivative : callable, optional
        Derivative oracle, valid away from the declared ``nonsmooth``
        abscissas.
    domain : (float, float)
        Closed interval, endpoints may be infinite.
    nonsmooth : tuple of float
        Abscissas where the derivative oracle must not be trusted
        (kinks, infinite slopes).
    curve, params
        Optional catalog identity used when serializing problems.
    """

    f: Callable
    derivative: Callable | None = None
    domain: tuple[float, float] = (-math.inf, math.inf)
    nonsmooth: tuple[float, ...] = ()
    curve: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return 2

    def derivative_defined_at(self, t: float, eps: float | None = None) -> bool:
        if self.derivative is None:
            return False
        eps = DEFAULT_TOLERANCES.point_eq_eps if eps is None else eps
        lo, hi = self.domain
        if not (lo <= t <= hi):
            return False
        return all(abs(t - s) > eps for s in self.nonsmooth)

    def project(self, x, tol: Tolerances | None = None) -> np.ndarray:
        """Nearest graph point to ``x``.

        The search window [anchor - r0, anchor + r0] around the
        domain-clamped abscissa is exhaustive: with r0 the vertical gap
        |x1 - f(anchor)|, no graph point outside it can be nearer than
        (anchor, f(anchor)) itself.  A uniform grid locates the basin, a
        golden-section pass narrows it to ``projection_tol``, and one
        Newton step on the stationarity equation polishes the result
        where the derivative oracle applies.  Declared nonsmooth
        abscissas inside the window always compete as candidates, which
        keeps projections landing on kinks exact.  Candidates whose
        squared distances agree to relative rounding noise count as
        tied; the polished point and the kink candidates then beat the
        golden point and the window ends, and remaining ties go to the
        smallest abscissa.
        """
        tol = DEFAULT_TOLERANCES if tol is None else tol
        x = as_point(x, 2)
        lo, hi = self.domain
        if lo > hi:
            raise EmptyDomain(f"graph domain {self.domain} is empty")
        x0 = float(x[0])
        x1 = float(x[1])
        anchor = min(max(x0, lo), hi)
        r0 = abs(x1 - float(self.f(anchor)))
        wlo = max(lo, anchor - r0)
        whi = min(hi, anchor + r0)
        if wlo > whi:
            raise EmptyDomain("projection window misses the graph domain")

        def dist2(t: float) -> float:
            ft = float(self.f(t))
            return (x0 - t) ** 2 + (x1 - ft) ** 2

        if whi - wlo <= tol.projection_tol:
            y = 0.5 * (wlo + whi)
            return np.array([y, float(self.f(y))])

        ts = np.linspace(wlo, whi, _GRID_POINTS)
        fs = _eval_curve(self.f, ts)
        d2 = (x0 - ts) ** 2 + (x1 - fs) ** 2
        i = int(np.argmin(d2))
        a = float(ts[max(i - 1, 0)])
        b = float(ts[min(i + 1, _GRID_POINTS - 1)])
        y_best, d_best = _golden_min(dist2, a, b, tol.projection_tol)

        # Squared-distance values carry a few ulps of relative rounding
        # noise, so near a flat basin bottom the bitwise-smallest value
        # can sit a sqrt(eps)-sized abscissa error away from the true
        # minimizer.  Candidates within that noise of the best value
        # count as tied; the stationarity root and declared kinks then
        # outrank the golden point, which outranks the window ends, and
        # remaining ties go to the smallest abscissa.
        candidates = [(d_best, 1, y_best)]
        y_pol = self._polish(x0, x1, y_best, wlo, whi, tol)
        if y_pol is not None:
            candidates.append((dist2(y_pol), 0, y_pol))
        for s in self.nonsmooth:
            if wlo <= s <= whi:
                candidates.append((dist2(s), 0, s))
        for endpoint in (wlo, whi):
            candidates.append((dist2(endpoint), 2, endpoint))
        d_min = min(d for d, _, _ in candidates)
        band = 16.0 * np.finfo(float).eps * d_min
        _, y = min((pri, y) for d, pri, y in candidates if d <= d_min + band)
        return np.array([y, float(self.f(y))])

    def _polish(self, x0, x1, y, wlo, whi, tol):
        """One Newton step on (t - x0) + (f(t) - x1) f'(t) = 0, or None."""
        eps = tol.point_eq_eps
        h = 1e-6 * (1.0 + abs(y))
        pts = (y - h, y, y + h)
        if any(not self.derivative_defined_at(t, eps) for t in pts):
            return None

        def stat(t: float) -> float:
            return (t - x0) + (float(self.f(t)) - x1) * float(self.derivative(t))

        g0 = stat(y)
        slope = (stat(y + h) - stat(y - h)) / (2.0 * h)
        if not math.isfinite(slope) or abs(slope) <= eps:
            return None
        y_new = y - g0 / slope
        if not (wlo <= y_new <= whi) or not math.isfinite(y_new):
            return None
        return y_new


def graph_normal_coefficient(
    g: FunctionGraph, x, p, tol: Tolerances | None = None
) -> float | None:
    """Scalar c with x = p + (f(y) - x1) * (c, -1)-style normal data.

    For a graph point p = (y, f(y)) and an off-graph point x = (x0, x1),
    returns (x0 - y) / (f(y) - x1), the coefficient that reconstructs
    the outward normal direction at p from the projection geometry.
    Returns None when x lies at the graph's height (denominator below
    ``point_eq_eps``), where the coefficient is undefined.
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    x = as_point(x, 2)
    p = as_point(p, 2)
    denom = float(p[1] - x[1])
    if abs(denom) <= tol.point_eq_eps:
        return None
    return float(x[0] - p[0]) / denom
