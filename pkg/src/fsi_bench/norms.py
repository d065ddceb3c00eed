"""Space-time L2 error norms and observed convergence orders."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .meshio import evaluate_field


class NormError(ValueError):
    """Invalid input to a norm computation."""


def resolve_weights(n, weights=None, uniform_weights=False):
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,) or np.any(w < 0):
            raise NormError("weights must be one non-negative value per point")
        return w
    if not uniform_weights:
        raise NormError("quadrature weights are required (or opt in to uniform weights)")
    if n == 0:
        raise NormError("no points")
    return np.full(n, 1.0 / n)


def l2_space(numeric, analytic, weights=None, uniform_weights=False):
    """``sqrt(sum_i w_i |numeric_i - analytic_i|^2)``.

    Values are (N,) or (N, m); ``|.|`` is the Euclidean norm over components.
    Without weights the uniform rule ``w_i = 1/N`` is used only when
    ``uniform_weights`` is set.
    """
    e = np.asarray(numeric, dtype=float) - np.asarray(analytic, dtype=float)
    if e.ndim == 1:
        e = e[:, None]
    w = resolve_weights(len(e), weights, uniform_weights)
    return float(math.sqrt(np.sum(w * np.sum(e * e, axis=1))))


def l2_space_time(spatial_norms, times):
    """``sqrt`` of the trapezoidal time integral of squared spatial norms."""
    a = np.asarray(spatial_norms, dtype=float)
    t = np.asarray(times, dtype=float)
    if a.shape != t.shape or a.ndim != 1:
        raise NormError("one spatial norm per time sample is required")
    if len(t) < 2:
        raise NormError("a time window needs at least 2 samples")
    if np.any(np.diff(t) <= 0):
        raise NormError("times must be strictly increasing")
    if np.any(a < 0):
        raise NormError("spatial norms must be non-negative")
    sq = a * a
    return float(math.sqrt(np.sum(0.5 * (sq[1:] + sq[:-1]) * np.diff(t))))


def observed_order(pairs):
    """Least-squares slope of log(error) against log(step)."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 2:
        raise NormError("at least two (step, error) pairs are required")
    if np.any(arr <= 0):
        raise NormError("steps and errors must be positive")
    if len(np.unique(arr[:, 0])) < 2:
        raise NormError("steps must not all be equal")
    slope, _ = np.polyfit(np.log(arr[:, 0]), np.log(arr[:, 1]), 1)
    return float(slope)


@dataclass
class ErrorReport:
    field: str
    times: list
    spatial: list
    space_time: float
    window: tuple
    dt: Optional[float] = None
    dx: Optional[float] = None
    extras: dict = field(default_factory=dict)

    def to_kv(self):
        key = f"error.{self.field}"
        lines = [f"{key}.space_time = {self.space_time:.10e}",
                 f"{key}.window = {self.window[0]:.10g} {self.window[1]:.10g}",
                 f"{key}.n_times = {len(self.times)}"]
        if self.dt is not None:
            lines.append(f"{key}.dt = {self.dt:.10g}")
        if self.dx is not None:
            lines.append(f"{key}.dx = {self.dx:.10g}")
        for i, (t, e) in enumerate(zip(self.times, self.spatial)):
            lines.append(f"{key}.space.{i} = {t:.10g} {e:.10e}")
        return "\n".join(lines)


def error_report(table, sol, points, field_name, uniform_weights=False,
                 window=None, dt=None, dx=None):
    """Compare numeric samples of one field against the analytic solution.

    The analytic field is evaluated at the exact (point, time) of every
    numeric sample.  Every time in the window must cover the same point ids.
    """
    index = points.index()
    by_time = {}
    for pid, t, name, comps in table.rows:
        if name != field_name:
            continue
        if window is not None and not (window[0] <= t <= window[1]):
            continue
        by_time.setdefault(t, []).append((pid, comps))
    if not by_time:
        raise NormError(f"no samples of field {field_name!r} in the window")
    times = sorted(by_time)
    spatial = []
    for t in times:
        entries = by_time[t]
        try:
            idx = np.array([index[pid] for pid, _ in entries])
        except KeyError as exc:
            raise NormError(f"sample refers to unknown point id {exc.args[0]!r}") from None
        numeric = np.array([comps for _, comps in entries], dtype=float)
        analytic = evaluate_field(sol, field_name, points.coords[idx], t)
        if numeric.shape != analytic.shape:
            raise NormError(f"field {field_name!r} expects {analytic.shape[1]} components")
        w = None if points.weights is None else points.weights[idx]
        spatial.append(l2_space(numeric, analytic, w, uniform_weights))
    total = l2_space_time(spatial, times)
    win = (times[0], times[-1]) if window is None else tuple(window)
    return ErrorReport(field_name, times, spatial, total, win, dt, dx)
