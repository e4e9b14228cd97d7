"""Kolmogorov-Smirnov distances between samples, weighted samples, tables and CDFs."""
from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..processes.types import DensityTable


def _as_step(obj):
    """(sorted points, right-continuous CDF values) for a (weighted) sample."""
    if isinstance(obj, tuple):
        x, w = (np.asarray(v, dtype=float).ravel() for v in obj)
        if w.shape != x.shape or np.any(w < 0) or not w.sum() > 0:
            raise DomainError("weights must be nonnegative, nonzero and match the sample")
    else:
        x = np.asarray(obj, dtype=float).ravel()
        w = np.ones_like(x)
    if x.size == 0:
        raise DomainError("empty sample")
    if not np.all(np.isfinite(x)):
        raise DomainError("sample contains non-finite values")
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    cum = np.cumsum(w) / w.sum()
    # keep the last of each run of ties so the CDF is right-continuous
    last = np.r_[x[1:] != x[:-1], True]
    return x[last], cum[last]


def _step_eval(pts, cum, z):
    j = np.searchsorted(pts, z, side="right") - 1
    return np.where(j >= 0, cum[np.maximum(j, 0)], 0.0)


def _cdf_fn(obj):
    if isinstance(obj, DensityTable):
        return obj.cdf_at
    if callable(obj):
        return lambda z: np.asarray(obj(np.asarray(z, dtype=float)), dtype=float)
    return None


def ks_distance(first, second) -> float:
    """sup |F_1 - F_2| over the line.

    Each argument is a sample (array), a weighted sample ``(values,
    weights)``, a :class:`DensityTable` or a vectorised CDF callable.
    """
    f1, f2 = _cdf_fn(first), _cdf_fn(second)
    if f1 is not None and f2 is not None:
        pts = np.unique(np.concatenate([getattr(o, "grid", np.empty(0)) for o in (first, second)]))
        if pts.size == 0:
            raise DomainError("two CDF callables need a table to fix the support")
        return float(np.max(np.abs(f1(pts) - f2(pts))))
    if f1 is not None:
        first, second, f1, f2 = second, first, f2, f1
    p1, c1 = _as_step(first)
    if f2 is not None:
        model = f2(p1)
        before = np.r_[0.0, c1[:-1]]
        return float(max(np.max(c1 - model), np.max(model - before), 0.0))
    p2, c2 = _as_step(second)
    z = np.union1d(p1, p2)
    return float(np.max(np.abs(_step_eval(p1, c1, z) - _step_eval(p2, c2, z))))


def ks_distance_2d(sample, grid_x, grid_y, density) -> float:
    """sup over grid nodes of |F_emp - F| for a bivariate sample.

    ``density[i, j]`` is the joint density at ``(grid_x[i], grid_y[j])``;
    its CDF comes from the 2-D trapezoid rule and is normalised to the
    grid mass. ``sample`` has shape ``(n, 2)``.
    """
    sample = np.asarray(sample, dtype=float)
    gx = np.asarray(grid_x, dtype=float)
    gy = np.asarray(grid_y, dtype=float)
    dens = np.asarray(density, dtype=float)
    if sample.ndim != 2 or sample.shape[1] != 2 or sample.shape[0] == 0:
        raise DomainError("sample must be a nonempty (n, 2) array")
    if dens.shape != (gx.size, gy.size):
        raise DomainError("density must be (len(grid_x), len(grid_y))")
    cell = 0.25 * (dens[1:, 1:] + dens[:-1, 1:] + dens[1:, :-1] + dens[:-1, :-1])
    cell *= np.diff(gx)[:, None] * np.diff(gy)[None, :]
    exact = np.zeros(dens.shape)
    exact[1:, 1:] = np.cumsum(np.cumsum(cell, axis=0), axis=1)
    exact /= exact[-1, -1]
    ex = np.concatenate([[-np.inf], gx[1:], [np.inf]])
    ey = np.concatenate([[-np.inf], gy[1:], [np.inf]])
    counts, _, _ = np.histogram2d(sample[:, 0], sample[:, 1], bins=[ex, ey])
    emp = np.cumsum(np.cumsum(counts, axis=0), axis=1)[:-1, :-1] / sample.shape[0]
    # emp[i, j] counts points below (grid_x[i+1], grid_y[j+1])
    return float(np.max(np.abs(emp - exact[1:, 1:])))
