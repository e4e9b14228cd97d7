"""Containers for time grids, process identities, tables and path ensembles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import BoundaryParams
from ..errors import AccuracyError, DomainError, StatisticalQualityError
from .. import io

MASS_TOL = 1e-3

TAGS = ("Y", "X", "Z_mc", "Z_hd", "eta", "rho_mc", "rho_hd", "hariya_yor")


@dataclass(frozen=True)
class FddSpec:
    """Observation times ``0 < t_1 < ... < t_n``, optionally with time 0."""

    times: tuple
    includes_t0: bool = False

    def __post_init__(self):
        ts = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", ts)
        if not ts:
            raise DomainError("FddSpec needs at least one time")
        if not all(math.isfinite(t) for t in ts) or ts[0] <= 0:
            raise DomainError("times must be finite and positive")
        if any(b <= a for a, b in zip(ts[:-1], ts[1:])):
            raise DomainError("times must be strictly increasing")

    @property
    def all_times(self) -> tuple:
        """Times of the recorded coordinates (with 0 first when included)."""
        return ((0.0,) if self.includes_t0 else ()) + self.times

    @property
    def dim(self) -> int:
        return len(self.all_times)

    def to_dict(self) -> dict:
        return {"times": list(self.times), "includes_t0": self.includes_t0}


def _domain_ok(tag: str, a: float, c: float) -> bool:
    if tag in ("Y", "X", "eta"):
        return a + c > 0
    if tag == "Z_mc":
        return a > 0 and c > 0
    if tag == "Z_hd":
        return a <= 0 and a + c > 0
    if tag == "rho_mc":
        return c > 0
    if tag == "rho_hd":
        return a < 0 and c > -a
    if tag == "hariya_yor":
        return c > 0 and -c < a <= 0
    raise DomainError(f"unknown process tag {tag!r}; expected one of {TAGS}")


@dataclass(frozen=True)
class ProcessKind:
    """A process family and its parameters, validated on construction."""

    tag: str
    params: BoundaryParams

    def __post_init__(self):
        if not _domain_ok(self.tag, self.params.a, self.params.c):
            raise DomainError(f"parameters a={self.params.a}, c={self.params.c} "
                              f"outside the domain of {self.tag}")

    @property
    def horizon(self) -> float:
        """Last admissible time: tau for Y, X and eta, unbounded otherwise."""
        return self.params.tau if self.tag in ("Y", "X", "eta") else math.inf

    def to_dict(self) -> dict:
        return {"tag": self.tag, **self.params.to_dict()}


@dataclass(frozen=True)
class DensityTable:
    """A density on an increasing grid, normalised by its trapezoid mass."""

    grid: np.ndarray
    values: np.ndarray
    total_mass: float
    context: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_values(cls, grid, values, context: dict | None = None,
                    mass_tol: float = MASS_TOL) -> "DensityTable":
        """Normalise ``values``; raise if the raw mass is off by more than ``mass_tol``."""
        grid = np.asarray(grid, dtype=float)
        values = np.maximum(np.asarray(values, dtype=float), 0.0)
        if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be increasing with at least two points")
        if values.shape != grid.shape or not np.all(np.isfinite(values)):
            raise DomainError("values must be finite and match the grid")
        mass = float(np.trapezoid(values, grid))
        if not abs(mass - 1.0) <= mass_tol:
            raise AccuracyError(f"table mass {mass:.6g} is off by more than {mass_tol}")
        return cls(grid, values / mass, mass, dict(context or {}))

    def cdf(self) -> np.ndarray:
        d = np.diff(self.grid) * 0.5 * (self.values[1:] + self.values[:-1])
        out = np.concatenate([[0.0], np.cumsum(d)])
        return out / out[-1]

    def quantile(self, u) -> np.ndarray:
        """Inverse CDF with linear interpolation between grid points."""
        cdf = self.cdf()
        u = np.asarray(u, dtype=float)
        j = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, self.grid.size - 2)
        span = cdf[j + 1] - cdf[j]
        frac = np.where(span > 0, (u - cdf[j]) / np.where(span > 0, span, 1.0), 0.5)
        return self.grid[j] + np.clip(frac, 0.0, 1.0) * (self.grid[j + 1] - self.grid[j])

    def cdf_at(self, x) -> np.ndarray:
        return np.interp(x, self.grid, self.cdf(), left=0.0, right=1.0)

    def mean(self) -> float:
        return float(np.trapezoid(self.grid * self.values, self.grid))

    def to_csv(self, config: dict | None = None) -> str:
        rows = zip(self.grid.tolist(), self.values.tolist())
        return io.csv_text(["x", "density"], rows, comment=config)

    @classmethod
    def from_csv(cls, text: str) -> "DensityTable":
        comment, header, rows = io.read_csv(text, is_text=True)
        if header != ["x", "density"]:
            raise DomainError(f"unexpected header {header}")
        arr = np.array([[float(a), float(b)] for a, b in rows])
        mass = float(np.trapezoid(arr[:, 1], arr[:, 0]))
        return cls(arr[:, 0], arr[:, 1], mass, comment or {})

    def to_dict(self) -> dict:
        return {"context": self.context, "total_mass": self.total_mass,
                "x": self.grid, "density": self.values}


@dataclass(frozen=True)
class PathEnsemble:
    """Sampled values at ``times`` (one row per path), optionally weighted.

    ``stream_ids[i]`` names the PRNG stream path ``i`` was drawn from.
    """

    times: np.ndarray
    values: np.ndarray
    seed: int
    stream_ids: np.ndarray
    n_steps: int = 0
    horizon: float = math.nan
    weights: np.ndarray | None = None
    context: dict = field(default_factory=dict, compare=False)
    # coarse-grid companions of values/weights (half the steps, same paths)
    aux: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.times):
            raise DomainError("values must be (n_paths, n_times)")
        if self.weights is not None:
            w = self.weights
            if w.shape != (self.n_paths,) or not np.all(np.isfinite(w)) or np.any(w < 0):
                raise StatisticalQualityError("weights must be finite and nonnegative")
            if not np.any(w > 0):
                raise StatisticalQualityError("all weights vanish", ess=0.0)

    @property
    def n_paths(self) -> int:
        return int(self.values.shape[0])

    @property
    def ess(self) -> float:
        if self.weights is None:
            return float(self.n_paths)
        w = self.weights
        return float(w.sum() ** 2 / np.sum(w * w))

    def column(self, t: float) -> np.ndarray:
        idx = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        if abs(self.times[idx] - t) > 1e-12 * max(1.0, abs(t)):
            raise DomainError(f"time {t} was not recorded")
        return self.values[:, idx]

    def normalized_weights(self) -> np.ndarray:
        if self.weights is None:
            return np.full(self.n_paths, 1.0 / self.n_paths)
        return self.weights / self.weights.sum()

    def mean(self, t: float, weights=None) -> tuple[float, float]:
        """Weighted mean at time ``t`` and its standard error (ESS-based).

        ``weights`` overrides the stored weights (e.g. the coarse ones).
        """
        x = self.column(t)
        if weights is None:
            w = self.normalized_weights()
            ess = self.ess
        else:
            w = np.asarray(weights, dtype=float)
            ess = float(w.sum() ** 2 / np.sum(w * w))
            w = w / w.sum()
        m = float(np.sum(w * x))
        var = float(np.sum(w * (x - m) ** 2))
        if self.weights is None and weights is None:
            var *= self.n_paths / max(self.n_paths - 1, 1)
        return m, math.sqrt(var / ess)

    def summary(self) -> dict:
        out = {"n_paths": self.n_paths, "n_steps": self.n_steps, "seed": self.seed,
               "ess": self.ess, "times": list(map(float, self.times)), "moments": []}
        for t in self.times:
            m, se = self.mean(float(t))
            x = self.column(float(t))
            w = self.normalized_weights()
            out["moments"].append({"time": float(t), "mean": m, "stderr": se,
                                   "variance": float(np.sum(w * (x - m) ** 2))})
        out["context"] = self.context
        return out

    def to_csv(self, config: dict | None = None) -> str:
        n, k = self.values.shape
        w = self.weights if self.weights is not None else np.ones(n)

        def rows():
            for i in range(n):
                for j in range(k):
                    yield (i, float(self.times[j]), float(self.values[i, j]), float(w[i]))

        return io.csv_text(["path_id", "time", "value", "weight"], rows(), comment=config)
