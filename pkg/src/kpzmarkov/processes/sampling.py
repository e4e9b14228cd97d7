"""Seeded samplers for the Doob-transformed Markov processes.

Sampling is sequential inverse-CDF on a fixed spatial grid. The initial
law comes from a fine :class:`DensityTable`; each transition uses the
row-normalised kernel matrix of :meth:`MarkovLaw.transition_rows`. For a
current state between grid points ``x_i < x < x_{i+1}`` the next state is
drawn from the mixture of rows ``i`` and ``i+1`` with the linear
interpolation weights, i.e. from the conditional density interpolated
linearly in the current state.

Random numbers come in blocks of :data:`BLOCK` paths; block ``b`` uses the
PCG64 stream ``SeedSequence(seed, spawn_key=(b, ...))``, so results do not
depend on how many paths are requested in total beyond the block count.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import AccuracyError, DomainError
from .laws import MarkovLaw, _trap_weights, choose_grid
from .types import MASS_TOL, DensityTable, FddSpec, PathEnsemble, ProcessKind

BLOCK = 1024
GRID_POINTS = 2048
TABLE_POINTS = 4096


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be an integer in [0, 2^64)")
    return seed


def block_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def blocks(n: int):
    """(block index, slice) pairs covering ``range(n)``."""
    for b, lo in enumerate(range(0, n, BLOCK)):
        yield b, slice(lo, min(lo + BLOCK, n))


def stream_ids(n: int) -> np.ndarray:
    return np.arange(n) // BLOCK


def _check_n(n) -> int:
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    return n


def initial_table(kind: ProcessKind, n_points: int = TABLE_POINTS, grid=None) -> DensityTable:
    """Initial law of ``kind`` tabulated on a grid chosen to hold its mass."""
    law = MarkovLaw(kind)
    if grid is None:
        grid = choose_grid(law, [], n_points)
    basis = law.basis_for(grid, [])
    dens = law.marginal(grid, 0.0, basis)
    return DensityTable.from_values(grid, dens, {"process": kind.to_dict(), "time": 0.0})


def marginal_table(kind: ProcessKind, t: float, n_points: int = TABLE_POINTS,
                   grid=None) -> DensityTable:
    """Exact one-time marginal of ``kind`` at time ``t``."""
    law = MarkovLaw(kind)
    if grid is None:
        grid = choose_grid(law, [t], n_points)
    basis = law.basis_for(grid, [t])
    dens = law.marginal(grid, t, basis)
    return DensityTable.from_values(grid, dens, {"process": kind.to_dict(), "time": float(t)})


def _row_cdfs(rows: np.ndarray, grid: np.ndarray) -> np.ndarray:
    cells = 0.5 * (rows[:, 1:] + rows[:, :-1]) * np.diff(grid)[None, :]
    out = np.zeros_like(rows)
    np.cumsum(cells, axis=1, out=out[:, 1:])
    out /= out[:, -1:]
    return out


def _step(state, grid, cdfs, u_row, u_val):
    m = grid.size
    h = grid[1] - grid[0]
    pos = np.clip((state - grid[0]) / h, 0.0, m - 1.0)
    i = np.minimum(pos.astype(np.int64), m - 2)
    row = i + (u_row < pos - i)
    flat = (cdfs + np.arange(m)[:, None]).ravel()
    target = row + u_val
    k = np.searchsorted(flat, target, side="right") - 1
    j = np.clip(k - row * m, 0, m - 2)
    lo = cdfs[row, j]
    hi = cdfs[row, j + 1]
    span = hi - lo
    frac = np.where(span > 0, (u_val - lo) / np.where(span > 0, span, 1.0), 0.5)
    return grid[j] + np.clip(frac, 0.0, 1.0) * h


def sample_markov(kind: ProcessKind, spec: FddSpec, n: int, seed: int,
                  grid_points: int = GRID_POINTS, table_points: int = TABLE_POINTS,
                  n_steps: int = 2000) -> PathEnsemble:
    """Draw ``n`` paths of ``kind`` at the times of ``spec``.

    ``X`` and ``hariya_yor`` are path-functional processes and are passed
    to their dedicated samplers with ``n_steps`` time steps.
    """
    seed = check_seed(seed)
    n = _check_n(n)
    if kind.tag == "X":
        from .paths import x_weighted_ensemble
        return x_weighted_ensemble(kind.params, n_steps, n, seed, times=spec.times,
                                   includes_t0=spec.includes_t0)
    if kind.tag == "hariya_yor":
        from .paths import hariya_yor_sample
        return hariya_yor_sample(kind.params, spec, n_steps, n, seed)
    law = MarkovLaw(kind)
    for t in spec.times:
        law.check_time(t)
    grid = choose_grid(law, spec.times, grid_points)
    basis = law.basis_for(grid, spec.times)
    fine = np.linspace(grid[0], grid[-1], table_points)
    init = initial_table(kind, grid=fine)

    n_u = 1 + 2 * len(spec.times)
    u = np.empty((n, n_u))
    for b, sl in blocks(n):
        u[sl] = block_rng(seed, b).random((sl.stop - sl.start, n_u))

    state = init.quantile(u[:, 0])
    record = [state.copy()] if spec.includes_t0 else []
    weights = _trap_weights(grid)
    s = 0.0
    worst = 0.0
    blind_worst = 0.0
    for j, t in enumerate(spec.times):
        rows, deficiency = law.transition_rows(grid, s, t, basis, weights)
        occupied = law.marginal(grid, s, basis)
        occupied = np.where(np.isfinite(occupied), occupied, 0.0)
        # rows whose h-function is not resolved to MASS_TOL cannot be audited;
        # the mass that visits them must itself be negligible
        resolved = law.resolved(grid, s, basis, MASS_TOL) & law.resolved(grid, t, basis, MASS_TOL)
        blind = float(np.sum(weights * occupied * ~resolved)) / float(np.sum(weights * occupied))
        if blind > MASS_TOL:
            raise AccuracyError(f"{blind:.3g} of the mass at time {s} sits where the h-function "
                                f"is below the rounding floor of the spectral sums")
        blind_worst = max(blind_worst, blind)
        live = (occupied >= 1e-6 * occupied.max()) & np.isfinite(deficiency) & resolved
        if np.any(live):
            worst = max(worst, float(np.max(np.abs(deficiency[live]))))
        if worst > MASS_TOL:
            raise AccuracyError(f"transition rows lose {worst:.3g} of their mass on the grid "
                                f"[{grid[0]:.3g}, {grid[-1]:.3g}]")
        state = _step(state, grid, _row_cdfs(rows, grid), u[:, 1 + 2 * j], u[:, 2 + 2 * j])
        record.append(state.copy())
        s = t
    values = np.column_stack(record)
    ctx = {"process": kind.to_dict(), "fdd": spec.to_dict(), "method": "gridded_inverse_cdf",
           "grid": [float(grid[0]), float(grid[-1]), int(grid.size)],
           "table_points": int(table_points), "max_row_deficiency": worst,
           "unaudited_mass": blind_worst,
           "initial_mass": init.total_mass}
    horizon = kind.horizon if math.isfinite(kind.horizon) else spec.times[-1]
    return PathEnsemble(np.array(spec.all_times), values, seed, stream_ids(n),
                        n_steps=len(spec.times), horizon=horizon, context=ctx)
