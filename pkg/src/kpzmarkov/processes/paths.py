"""Path functionals of variance-1/2 Brownian motion and the GIG law.

All samplers discretise ``[0, horizon]`` into ``n_steps`` equal steps and
integrate exponentials with the trapezoid rule. The same paths
subsampled at every second step give the ``coarse`` companions used for
the step-doubling bias checks, so ``n_steps`` must be even.

Paths are drawn in blocks of :data:`~kpzmarkov.processes.sampling.BLOCK`
with one PRNG stream per block; the extra key in ``block_rng(seed, b, k)``
separates estimators that must be independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..config import BoundaryParams
from ..errors import DomainError, StatisticalQualityError
from ..specfun import log_bessel_k_real_vec
from .sampling import block_rng, blocks, check_seed, stream_ids, _check_n
from .types import FddSpec, PathEnsemble

MIN_ESS = 10.0
N_STEPS = 2000


def _check_steps(n_steps) -> int:
    n_steps = int(n_steps)
    if n_steps < 2 or n_steps % 2:
        raise DomainError("n_steps must be an even integer >= 2")
    return n_steps


def _grid_indices(times, horizon: float, n_steps: int) -> np.ndarray:
    """Step indices of ``times``; each must sit on an even step of the grid."""
    pos = np.asarray(times, dtype=float) / horizon * n_steps
    idx = np.rint(pos).astype(np.int64)
    if np.any(np.abs(pos - idx) > 1e-9 * n_steps) or np.any(idx % 2) or np.any(idx < 0) \
            or np.any(idx > n_steps):
        raise DomainError(f"times {list(times)} are not on the even steps of a "
                          f"{n_steps}-step grid over [0, {horizon}]")
    return idx


def brownian_paths(rng: np.random.Generator, m: int, n_steps: int, horizon: float,
                   start=0.0, drift: float = 0.0) -> np.ndarray:
    """``m`` paths of ``start + B_t + drift t`` at the ``n_steps + 1`` grid times.

    ``B`` has variance t/2, so each increment is ``sqrt(dt/2)`` times a
    standard normal.
    """
    dt = horizon / n_steps
    inc = rng.standard_normal((m, n_steps)) * math.sqrt(dt / 2.0) + drift * dt
    out = np.empty((m, n_steps + 1))
    out[:, 0] = 0.0
    np.cumsum(inc, axis=1, out=out[:, 1:])
    out += np.reshape(np.asarray(start, dtype=float), (-1, 1)) if np.ndim(start) else start
    return out


def cumulative_trapezoid(vals: np.ndarray, dt: float, idx: np.ndarray) -> np.ndarray:
    """Trapezoid integrals from 0 to each grid index in ``idx`` (per row)."""
    csum = np.cumsum(vals, axis=1)
    out = dt * (csum[:, idx] - 0.5 * (vals[:, :1] + vals[:, idx]))
    out[:, idx == 0] = 0.0
    return out


def exp_functional(paths: np.ndarray, dt: float, idx: np.ndarray):
    """Fine and coarse trapezoid values of int_0^t e^{-2 path} at grid indices ``idx``."""
    e = np.exp(-2.0 * paths)
    fine = cumulative_trapezoid(e, dt, idx)
    coarse = cumulative_trapezoid(e[:, ::2], 2.0 * dt, idx // 2)
    return fine, coarse


# ---------------------------------------------------------------------------
# The weighted Brownian ensemble


def _x_log_weight(params: BoundaryParams, end, integral):
    return -params.a * end - 0.5 * (params.a + params.c) * np.log(integral)


def _x_block(params, rng, m, n_steps, rec):
    paths = brownian_paths(rng, m, n_steps, params.tau)
    last = np.array([n_steps])
    fine, coarse = exp_functional(paths, params.tau / n_steps, last)
    end = paths[:, -1]
    return (paths[:, rec], _x_log_weight(params, end, fine[:, 0]),
            _x_log_weight(params, end, coarse[:, 0]))


def _x_run(params, n_steps, n, seed, rec):
    vals = np.empty((n, rec.size))
    lw = np.empty(n)
    lw_c = np.empty(n)
    for b, sl in blocks(n):
        vals[sl], lw[sl], lw_c[sl] = _x_block(params, block_rng(seed, b), sl.stop - sl.start,
                                              n_steps, rec)
    return vals, lw, lw_c


def _normalised(lw: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(lw)):
        raise StatisticalQualityError("non-finite log weights")
    return np.exp(lw - lw.max())


def _ess(w: np.ndarray) -> float:
    return float(w.sum() ** 2 / np.sum(w * w))


def x_weighted_ensemble(params: BoundaryParams, n_steps: int = N_STEPS, n: int = 100_000,
                        seed: int = 0, times=None, includes_t0: bool = False) -> PathEnsemble:
    """Brownian paths with the self-normalised change-of-measure weights of X.

    The weight of path ``beta`` is proportional to
    ``exp(-a beta_tau) (int_0^tau e^{-2 beta_t} dt)^{-(a+c)/2}``, stored
    scaled so the largest weight is 1. ``times`` defaults to ``(tau,)``.
    ``aux['coarse_weights']`` holds the same weights with half the steps.
    """
    seed = check_seed(seed)
    n = _check_n(n)
    n_steps = _check_steps(n_steps)
    spec = FddSpec(tuple(times) if times is not None else (params.tau,), includes_t0)
    if spec.times[-1] > params.tau * (1 + 1e-12):
        raise DomainError("times must lie in (0, tau]")
    rec = _grid_indices(spec.all_times, params.tau, n_steps)
    vals, lw, lw_c = _x_run(params, n_steps, n, seed, rec)
    w = _normalised(lw)
    w_c = _normalised(lw_c)
    ess = _ess(w)
    if ess < MIN_ESS:
        raise StatisticalQualityError(f"effective sample size {ess:.3g} is below {MIN_ESS}",
                                      ess=ess)
    ctx = {"process": {"tag": "X", **params.to_dict()}, "fdd": spec.to_dict(),
           "method": "weighted_brownian", "ess": ess, "coarse_ess": _ess(w_c)}
    return PathEnsemble(np.array(spec.all_times), vals, seed, stream_ids(n), n_steps=n_steps,
                        horizon=params.tau, weights=w, context=ctx,
                        aux={"coarse_weights": w_c})


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean with its standard error and the half-step value."""

    value: float
    stderr: float
    coarse_value: float
    n: int
    n_steps: int

    @property
    def bias_ok(self) -> bool:
        """Step doubling moves the estimate by less than one standard error."""
        return abs(self.value - self.coarse_value) < self.stderr

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "coarse_value": self.coarse_value,
                "n": self.n, "n_steps": self.n_steps, "bias_ok": self.bias_ok}


def k_functional_mc(params: BoundaryParams, n: int = 100_000, seed: int = 0,
                    n_steps: int = N_STEPS) -> MCEstimate:
    """Plain MC of E[e^{-a beta_tau} (int_0^tau e^{-2 beta_t} dt)^{-(a+c)/2}]."""
    seed = check_seed(seed)
    n = _check_n(n)
    n_steps = _check_steps(n_steps)
    _, lw, lw_c = _x_run(params, n_steps, n, seed, np.array([n_steps]))
    v = np.exp(lw)
    v_c = np.exp(lw_c)
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(v_c))):
        raise StatisticalQualityError("exponential functional overflowed")
    return MCEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(n)), float(v_c.mean()),
                      n, n_steps)


# ---------------------------------------------------------------------------
# GIG


def _gig_check(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if np.any(~(alpha > 0)) or not np.all(np.isfinite(alpha)):
        raise DomainError("GIG needs finite alpha > 0")
    return alpha


def gig_log_density(x, nu: float, alpha: float) -> np.ndarray:
    """log of alpha^{-nu} x^{nu-1} e^{-(x + alpha^2/x)/2} / (2 K_nu(alpha)); -inf off x > 0."""
    alpha = float(_gig_check(alpha))
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, -np.inf)
    pos = x > 0
    log_k = float(log_bessel_k_real_vec(nu, np.array([-math.log(alpha)]))[0])
    xp = x[pos]
    out[pos] = (-nu * math.log(alpha) + (nu - 1.0) * np.log(xp) - 0.5 * (xp + alpha ** 2 / xp)
                - math.log(2.0) - log_k)
    return out


def gig_density(x, nu: float, alpha: float) -> np.ndarray:
    return np.exp(gig_log_density(x, nu, alpha))


def gig_moment_quadrature(nu: float, alpha: float, power: int = 0, n: int = 20001) -> float:
    """int x^power GIG(nu, alpha)(dx) on a log-spaced grid."""
    alpha = float(_gig_check(alpha))
    mode = ((nu - 1.0) + math.sqrt((nu - 1.0) ** 2 + alpha ** 2))
    lo = math.log(max(mode, 1e-3)) - 40.0
    hi = math.log(max(mode, 1.0) + 200.0 + 40.0 * abs(nu) + 10.0 * power) + 1.0
    v = np.linspace(lo, hi, n)
    x = np.exp(v)
    f = np.exp(gig_log_density(x, nu, alpha) + (power + 1.0) * v)
    return float(np.trapezoid(f, v))


def gig_draw(rng: np.random.Generator, nu: float, alpha, size=None) -> np.ndarray:
    """GIG(nu, alpha) draws; ``alpha`` may be an array (one draw per entry)."""
    alpha = _gig_check(alpha)
    return alpha * stats.geninvgauss.rvs(nu, alpha, size=size, random_state=rng)


def gig_sample(nu: float, alpha: float, n: int, seed: int) -> PathEnsemble:
    """``n`` independent GIG(nu, alpha) draws as a one-column ensemble."""
    seed = check_seed(seed)
    n = _check_n(n)
    alpha = float(_gig_check(alpha))
    vals = np.empty((n, 1))
    for b, sl in blocks(n):
        vals[sl, 0] = gig_draw(block_rng(seed, b), nu, alpha, size=sl.stop - sl.start)
    ctx = {"law": "GIG", "nu": float(nu), "alpha": alpha}
    return PathEnsemble(np.array([0.0]), vals, seed, stream_ids(n), context=ctx)


# ---------------------------------------------------------------------------
# Path formula of the increments of Z_hd


def hariya_yor_sample(params: BoundaryParams, spec: FddSpec, n_steps: int = N_STEPS,
                      n: int = 100_000, seed: int = 0) -> PathEnsemble:
    """Paths of ``B_t + a t/2 + log(1 + g int_0^t e^{-2 B_s - a s} ds)``, g ~ Gamma((c-a)/2).

    One Gamma draw per path; the horizon is the last requested time.
    ``aux['coarse_values']`` repeats the values with the half-step integral.
    """
    a, c = params.a, params.c
    if not (c > 0 and -c < a <= 0):
        raise DomainError("the path formula needs c > 0 and -c < a <= 0")
    seed = check_seed(seed)
    n = _check_n(n)
    n_steps = _check_steps(n_steps)
    horizon = spec.times[-1]
    rec = _grid_indices(spec.all_times, horizon, n_steps)
    vals = np.empty((n, rec.size))
    coarse = np.empty((n, rec.size))
    shape = (c - a) / 2.0
    for b, sl in blocks(n):
        rng = block_rng(seed, b)
        m = sl.stop - sl.start
        g = rng.gamma(shape, size=m)
        paths = brownian_paths(rng, m, n_steps, horizon, drift=a / 2.0)
        fine_i, coarse_i = exp_functional(paths, horizon / n_steps, rec)
        vals[sl] = paths[:, rec] + np.log1p(g[:, None] * fine_i)
        coarse[sl] = paths[:, rec] + np.log1p(g[:, None] * coarse_i)
    ctx = {"process": {"tag": "hariya_yor", **params.to_dict()}, "fdd": spec.to_dict(),
           "method": "path_formula", "gamma_shape": shape}
    return PathEnsemble(np.array(spec.all_times), vals, seed, stream_ids(n), n_steps=n_steps,
                        horizon=horizon, context=ctx, aux={"coarse_values": coarse})
