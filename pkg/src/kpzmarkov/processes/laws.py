r"""Finite-dimensional laws of the Doob-transformed processes.

Every unweighted process here has the same shape. With a base kernel
``k_t`` (the killed kernel ``p_t`` on the line or the absorbed kernel
``g_t`` on the half line), a rate ``lam`` and a space-time harmonic
function ``phi_t`` for ``k``, the joint density of
``(V_0, V_{t_1}, ..., V_{t_n})`` is

.. math::  N e^{-\lambda x_0} \prod_j k_{t_j - t_{j-1}}(x_{j-1}, x_j)\, \phi_{t_n}(x_n).

====== ============ ================================= ==================
tag    kernel       phi_t(x)                           N
====== ============ ================================= ==================
Y      p            H_t(x)                             1 / C(a, c, tau)
Z_mc   p            K_0(e^{-x})                        4 / (2^c Gamma(c/2)^2)
Z_hd   p            e^{-a^2 t/4} K_a(e^{-x})           4 / (2^c Gamma((c-a)/2) Gamma((c+a)/2))
eta    g            h_t(x) (horizon tau)               1 / (sqrt(tau) frakC(a sqrt(tau), c sqrt(tau)))
rho_mc g            x                                  c^2
rho_hd g            e^{-a^2 t/4} sinh(a x) / a         c^2 - a^2
====== ============ ================================= ==================

``lam`` is ``c`` in every row.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..config import BoundaryParams
from ..errors import AccuracyError, DomainError
from .. import kernels
from ..kernels import SpectralBasis, g_closed, h_eta_values
from ..specfun import log_bessel_k_real_vec
from .types import FddSpec, ProcessKind

LOG_TINY = math.log(1e-12)
# spectral values within this factor of their rounding floor count as zero
NOISE_MULT = 10.0
# mass that rounding may hide in a marginal before a grid is refused
HIDDEN_MASS_TOL = 1e-5


def _log_sinh_over(a: float, x):
    """log(sinh(a x) / a) for x > 0, any a != 0."""
    z = abs(a) * x
    return z + np.log(-np.expm1(-2.0 * z)) - math.log(2.0 * abs(a))


class MarkovLaw:
    """Law of one process family, evaluated on grids.

    Grid-valued methods take an optional ``basis`` (a :class:`SpectralBasis`
    over the same grid) so the Bessel table is built once per grid.
    """

    def __init__(self, kind: ProcessKind):
        if kind.tag not in ("Y", "Z_mc", "Z_hd", "eta", "rho_mc", "rho_hd"):
            raise DomainError(f"{kind.tag} has no Doob-transform law here")
        self.kind = kind
        p = kind.params
        self.a, self.c, self.tau = p.a, p.c, p.tau
        self.lam = self.c
        self.halfline = kind.tag in ("eta", "rho_mc", "rho_hd")
        self.horizon = kind.horizon
        self.log_norm = self._log_norm()

    # ------------------------------------------------------------------
    def _log_norm(self) -> float:
        a, c, tau = self.a, self.c, self.tau
        tag = self.kind.tag
        if tag == "Y":
            return -math.log(kernels.const_C_value(a, c, tau))
        if tag == "Z_mc":
            return math.log(4.0) - c * math.log(2.0) - 2.0 * special.gammaln(c / 2.0)
        if tag == "Z_hd":
            return (math.log(4.0) - c * math.log(2.0) - special.gammaln((c - a) / 2.0)
                    - special.gammaln((c + a) / 2.0))
        if tag == "eta":
            r = math.sqrt(tau)
            return -math.log(r * kernels._frakC_closed(a * r, c * r))
        if tag == "rho_mc":
            return 2.0 * math.log(c)
        return math.log(c * c - a * a)

    def check_time(self, t: float) -> None:
        if not (0 <= t <= self.horizon):
            raise DomainError(f"time {t} outside [0, {self.horizon}] for {self.kind.tag}")

    def basis_for(self, xs, times) -> SpectralBasis | None:
        """Bessel table good for every kernel and h-transform the times need."""
        if self.halfline:
            return None
        ts = [0.0] + sorted(float(t) for t in times)
        spans = [b - a for a, b in zip(ts[:-1], ts[1:]) if b > a]
        spans += [t for t in ts if t > 0]
        if self.kind.tag == "Y":
            spans += [self.tau - t for t in ts if self.tau - t > 0]
        return SpectralBasis.build(xs, min(spans)) if spans else None

    # ------------------------------------------------------------------
    def log_phi(self, xs, t: float, basis: SpectralBasis | None = None) -> np.ndarray:
        """log phi_t on the grid (-inf where phi vanishes)."""
        xs = np.asarray(xs, dtype=float)
        tag, a = self.kind.tag, self.a
        with np.errstate(divide="ignore", invalid="ignore"):
            if tag == "Y":
                if t >= self.tau:
                    return -a * xs
                vals, noise = kernels.doob_H_values(xs, t, self.kind.params, basis,
                                                    with_noise=True)
                return np.log(np.where(vals > NOISE_MULT * noise, vals, 0.0))
            if tag == "Z_mc":
                return log_bessel_k_real_vec(0.0, xs)
            if tag == "Z_hd":
                return -a * a * t / 4.0 + log_bessel_k_real_vec(a, xs)
            pos = xs > 0
            out = np.full(xs.shape, -np.inf)
            if tag == "eta":
                out[pos] = np.log(np.maximum(h_eta_values(xs[pos], t, a, self.tau), 0.0))
            elif tag == "rho_mc":
                out[pos] = np.log(xs[pos])
            else:
                out[pos] = -a * a * t / 4.0 + _log_sinh_over(a, xs[pos])
            return out

    def left_integral(self, ys, t: float, basis: SpectralBasis | None = None) -> np.ndarray:
        """int e^{-lam x} k_t(x, y) dx over the state space, for t > 0."""
        ys = np.asarray(ys, dtype=float)
        if self.halfline:
            return np.where(ys > 0, h_eta_values(ys, 0.0, self.lam, t), 0.0)
        vals, noise = kernels.doob_H_values(ys, 0.0, BoundaryParams(self.lam, 0.0, t), basis,
                                            with_noise=True)
        return np.where(vals > NOISE_MULT * noise, vals, 0.0)

    def resolved(self, xs, t: float, basis=None, rel: float = 1e-3) -> np.ndarray:
        """Grid points where phi_t is known to relative accuracy ``rel``."""
        xs = np.asarray(xs, dtype=float)
        if self.kind.tag != "Y" or t >= self.tau:
            return np.ones(xs.shape, dtype=bool)
        vals, noise = kernels.doob_H_values(xs, t, self.kind.params, basis, with_noise=True)
        return vals * rel > NOISE_MULT * noise

    def noise_bound(self, xs, t: float, basis=None) -> np.ndarray:
        """Largest density at time t that rounding in the spectral sums could hide.

        Zero for the closed-form families. Where this is comparable to the
        significant part of a marginal the grid tables cannot be trusted.
        """
        xs = np.asarray(xs, dtype=float)
        if self.kind.tag != "Y":
            return np.zeros(xs.shape)
        params = self.kind.params
        if t < self.tau:
            phi, nphi = kernels.doob_H_values(xs, t, params, basis, with_noise=True)
        else:
            phi, nphi = np.exp(-self.a * xs), np.zeros(xs.shape)
        phi = np.maximum(phi, 0.0)
        if t == 0:
            left, nleft = np.exp(-self.lam * xs), np.zeros(xs.shape)
        else:
            left, nleft = kernels.doob_H_values(xs, 0.0, BoundaryParams(self.lam, 0.0, t),
                                                basis, with_noise=True)
            left = np.maximum(left, 0.0)
        # killing only lowers the free values, which caps what can be hidden
        with np.errstate(over="ignore"):
            nphi = np.minimum(NOISE_MULT * nphi,
                              np.exp(-self.a * xs + self.a ** 2 * max(self.tau - t, 0.0) / 4.0))
            nleft = np.minimum(NOISE_MULT * nleft, np.exp(-self.lam * xs + self.lam ** 2 * t / 4.0))
        bound = (left + nleft) * (phi + nphi) - left * phi
        with np.errstate(over="ignore", invalid="ignore"):
            return np.nan_to_num(math.exp(self.log_norm) * bound, posinf=np.inf)

    def kernel_matrix(self, xs, ys, dt: float, basis: SpectralBasis | None = None,
                      rows=None, cols=None) -> np.ndarray:
        if self.halfline:
            x = np.asarray(xs, dtype=float)[:, None]
            y = np.asarray(ys, dtype=float)[None, :]
            return np.where((x > 0) & (y > 0), g_closed(np.maximum(x, 1e-300), y, dt), 0.0)
        if basis is None:
            return kernels.p_matrix(xs, ys, dt)
        return basis.p_matrix(dt, rows, cols)

    # ------------------------------------------------------------------
    def log_initial(self, xs, basis=None) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return self.log_norm - self.lam * xs + self.log_phi(xs, 0.0, basis)

    def marginal(self, xs, t: float, basis=None) -> np.ndarray:
        """Density of V_t on the grid."""
        self.check_time(t)
        xs = np.asarray(xs, dtype=float)
        if t == 0:
            return np.exp(self.log_initial(xs, basis))
        left = np.maximum(self.left_integral(xs, t, basis), 0.0)
        with np.errstate(divide="ignore"):
            return np.exp(self.log_norm + np.log(left) + self.log_phi(xs, t, basis))

    def joint2(self, xs0, xs1, t: float) -> np.ndarray:
        """Density of (V_0, V_t) on the outer grid ``xs0 x xs1`` (matrix)."""
        self.check_time(t)
        xs0 = np.asarray(xs0, dtype=float)
        xs1 = np.asarray(xs1, dtype=float)
        k = self.kernel_matrix(xs0, xs1, t)
        lphi = self.log_phi(xs1, t)
        left = self.log_norm - self.lam * xs0
        with np.errstate(invalid="ignore"):
            return np.nan_to_num(k * np.exp(left[:, None] + lphi[None, :]))

    def transition_rows(self, xs, s: float, t: float, basis=None, weights=None):
        """Row-normalised transition matrix on the grid and the row deficiencies.

        Row i is ``k_{t-s}(x_i, y) phi_t(y)`` scaled to unit trapezoid mass;
        ``deficiency[i] = 1 - raw_mass_i / phi_s(x_i)`` measures what the
        grid truncation lost (nan where ``phi_s(x_i)`` vanishes).
        """
        xs = np.asarray(xs, dtype=float)
        if weights is None:
            weights = _trap_weights(xs)
        k = self.kernel_matrix(xs, xs, t - s, basis)
        lphi_t = self.log_phi(xs, t, basis)
        top = float(np.max(lphi_t[np.isfinite(lphi_t)]))
        rows = k * np.exp(lphi_t - top)[None, :]
        raw = rows @ weights
        lphi_s = self.log_phi(xs, s, basis)
        with np.errstate(divide="ignore", invalid="ignore"):
            deficiency = 1.0 - np.exp(np.log(raw) + top - lphi_s)
            rows = rows / raw[:, None]
        bad = ~np.all(np.isfinite(rows), axis=1) | (raw <= 0)
        if np.all(bad):
            raise DomainError("no usable transition rows on this grid")
        if np.any(bad):
            good = np.flatnonzero(~bad)
            nearest = good[np.clip(np.searchsorted(good, np.flatnonzero(bad)), 0, good.size - 1)]
            rows[bad] = rows[nearest]
            deficiency[bad] = np.nan
        return rows, deficiency


def _trap_weights(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    w = np.zeros(xs.size)
    d = np.diff(xs)
    w[:-1] += 0.5 * d
    w[1:] += 0.5 * d
    return w


# ---------------------------------------------------------------------------
# Grid selection


def _start_range(law: MarkovLaw, t_max: float) -> tuple[float, float]:
    a, c, tau = law.a, law.c, law.tau
    spread = 6.0 * math.sqrt(max(t_max, tau if law.kind.tag == "Y" else t_max, 1.0) / 2.0)
    if law.halfline:
        top = 8.0 / max(min(abs(c), abs(c + a), 4.0), 0.25) + spread
        return 0.0, top
    if law.kind.tag == "Y":
        centre = [0.0, -tau * c / 2.0, -tau * a / 2.0]
        return min(centre) - 6.0 - spread, max(centre) + 8.0 + spread
    return -6.0, 10.0 + spread + abs(a) * t_max / 2.0


def choose_grid(law: MarkovLaw, times, n: int, rel_cut: float = 1e-12,
                coarse: int = 321, max_rounds: int = 8) -> np.ndarray:
    """Grid covering every requested marginal down to ``rel_cut`` of its peak.

    Starts from a heuristic window, widens it while the significant region
    touches an edge, then trims to that region plus a small margin.
    """
    ts = sorted({0.0, *map(float, times)})
    lo, hi = _start_range(law, ts[-1])
    for _ in range(max_rounds):
        xs = np.linspace(lo, hi, coarse)
        basis = law.basis_for(xs, ts)
        sig = np.zeros(coarse, dtype=bool)
        for t in ts:
            m = law.marginal(xs, t, basis)
            m = np.where(np.isfinite(m), m, 0.0)
            if m.max() > 0:
                sig |= m >= rel_cut * m.max()
                hidden = law.noise_bound(xs, t, basis)
                lost = float(np.trapezoid(hidden, xs))
                if not lost <= HIDDEN_MASS_TOL:
                    where = xs[hidden >= rel_cut * m.max()]
                    raise AccuracyError(
                        f"{law.kind.tag} marginal at t={t}: up to {lost:.3g} of its mass sits "
                        f"below the rounding floor of the spectral sums (x in "
                        f"[{where.min():.3g}, {where.max():.3g}]); use a smaller horizon or |c|")
        idx = np.flatnonzero(sig)
        if idx.size == 0:
            raise DomainError("no significant mass found on the trial grid")
        width = hi - lo
        grow_lo = (not law.halfline) and idx[0] == 0
        grow_hi = idx[-1] == coarse - 1
        if not (grow_lo or grow_hi):
            h = xs[1] - xs[0]
            new_lo = 0.0 if law.halfline else xs[idx[0]] - 3 * h
            return np.linspace(new_lo, xs[idx[-1]] + 3 * h, n)
        if grow_lo:
            lo -= 0.5 * width
        if grow_hi:
            hi += 0.5 * width
    return np.linspace(lo, hi, n)


def transition_mass(kind: ProcessKind, s: float, t: float, x: float,
                    n_points: int = 6001) -> float:
    """int k_{t-s}(x, y) phi_t(y) / phi_s(x) dy: 1 for a proper transition kernel."""
    law = MarkovLaw(kind)
    law.check_time(s)
    law.check_time(t)
    if not t > s:
        raise DomainError("transition_mass needs s < t")
    if law.halfline and not x > 0:
        raise DomainError("half-line families start from x > 0")
    dt = t - s
    reach = 12.0 * math.sqrt(dt) + 2.0 * (abs(law.a) + abs(law.c)) * dt + 4.0
    lo = 0.0 if law.halfline else x - reach - 6.0
    ys = np.linspace(lo, x + reach, n_points)
    row = law.kernel_matrix(np.array([x]), ys, dt)[0]
    with np.errstate(invalid="ignore"):
        body = np.nan_to_num(row * np.exp(law.log_phi(ys, t) - law.log_phi(np.array([x]), s)[0]))
    return float(np.trapezoid(body, ys))


# ---------------------------------------------------------------------------
# Pointwise joint densities


def fdd_density(kind: ProcessKind, spec: FddSpec, point) -> float:
    """Joint density of the process at the times of ``spec``, at one point."""
    law = MarkovLaw(kind)
    point = np.asarray(point, dtype=float).ravel()
    if point.size != spec.dim:
        raise DomainError(f"point has {point.size} coordinates, spec needs {spec.dim}")
    ts = spec.all_times
    for t in ts:
        law.check_time(t)
    xs = np.asarray(point)
    if law.halfline and np.any(xs <= 0):
        return 0.0
    logd = law.log_norm
    if spec.includes_t0:
        logd += -law.lam * xs[0]
        prod = 1.0
    else:
        prod = float(law.left_integral(xs[:1], ts[0], None if law.halfline
                                       else SpectralBasis.build(xs[:1], ts[0]))[0])
    for j in range(1, len(ts)):
        dt = ts[j] - ts[j - 1]
        if law.halfline:
            prod *= float(g_closed(xs[j - 1], xs[j], dt))
        else:
            prod *= kernels.yakubovich_p(xs[j - 1], xs[j], dt).value
    if prod <= 0:
        return 0.0
    t_last = ts[-1]
    if kind.tag == "Y":
        phi = kernels.doob_H(xs[-1], t_last, kind.params).value if t_last < law.tau \
            else math.exp(-law.a * xs[-1])
        return max(math.exp(logd) * prod * phi, 0.0)
    if kind.tag == "eta" and t_last < law.tau:
        phi = kernels.doob_h_eta(xs[-1], t_last, law.a, horizon=law.tau).value
        return max(math.exp(logd) * prod * phi, 0.0)
    return math.exp(logd + float(law.log_phi(xs[-1:], t_last)[0])) * prod


def y_fdd_density(params: BoundaryParams, spec: FddSpec, point) -> float:
    """Joint density of the Y process (``params.a + params.c > 0``)."""
    return fdd_density(ProcessKind("Y", params), spec, point)
