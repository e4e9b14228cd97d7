r"""Special functions: Bessel K of real or imaginary order, |Gamma|^2, Hartman-Watson.

Bessel K is evaluated from the integral

.. math::
    K_z(x) = \int_0^\infty e^{-x\cosh w}\cosh(zw)\,dw

with the trapezoid rule. The integrand is entire in ``w`` and decays
doubly exponentially, so the rule converges geometrically in ``1/h``.
Most callers need :math:`K_z(e^{-s})` for ``s`` spanning a wide range,
so the workhorse functions take the log-argument ``s`` directly; this
keeps arguments like ``e^{-1000}`` representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .config import DEFAULT_QUAD, QuadratureSpec
from .errors import AccuracyError, DomainError

# e^{-41.45} ~ 1e-18: relative size at which the integrand is dropped
_LOG_CUTOFF = 41.45
MAX_IMAG_ORDER = 200.0
THETA_T_FLOOR = 0.05
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class BesselOrder:
    """Order of a Bessel K function: real ``nu`` or imaginary ``i*u``."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("real", "imaginary"):
            raise DomainError(f"unknown order kind {self.kind!r}")
        if not math.isfinite(self.value):
            raise DomainError("order must be finite")
        if self.kind == "imaginary" and abs(self.value) > MAX_IMAG_ORDER:
            raise DomainError(f"|u| must not exceed {MAX_IMAG_ORDER}")

    @classmethod
    def real(cls, nu: float) -> "BesselOrder":
        return cls("real", float(nu))

    @classmethod
    def imaginary(cls, u: float) -> "BesselOrder":
        return cls("imaginary", float(u))


# ---------------------------------------------------------------------------
# Bessel K


def _log_cosh(w):
    w = np.abs(w)
    return w + np.log1p(np.exp(-2.0 * w)) - LOG2


def _acosh_1p_exp(log_y):
    """acosh(1 + e^{log_y}) without overflow."""
    log_y = np.asarray(log_y, dtype=float)
    small = log_y < 30.0
    out = np.empty_like(log_y)
    y = np.exp(np.where(small, log_y, 0.0))
    out[small] = np.arccosh(1.0 + y[small])
    out[~small] = LOG2 + log_y[~small]
    return out


def _w_cutoff(s, nu_abs: float = 0.0):
    """Truncation point for the integral defining K_nu(e^{-s}).

    Beyond it ``e^{-s}(cosh w - 1) - |nu| w`` exceeds the value at the
    integrand's peak by more than 41.45 (a factor 1e-18).
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if nu_abs == 0.0:
        return _acosh_1p_exp(math.log(_LOG_CUTOFF) + s)
    z = np.exp(-s)
    log_ratio = math.log(nu_abs) + s
    # peak of nu w - z cosh w sits at sinh w = nu / z
    peak = np.where(log_ratio > 0,
                    log_ratio + np.log1p(np.sqrt(1.0 + np.exp(-2.0 * np.abs(log_ratio)))),
                    np.arcsinh(np.exp(np.minimum(log_ratio, 0.0))))
    base = np.hypot(z, nu_abs) - z - nu_abs * peak
    w = peak + 1.0
    for _ in range(12):
        w = _acosh_1p_exp(np.log(np.maximum(_LOG_CUTOFF + base + nu_abs * w, 1e-300)) + s)
    return np.maximum(w, peak + 1.0)


def _trapezoid_step(u_max: float, w_max: float, nodes: int) -> float:
    # analyticity strip |Im w| < pi/2; cos(uw) grows like e^{u pi/2} there
    h_rule = min(0.1, math.pi ** 2 / (48.0 + 0.5 * math.pi * abs(u_max)))
    return min(h_rule, w_max / nodes)


def _k_trapezoid(s, order_kind: str, value: float, h: float, w_max: float):
    """Trapezoid sum for K(e^{-s}) over [0, w_max] with step h; vectorised in s."""
    n = int(math.ceil(w_max / h))
    w = np.arange(n + 1) * h
    wt = np.full(n + 1, h)
    wt[0] = 0.5 * h
    s = np.atleast_1d(np.asarray(s, dtype=float))
    # e^{-e^{-s} cosh w} evaluated in log space
    expo = -np.exp(np.clip(-s[:, None] + _log_cosh(w)[None, :], -745.0, 709.0))
    if order_kind == "imaginary":
        env = np.exp(expo)
        return env @ (wt * np.cos(value * w))
    nu = abs(value)
    # cosh(nu w) e^{...} = (e^{nu w} + e^{-nu w}) / 2 e^{...}
    lg = expo + nu * w[None, :]
    out = 0.5 * (np.exp(lg) @ wt + np.exp(expo - nu * w[None, :]) @ wt)
    return out


def bessel_k_exparg(order: BesselOrder, s, quad: QuadratureSpec = DEFAULT_QUAD):
    """K_order(e^{-s}) for real ``s`` (scalar or array).

    Raises :class:`AccuracyError` when halving the trapezoid step moves the
    result by more than the tolerance in ``quad``.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if not np.all(np.isfinite(s_arr)):
        raise DomainError("log-argument must be finite")
    nu_abs = abs(order.value) if order.kind == "real" else 0.0
    u_max = order.value if order.kind == "imaginary" else 0.0
    w_cut = _w_cutoff(s_arr, nu_abs)
    w_max = float(quad.upper_cutoff) if quad.upper_cutoff else float(np.max(w_cut))
    h = _trapezoid_step(u_max, w_max, quad.nodes)
    val = _k_trapezoid(s_arr, order.kind, order.value, h, w_max)
    if quad.check:
        fine = _k_trapezoid(s_arr, order.kind, order.value, 0.5 * h, w_max)
        bad = np.abs(fine - val) > quad.rel_tol * np.abs(fine) + quad.abs_tol
        if np.any(bad):
            i = int(np.argmax(bad))
            raise AccuracyError(
                f"K_{order.kind}({order.value}) at log-argument {s_arr[i]}: "
                f"step doubling disagrees ({val[i]!r} vs {fine[i]!r})",
                coarse=float(val[i]), fine=float(fine[i]))
        val = fine
    return val if np.ndim(s) else float(val[0])


def bessel_k(order: BesselOrder, x, quad: QuadratureSpec = DEFAULT_QUAD):
    """Modified Bessel K of real or imaginary order at ``x > 0``."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("bessel_k needs x > 0")
    return bessel_k_exparg(order, -np.log(x_arr), quad)


def bessel_k_imag_matrix(u, s, h: float | None = None):
    """Matrix ``M[i, j] = K_{i u_j}(e^{-s_i})``.

    One trapezoid grid in ``w`` is shared across all entries, so the whole
    table is a single matrix product. No step-doubling check is made here;
    callers check convergence of whatever integral they build on top.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if u.size and np.max(np.abs(u)) > MAX_IMAG_ORDER:
        raise DomainError(f"|u| must not exceed {MAX_IMAG_ORDER}")
    w_max = float(np.max(_w_cutoff(s)))
    if h is None:
        h = _trapezoid_step(float(np.max(np.abs(u))) if u.size else 0.0, w_max, 16)
    n = int(math.ceil(w_max / h))
    w = np.arange(n + 1) * h
    wt = np.full(n + 1, h)
    wt[0] = 0.5 * h
    out = np.empty((s.size, u.size))
    cos_part = wt[:, None] * np.cos(np.outer(w, u))
    lc = _log_cosh(w)
    # row blocks keep the intermediate matrix small
    for lo in range(0, s.size, 512):
        blk = s[lo:lo + 512]
        env = np.exp(-np.exp(np.clip(-blk[:, None] + lc[None, :], -745.0, 709.0)))
        out[lo:lo + 512] = env @ cos_part
    return out


def bessel_k_real_vec(nu: float, s, h: float | None = None):
    """K_nu(e^{-s}) for real ``nu``, vectorised over ``s``, no doubling check."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    nu_abs = abs(float(nu))
    w_max = float(np.max(_w_cutoff(s, nu_abs)))
    if h is None:
        h = _trapezoid_step(0.0, w_max, 16)
    out = np.empty(s.size)
    for lo in range(0, s.size, 512):
        out[lo:lo + 512] = _k_trapezoid(s[lo:lo + 512], "real", nu_abs, h, w_max)
    return out


def log_bessel_k_real_vec(nu: float, s, h: float | None = None):
    """log K_nu(e^{-s}); stays finite where K underflows (large negative s)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s.size)
    big = s < -5.0
    if np.any(~big):
        out[~big] = np.log(bessel_k_real_vec(nu, s[~big], h))
    if np.any(big):
        # K_nu(z) = sqrt(pi/2z) e^{-z} * (1 + scaled remainder), z = e^{-s} > 148
        z = np.exp(-s[big])
        out[big] = np.log(special.kve(abs(nu), z)) - z
    return out


# ---------------------------------------------------------------------------
# Gamma


def log_gamma(z):
    """Principal branch of log Gamma for complex ``z``."""
    return special.loggamma(np.asarray(z, dtype=complex))


def _is_pole(re, im):
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    return (im == 0) & (re <= 0) & (re == np.round(re))


def abs_gamma_sq(re, im):
    """|Gamma(re + i im)|^2; raises at poles."""
    if np.any(_is_pole(re, im)):
        raise DomainError("abs_gamma_sq evaluated at a pole of Gamma")
    val = np.exp(2.0 * np.real(log_gamma(np.asarray(re) + 1j * np.asarray(im))))
    return float(val) if np.ndim(val) == 0 else val


def inv_abs_gamma_sq(re, im):
    """1/|Gamma(re + i im)|^2 with the convention 1/Gamma(pole) = 0."""
    re_a = np.asarray(re, dtype=float)
    im_a = np.asarray(im, dtype=float)
    pole = _is_pole(re_a, im_a)
    z = np.where(pole, 1.0, re_a) + 1j * im_a
    val = np.where(pole, 0.0, np.exp(-2.0 * np.real(log_gamma(z))))
    return float(val) if np.ndim(val) == 0 else val


def log_abs_gamma_sq(re, im):
    """log |Gamma(re + i im)|^2 (``-inf`` never returned; poles raise)."""
    if np.any(_is_pole(re, im)):
        raise DomainError("log_abs_gamma_sq evaluated at a pole of Gamma")
    return 2.0 * np.real(log_gamma(np.asarray(re) + 1j * np.asarray(im)))


def rgamma(x):
    """1/Gamma(x) for real x, zero at the poles."""
    return special.rgamma(x)


# ---------------------------------------------------------------------------
# Hartman-Watson


def _theta_contour(xi, t: float, n_per_unit: float | None = None, with_noise: bool = False):
    """theta(xi, t) for an array of xi at one t.

    Uses the oscillatory integral representation, rewritten as the imaginary
    part of a Gaussian-weighted integral over the real line and shifted to
    ``Im y = sigma``; the shift lowers the size of the cancelling terms from
    e^{pi^2/4t} to e^{(pi-sigma)^2/4t}.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    sigma = 0.5 * math.pi - min(0.25, 4.0 * t)
    cs, sn = math.cos(sigma), math.sin(sigma)
    v_max = float(np.max(_acosh_1p_exp(np.log(_LOG_CUTOFF / (np.min(xi) * cs)))))
    v_max = min(v_max, 2.0 * math.sqrt(t * (_LOG_CUTOFF + (math.pi - sigma) ** 2 / (4 * t))) + 1.0) \
        if t < 1.0 else v_max
    freq = (math.pi - sigma) / (2.0 * t)
    h = min(0.05, math.pi / (6.0 * (freq + 1.0)), math.sqrt(t) / 4.0)
    if n_per_unit is not None:
        h = 1.0 / n_per_unit
    n = int(math.ceil(v_max / h))
    v = np.linspace(-v_max, v_max, 2 * n + 1)
    y = v + 1j * sigma
    gauss = np.exp(-((y - 1j * math.pi) ** 2) / (4.0 * t))
    ch = np.cosh(v) * cs + 1j * np.sinh(v) * sn
    sh = np.sinh(y)
    body = np.exp(-np.outer(xi, ch)) * (gauss * sh)[None, :]
    integral = body.sum(axis=1) * (v[1] - v[0])
    pref = xi / (2.0 * math.sqrt(math.pi ** 3 * t))
    val = pref * np.imag(integral)
    if not with_noise:
        return val
    # rounding floor of the cancelling sum
    noise = 64.0 * np.finfo(float).eps * pref * np.abs(body).sum(axis=1) * (v[1] - v[0])
    return val, noise


def hartman_watson_theta(xi, t: float, quad: QuadratureSpec = DEFAULT_QUAD,
                         t_floor: float = THETA_T_FLOOR):
    r"""Unnormalised Hartman-Watson density theta(xi, t).

    Normalised so that :math:`\int_0^\infty e^{-\lambda^2 t}\theta(\xi,t)dt = I_\lambda(\xi)`.
    Values below ``t_floor`` are refused: the representation loses all
    digits to cancellation as ``t -> 0``.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(~(xi_arr > 0)) or not t > 0:
        raise DomainError("hartman_watson_theta needs xi > 0 and t > 0")
    if t < t_floor:
        raise AccuracyError(f"t={t} is below the small-t floor {t_floor}")
    val = _theta_contour(xi_arr, t)
    if quad.check:
        sigma = 0.5 * math.pi - min(0.25, 4.0 * t)
        freq = (math.pi - sigma) / (2.0 * t)
        h = min(0.05, math.pi / (6.0 * (freq + 1.0)), math.sqrt(t) / 4.0)
        fine, noise = _theta_contour(xi_arr, t, n_per_unit=2.0 / h, with_noise=True)
        scale = np.max(np.abs(fine))
        bad = np.abs(fine - val) > quad.rel_tol * scale + quad.abs_tol + noise
        if np.any(bad):
            i = int(np.argmax(bad))
            raise AccuracyError(
                f"theta({xi_arr[i]}, {t}): step doubling disagrees",
                coarse=float(val[i]), fine=float(fine[i]))
        val = fine
    return val if np.ndim(xi) else float(val[0])


def theta_laplace(lam: float, xi: float, quad: QuadratureSpec = DEFAULT_QUAD,
                  t_floor: float = THETA_T_FLOOR, step: float = 0.02) -> float:
    r""":math:`\int e^{-\lambda^2 t}\theta(\xi,t)\,dt` by trapezoid in ``log t``.

    The range below ``t_floor`` is dropped: theta is below 1e-9 there for
    the arguments of interest, so the truncation is invisible at 1e-8.
    """
    if not (lam > 0 and xi > 0):
        raise DomainError("theta_laplace needs lambda > 0 and xi > 0")
    # e^{-lam^2 t} < 1e-18 beyond t_max
    t_max = max(4.0 * t_floor, _LOG_CUTOFF / lam ** 2)

    def rule(h):
        v = np.arange(math.log(t_floor), math.log(t_max) + h, h)
        t = np.exp(v)
        th = np.array([_theta_contour(np.array([xi]), tt)[0] for tt in t])
        return float(np.trapezoid(np.exp(-lam ** 2 * t) * th * t, v))

    val = rule(step)
    if quad.check:
        fine = rule(0.5 * step)
        if abs(fine - val) > quad.rel_tol * abs(fine) + quad.abs_tol:
            raise AccuracyError(f"theta Laplace transform at ({lam}, {xi}): step doubling "
                                "disagrees", coarse=val, fine=fine)
        val = fine
    return val


def bessel_k_mellin(nu: float, s: float, quad: QuadratureSpec = DEFAULT_QUAD,
                    step: float = 0.05) -> float:
    r""":math:`\int_0^\infty K_\nu(x)x^{s-1}dx` from a grid of ``bessel_k`` values.

    With ``x = e^{-r}`` the integrand becomes ``K_nu(e^{-r}) e^{-rs}``, which
    decays like ``e^{-(s-|nu|) r}`` as ``r -> inf`` and doubly exponentially
    as ``r -> -inf``; the trapezoid rule on the whole line converges
    geometrically in ``1/step``.
    """
    nu_abs = abs(float(nu))
    if not s > nu_abs:
        raise DomainError("the Mellin moment needs s > |nu|")
    r_hi = (_LOG_CUTOFF + 5.0) / (s - nu_abs)
    r_lo = -math.log(60.0)

    def rule(h):
        r = np.arange(r_lo, r_hi + h, h)
        k = bessel_k_exparg(BesselOrder.real(nu), r, quad)
        return float(np.trapezoid(k * np.exp(-s * r), r))

    val = rule(step)
    fine = rule(0.5 * step)
    if abs(fine - val) > quad.rel_tol * abs(fine) + quad.abs_tol:
        raise AccuracyError(f"Mellin moment ({nu}, {s}): step doubling disagrees",
                            coarse=val, fine=fine)
    return fine
