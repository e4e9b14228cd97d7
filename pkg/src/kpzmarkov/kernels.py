r"""Heat kernels, Doob h-transforms and normalising constants.

Two kernels drive everything:

* the Yakubovich kernel ``p_t(x, y)`` of Brownian motion (variance 1/2)
  killed at rate ``exp(-2x)/4``, evaluated either spectrally through
  Bessel K of imaginary order or through the Hartman-Watson density;
* the absorbed kernel ``g_t(x, y)`` on the half line, with a closed form
  and a sine-transform form.

Constants and h-transforms are available by at least two routes so the
routes can check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .config import DEFAULT_QUAD, BoundaryParams, KernelValue, QuadratureSpec
from .errors import AccuracyError, DomainError
from .specfun import (THETA_T_FLOOR, _theta_contour, _w_cutoff, bessel_k_imag_matrix,
                      bessel_k_real_vec, log_abs_gamma_sq)

SQRT_PI = math.sqrt(math.pi)
_LN10 = math.log(10.0)

# about 240 MB of float64
MAX_TABLE_ENTRIES = 30_000_000


def spectral_u_max(t: float) -> float:
    """Truncation of the u-integrals: e^{-t u^2/4} < 1e-16 beyond it."""
    return math.sqrt(64.0 * _LN10 / t)


def _gauss_legendre(lo: float, hi: float, n: int):
    x, w = np.polynomial.legendre.leggauss(int(n))
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def _u_nodes(t: float, spread: float, quad: QuadratureSpec):
    u_max = quad.upper_cutoff or spectral_u_max(t)
    # K_{iu}(e^{-x}) oscillates in u with angular frequency ~ |x| + log 2
    n = max(quad.nodes, int(math.ceil(u_max * (spread + 6.0) / math.pi * 3.0)))
    return u_max, n


def _checked(fn, n: int, quad: QuadratureSpec, what: str, floor: float = 0.0):
    """Run ``fn(n)`` and, if requested, ``fn(2n)``; return (value, discrepancy).

    ``floor`` is an absolute rounding floor added to the tolerance.
    """
    coarse = fn(n)
    if not quad.check:
        return coarse, 0.0
    fine = fn(2 * n)
    err = float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))
    if err > quad.tolerance(float(np.max(np.abs(fine)))) + floor:
        raise AccuracyError(f"{what}: node doubling moved the value by {err:.3e}",
                            coarse=coarse, fine=fine)
    return fine, err


def spectral_weight(u, t: float):
    """(2/pi) e^{-t u^2/4} / |Gamma(iu)|^2, the spectral measure of p_t."""
    u = np.asarray(u, dtype=float)
    return (2.0 / math.pi) * np.exp(-t * u * u / 4.0 - log_abs_gamma_sq(0.0, u))


def gamma_ratio(a: float, u):
    """|Gamma((a + iu)/2)|^2 / |Gamma(iu)|^2, finite at every node u > 0."""
    u = np.asarray(u, dtype=float)
    return np.exp(log_abs_gamma_sq(0.5 * a, 0.5 * u) - log_abs_gamma_sq(0.0, u))


# ---------------------------------------------------------------------------
# Yakubovich kernel


def _p_theta(x: float, y: float, t: float, step: float) -> float:
    # Yor's normalisation theta_Y(xi, s) = theta(xi, s/2) / 2 enters here
    r_lo = -(x + y) - 8.0 - math.log(4.0 * 45.0)
    r_hi = math.log(45.0 / math.cosh(x - y)) + 4.0
    r = np.arange(r_lo, r_hi + step, step)
    xi = np.exp(r)
    expo = -xi * math.cosh(x - y) - 0.5 * np.exp(-x - y - r)
    keep = expo > -745.0
    if not np.any(keep):
        return 0.0
    body = np.exp(expo[keep]) * _theta_contour(xi[keep], 0.25 * t)
    return 0.5 * step * float(np.sum(body))


def yakubovich_p(x: float, y: float, t: float, quad: QuadratureSpec = DEFAULT_QUAD,
                 method: str = "spectral") -> KernelValue:
    """Transition density ``p_t(x, y)`` of killed Brownian motion.

    ``method="spectral"`` integrates Bessel K of imaginary order against
    ``du / |Gamma(iu)|^2``; ``method="theta"`` integrates the Hartman-Watson
    density. The theta route needs ``t >= 4 * THETA_T_FLOOR``.
    """
    if not t > 0:
        raise DomainError("yakubovich_p needs t > 0")
    if method == "spectral":
        # fixed argument order keeps the result exactly symmetric
        x, y = min(x, y), max(x, y)
        u_max, n = _u_nodes(t, abs(x) + abs(y), quad)

        def fn(m):
            u, w = _gauss_legendre(0.0, u_max, m)
            k = bessel_k_imag_matrix(u, np.array([x, y]))
            return float(np.sum(w * spectral_weight(u, t) * k[0] * k[1]))

        # rounding in the K table scales with the w-integral's range, not |K|
        u, w = _gauss_legendre(0.0, u_max, n)
        k = np.abs(bessel_k_imag_matrix(u, np.array([x, y]))) + _w_cutoff(np.array([x, y]))[:, None]
        floor = 1e-15 * float(np.sum(w * spectral_weight(u, t) * k[0] * k[1]))
        val, err = _checked(fn, n, quad, "spectral p_t", floor)
        # killing only lowers the free kernel, as in SpectralBasis.p_matrix
        free = math.exp(-((x - y) ** 2) / t) / math.sqrt(math.pi * t)
        return KernelValue(min(max(val, 0.0), free), err, "spectral")
    if method == "theta":
        if t < 4 * THETA_T_FLOOR:
            raise AccuracyError(f"theta route needs t >= {4 * THETA_T_FLOOR}, got {t}")
        step = min(0.05, 0.25 * math.sqrt(t))

        def fn(m):
            return _p_theta(x, y, t, step * 64.0 / m)

        val, err = _checked(fn, 64, quad, "theta-route p_t")
        return KernelValue(max(val, 0.0), err, "theta")
    raise DomainError(f"unknown method {method!r}")


@dataclass(frozen=True)
class SpectralBasis:
    """Bessel K of imaginary order tabulated on a spatial grid.

    ``kmat[i, j] = K_{i u_j}(e^{-x_i})`` with Gauss-Legendre nodes ``u`` and
    weights ``w`` on ``[0, u_max]``. Built once and read-only afterwards;
    every grid-valued kernel is a matrix product against it.
    """

    x: np.ndarray
    u: np.ndarray
    w: np.ndarray
    kmat: np.ndarray
    # L1 size of the w-integrand behind each row of kmat; rounding in the
    # table entries scales with it rather than with |K|
    l1: np.ndarray | None = None

    @classmethod
    def build(cls, x, t_min: float, n_u: int | None = None) -> "SpectralBasis":
        x = np.asarray(x, dtype=float)
        u_max = spectral_u_max(t_min)
        spread = float(np.max(np.abs(x)))
        if n_u is None:
            n_u = max(64, int(math.ceil(u_max * (2 * spread + 6.0) / math.pi * 3.0)))
        if x.size * n_u > MAX_TABLE_ENTRIES:
            raise AccuracyError(f"spectral table of {x.size} x {n_u} entries exceeds the "
                                f"{MAX_TABLE_ENTRIES:.0e} limit; the grid is too wide")
        u, w = _gauss_legendre(0.0, u_max, n_u)
        kmat = bessel_k_imag_matrix(u, x)
        l1 = _w_cutoff(x)
        for arr in (x, u, w, kmat, l1):
            arr.setflags(write=False)
        return cls(x, u, w, kmat, l1)

    def p_matrix(self, t: float, rows=None, cols=None) -> np.ndarray:
        """``p_t(x_i, x_j)`` for all grid pairs (optionally a row/col subset)."""
        kr = self.kmat if rows is None else self.kmat[rows]
        kc = self.kmat if cols is None else self.kmat[cols]
        out = (kr * (self.w * spectral_weight(self.u, t))) @ kc.T
        # killing only lowers the free heat kernel; the bound removes the
        # cancellation noise far off the diagonal
        xr = self.x if rows is None else self.x[rows]
        xc = self.x if cols is None else self.x[cols]
        free = np.exp(-((xr[:, None] - xc[None, :]) ** 2) / t) / math.sqrt(math.pi * t)
        return np.clip(out, 0.0, free)

    def noise_floor(self, coef) -> np.ndarray:
        """Rounding-level size of :meth:`integral`, from the absolute terms."""
        wc = np.abs(self.w * coef)
        out = np.abs(self.kmat) @ wc
        if self.l1 is not None:
            out += self.l1 * wc.sum()
        return 1e-15 * out

    def integral(self, coef) -> np.ndarray:
        """``sum_j w_j coef_j K_{iu_j}(e^{-x})`` for every grid point."""
        return self.kmat @ (self.w * coef)


def p_matrix(xs, ys, t: float, n_u: int | None = None) -> np.ndarray:
    """Spectral ``p_t`` on the outer grid ``xs x ys``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    basis = SpectralBasis.build(np.concatenate([xs, ys]), t, n_u)
    return basis.p_matrix(t, rows=np.arange(xs.size), cols=xs.size + np.arange(ys.size))


# ---------------------------------------------------------------------------
# Absorbed kernel on the half line


def g_closed(x, y, t):
    """(e^{-(x-y)^2/t} - e^{-(x+y)^2/t}) / sqrt(pi t), vectorised."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # factor e^{-(x-y)^2/t} to keep the difference accurate
    d = np.exp(-((x - y) ** 2) / t) * -np.expm1(-4.0 * x * y / t)
    return d / math.sqrt(math.pi * t)


def absorbing_g(x: float, y: float, t: float, method: str = "closed_form",
                quad: QuadratureSpec = DEFAULT_QUAD) -> KernelValue:
    """Heat kernel of variance-1/2 Brownian motion absorbed at 0."""
    if not (x > 0 and y > 0 and t > 0):
        raise DomainError("absorbing_g needs x, y, t > 0")
    if method == "closed_form":
        return KernelValue(float(g_closed(x, y, t)), 0.0, "closed_form")
    if method == "spectral":
        u_max = quad.upper_cutoff or spectral_u_max(t)
        n = max(quad.nodes, int(math.ceil(u_max * (x + y) / math.pi * 4.0)) + 32)

        def fn(m):
            u, w = _gauss_legendre(0.0, u_max, m)
            return float((2.0 / math.pi) * np.sum(w * np.exp(-t * u * u / 4.0)
                                                  * np.sin(x * u) * np.sin(y * u)))

        val, err = _checked(fn, n, quad, "spectral g_t")
        return KernelValue(max(val, 0.0), err, "spectral")
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Doob h-transforms


def n_residues(a: float) -> int:
    """Number of k >= 0 with a + 2k < 0 (strict)."""
    return int(math.ceil(-a / 2.0)) if a < 0 else 0


def _residue_terms_H(xs, a: float, remaining: float):
    out = np.zeros(np.size(xs))
    for k in range(n_residues(a)):
        order = a + 2 * k
        # residue of Gamma((a-w)/2) at w = a+2k also picks up
        # Gamma(a+k)/Gamma(a+2k) = 1/(a+k)_k and (-1)^k/k!
        shape = (-1.0) ** k / (math.factorial(k) * _pochhammer(a + k, k))
        coef = (2.0 ** (a + 1) * math.exp(remaining * order * order / 4.0)
                * special.rgamma(-order) * shape)
        if coef != 0.0:
            out += coef * bessel_k_real_vec(order, xs)
    return out


def doob_H_values(xs, t: float, params: BoundaryParams, basis: SpectralBasis | None = None,
                  with_noise: bool = False):
    """Vectorised H_t on a grid by the explicit residue formula (no checks).

    With ``with_noise`` also returns the rounding floor of the spectral
    part; values below a few times that floor carry no relative accuracy.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    a, tau = params.a, params.tau
    if t >= tau:
        out = np.exp(-a * xs)
        return (out, np.zeros_like(out)) if with_noise else out
    remaining = tau - t
    if basis is None:
        basis = SpectralBasis.build(xs, remaining)
    coef = np.exp(-remaining * basis.u ** 2 / 4.0) * gamma_ratio(a, basis.u)
    scale = 2.0 ** a / (2.0 * math.pi)
    out = scale * basis.integral(coef) + _residue_terms_H(basis.x, a, remaining)
    if with_noise:
        return out, scale * basis.noise_floor(coef)
    return out


def doob_H(x: float, t: float, params: BoundaryParams, quad: QuadratureSpec = DEFAULT_QUAD,
           method: str = "residue_series") -> KernelValue:
    """Space-time harmonic function H_t(x) = int e^{-a y} p_{tau-t}(x, y) dy.

    ``residue_series`` uses the Mellin-transformed spectral integral plus the
    residue terms for ``a + 2k < 0``; ``spectral`` integrates p over y
    directly and is only available for ``a > 0``.
    """
    a, tau = params.a, params.tau
    if not (0 <= t <= tau):
        raise DomainError(f"doob_H needs 0 <= t <= tau, got t={t}")
    if t == tau:
        return KernelValue(math.exp(-a * x), 0.0, "closed_form")
    remaining = tau - t
    if method == "residue_series":
        u_max, n = _u_nodes(remaining, abs(x), quad)

        def fn(m):
            u, w = _gauss_legendre(0.0, u_max, m)
            k = bessel_k_imag_matrix(u, np.array([x]))[0]
            coef = np.exp(-remaining * u * u / 4.0) * gamma_ratio(a, u)
            return 2.0 ** a / (2.0 * math.pi) * float(np.sum(w * coef * k))

        val, err = _checked(fn, n, quad, "H_t integral")
        res = float(_residue_terms_H(np.array([x]), a, remaining)[0])
        return KernelValue(val + res, err, "residue_series",
                           {"n_residues": n_residues(a)})
    if method == "spectral":
        if a <= 0:
            raise DomainError("direct quadrature of H_t needs a > 0")
        y_lo = min(x, 0.0) - 6.0 - 2.0 * math.sqrt(remaining)
        y_hi = max(x, 0.0) + 45.0 / a + 6.0 * math.sqrt(remaining)

        def fn(m):
            ys, wy = _gauss_legendre(y_lo, y_hi, m)
            p = p_matrix(np.array([x]), ys, remaining)[0]
            return float(np.sum(wy * np.exp(-a * ys) * p))

        n = max(quad.nodes, int(4 * (y_hi - y_lo)))
        val, err = _checked(fn, n, quad, "H_t by y-quadrature")
        return KernelValue(val, err, "spectral")
    raise DomainError(f"unknown method {method!r}")


def h_eta_closed(x, t: float, a: float, horizon: float = 1.0):
    """Closed form of int_0^inf g_{T-t}(x, y) e^{-a y} dy (test oracle)."""
    x = np.asarray(x, dtype=float)
    s = horizon - t
    r = math.sqrt(s)
    # e^{a^2 s/4}/2 [e^{-ax} erfc((as/2 - x)/r) - e^{ax} erfc((as/2 + x)/r)], via erfcx
    z1 = (a * s / 2.0 - x) / r
    z2 = (a * s / 2.0 + x) / r
    t1 = np.where(z1 > 0, np.exp(-a * x + a * a * s / 4.0 - z1 * z1) * special.erfcx(z1),
                  np.exp(-a * x + a * a * s / 4.0) * special.erfc(z1))
    t2 = np.exp(a * x + a * a * s / 4.0 - z2 * z2) * special.erfcx(z2)
    return 0.5 * (t1 - t2)


def h_eta_values(xs, t: float, a: float, horizon: float = 1.0, n: int = 400):
    """Vectorised h_t by Gauss-Legendre quadrature over y (no checks)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if t >= horizon:
        return np.where(xs > 0, np.exp(-a * xs), 0.0)
    s = horizon - t
    width = 9.0 * math.sqrt(s)
    # e^{-ay} shifts the Gaussian centred at x to x - a s / 2
    shifted = xs - a * s / 2.0
    lo = np.maximum(np.minimum(xs, shifted) - width, 0.0)
    hi = np.maximum(np.maximum(xs, shifted), -xs - a * s / 2.0) + width
    hi = np.maximum(hi, lo + 1e-12)
    g, w = np.polynomial.legendre.leggauss(n)
    out = np.empty(xs.size)
    for lo_i in range(0, xs.size, 256):
        sl = slice(lo_i, lo_i + 256)
        half = 0.5 * (hi[sl] - lo[sl])
        mid = 0.5 * (hi[sl] + lo[sl])
        ys = mid[:, None] + half[:, None] * g[None, :]
        vals = g_closed(xs[sl, None], ys, s) * np.exp(-a * ys)
        out[sl] = np.sum(vals * w[None, :], axis=1) * half
    return np.where(xs > 0, out, 0.0)


def doob_h_eta(x: float, t: float, a: float, quad: QuadratureSpec = DEFAULT_QUAD,
               horizon: float = 1.0) -> KernelValue:
    """h_t(x) = int_0^inf g_{1-t}(x, y) e^{-a y} dy for the eta process.

    Returns 0 (flagged ``absorbed``) for x <= 0 when t < 1.
    """
    if not (0 <= t <= horizon):
        raise DomainError(f"doob_h_eta needs 0 <= t <= {horizon}")
    if t == horizon:
        return KernelValue(math.exp(-a * x) if x > 0 else 0.0, 0.0, "closed_form")
    if x <= 0:
        return KernelValue(0.0, 0.0, "spectral", {"absorbed": True})

    def fn(m):
        return float(h_eta_values(np.array([x]), t, a, horizon, n=m)[0])

    val, err = _checked(fn, max(quad.nodes, 200), quad, "h_t quadrature")
    return KernelValue(val, err, "spectral", {"absorbed": False})


# ---------------------------------------------------------------------------
# Normalising constants


def _pochhammer(x: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= x + j
    return out


def _const_C_series(a: float, c: float, tau: float, quad: QuadratureSpec):
    if c > 0 and a < 0:
        a, c = c, a
    u_max, n = _u_nodes(tau, 0.0, quad)

    def fn(m):
        u, w = _gauss_legendre(0.0, u_max, m)
        lg = (log_abs_gamma_sq(0.5 * a, 0.5 * u) + log_abs_gamma_sq(0.5 * c, 0.5 * u)
              - log_abs_gamma_sq(0.0, u))
        return float(np.sum(w * np.exp(-tau * u * u / 4.0 + lg)))

    integral, err = _checked(fn, n, quad, "C integral")
    pref = 2.0 ** (a + c)
    val = pref / (8.0 * math.pi) * integral
    n_res = n_residues(c)
    if n_res:
        front = pref * special.gamma((c + a) / 2.0) * special.gamma((a - c) / 2.0) \
            * special.rgamma(-c) / (2.0 * c)
        total = 0.0
        for k in range(n_res):
            ck = c + 2 * k
            total += (math.exp(tau * ck * ck / 4.0) * ck * _pochhammer(c, k)
                      * _pochhammer((a + c) / 2.0, k)
                      / (math.factorial(k) * _pochhammer(1.0 + (c - a) / 2.0, k)))
        val += front * total
    return val, err * pref / (8.0 * math.pi), n_res


def _mellin_rows(a: float, x_lo: float, x_hi: float, u, n_x: int):
    """int e^{-a x} K_{iu}(e^{-x}) dx over a truncated line, for every u."""
    xs = np.linspace(x_lo, x_hi, n_x)
    h = xs[1] - xs[0]
    wx = np.full(n_x, h)
    wx[0] = wx[-1] = 0.5 * h
    k = bessel_k_imag_matrix(u, xs)
    return (wx * np.exp(-a * xs)) @ k


def _const_C_double(a: float, c: float, tau: float, quad: QuadratureSpec):
    if not (a > 0 and c > 0):
        raise DomainError("the double-integral route needs a, c > 0")
    u_max, n = _u_nodes(tau, 0.0, quad)
    x_lo = -4.5
    x_hi_a, x_hi_c = 40.0 / a + 5.0, 40.0 / c + 5.0

    def fn(m):
        u, w = _gauss_legendre(0.0, u_max, m)
        n_x = 8 * m
        ra = _mellin_rows(a, x_lo, x_hi_a, u, max(n_x, int(40 * (x_hi_a - x_lo))))
        rc = _mellin_rows(c, x_lo, x_hi_c, u, max(n_x, int(40 * (x_hi_c - x_lo))))
        return float(np.sum(w * spectral_weight(u, tau) * ra * rc))

    val, err = _checked(fn, n, quad, "C double integral")
    return val, err


def const_C(params: BoundaryParams, quad: QuadratureSpec = DEFAULT_QUAD,
            method: str = "residue_series") -> KernelValue:
    """Normalising constant C = int int e^{-a x - c y} p_tau(x, y) dx dy.

    ``residue_series`` is the Gamma-product spectral integral plus the
    finite residue sum (needs only a + c > 0); ``double_integral``
    integrates the spectral kernel over both variables (a, c > 0).
    """
    params.require_pos_sum("const_C")
    a, c, tau = params.a, params.c, params.tau
    if method == "residue_series":
        val, err, n_res = _const_C_series(a, c, tau, quad)
        return KernelValue(val, err, "residue_series", {"n_residues": n_res})
    if method == "double_integral":
        val, err = _const_C_double(a, c, tau, quad)
        return KernelValue(val, err, "spectral")
    raise DomainError(f"unknown method {method!r}")


def const_C_value(a: float, c: float, tau: float) -> float:
    """Fast const_C without the doubling check."""
    if not a + c > 0:
        raise DomainError("const_C needs a + c > 0")
    return _const_C_series(a, c, tau, QuadratureSpec(check=False))[0]


def _frakC_closed(a: float, c: float) -> float:
    if a == c:
        # limit of the a != c branch as c -> a
        return (2.0 + a * a) / (4.0 * a) * special.erfcx(a / 2.0) - 0.5 / SQRT_PI
    return (a * special.erfcx(a / 2.0) - c * special.erfcx(c / 2.0)) / (a * a - c * c)


def _frakC_double(a: float, c: float, n_s: int = 240, n_d: int = 160) -> float:
    # s = x + y, d = x - y; g_1 = (e^{-d^2} - e^{-s^2}) / sqrt(pi), Jacobian 1/2
    s_hi = 60.0 / (a + c) + 12.0
    d_half = 9.0 + abs(a - c) / 2.0
    edges = np.linspace(0.0, s_hi, max(2, int(s_hi) + 1))
    gs, ws = np.polynomial.legendre.leggauss(n_s // 4 if n_s >= 64 else 16)
    gd, wd = np.polynomial.legendre.leggauss(n_d)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = 0.5 * (hi - lo) * gs + 0.5 * (hi + lo)
        wsn = 0.5 * (hi - lo) * ws
        lim = np.minimum(s, d_half)
        center = np.clip(-(a - c) / 4.0, -lim, lim)
        # split each d-line at the Gaussian's center for a smoother integrand
        for left, right in ((-lim, center), (center, lim)):
            half = 0.5 * (right - left)
            d = (0.5 * (right + left))[:, None] + half[:, None] * gd[None, :]
            ss = s[:, None]
            body = (np.exp(-d * d - (a + c) * ss / 2.0 - (a - c) * d / 2.0)
                    - np.exp(-ss * ss - (a + c) * ss / 2.0 - (a - c) * d / 2.0))
            total += float(np.sum(wsn * half * (body @ wd)))
    return 0.5 * total / SQRT_PI


def _frakC_v_integral(a: float, c: float, n: int = 400) -> float:
    """(1/2pi) int e^{-v^2/4} 4 v^2 / ((a^2+v^2)(c^2+v^2)) dv."""
    v, w = _gauss_legendre(0.0, 14.0, n)
    return float(np.sum(w * np.exp(-v * v / 4.0) * 4 * v * v
                        / ((a * a + v * v) * (c * c + v * v)))) / (2.0 * math.pi)


def const_frakC(a: float, c: float, method: str = "closed_form") -> KernelValue:
    """Normalising constant of the eta process, int int e^{-ax-cy} g_1 dx dy.

    ``closed_form`` is the erfc expression; ``integral`` integrates g_1 over
    the quadrant for a, c >= 0 and otherwise adds the reflection term to the
    constant with ``|a|, |c|``.
    """
    if not a + c > 0:
        raise DomainError("const_frakC needs a + c > 0")
    if method == "closed_form":
        return KernelValue(float(_frakC_closed(a, c)), 0.0, "closed_form")
    if method == "integral":
        if a >= 0 and c >= 0:
            coarse = _frakC_double(a, c, 120, 80)
            fine = _frakC_double(a, c)
            return KernelValue(fine, abs(fine - coarse), "spectral")
        lo, hi = (a, c) if a < 0 else (c, a)
        base = const_frakC(hi, -lo, "integral")
        corr = 2.0 * lo * math.exp(lo * lo / 4.0) / (hi * hi - lo * lo)
        return KernelValue(base.value - corr, base.est_error, "spectral",
                           {"reflected": True})
    if method == "v_integral":
        val = _frakC_v_integral(a, c)
        lo = min(a, c)
        hi = max(a, c)
        if lo < 0:
            val -= 2.0 * lo * math.exp(lo * lo / 4.0) / (hi * hi - lo * lo)
        return KernelValue(val, 0.0, "spectral")
    raise DomainError(f"unknown method {method!r}")


def const_K(params: BoundaryParams, quad: QuadratureSpec = DEFAULT_QUAD) -> KernelValue:
    """Normaliser of the exponential-functional density, 2^{1-(a+c)/2} C / Gamma((a+c)/2)."""
    params.require_pos_sum("const_K")
    cval = const_C(params, quad)
    m = (params.a + params.c) / 2.0
    factor = 2.0 ** (1.0 - m) / special.gamma(m)
    return KernelValue(factor * cval.value, factor * cval.est_error, cval.method, cval.meta)
