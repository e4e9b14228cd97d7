"""Equalities of laws checked numerically.

* the one-time density of X by the Hartman-Watson route and by the
  Y-difference route, and the constant relating them;
* the Laplace transform of Y_0 by constants and by quadrature;
* the GIG mixture that produces a Gamma law, and the product-of-Gammas
  form of the Z_mc initial law;
* the Hariya-Yor path identity on a fixed catalogue of functionals.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..config import DEFAULT_QUAD, BoundaryParams, QuadratureSpec
from ..errors import AccuracyError, DomainError, StatisticalQualityError
from .. import kernels
from ..kernels import _checked, _gauss_legendre, _u_nodes, spectral_weight
from ..reports import Check, VerificationReport
from ..specfun import _theta_contour, bessel_k_imag_matrix, log_bessel_k_real_vec
from .laws import MarkovLaw, choose_grid
from .paths import N_STEPS, MIN_ESS, brownian_paths, exp_functional, gig_draw, _check_steps
from .sampling import block_rng, blocks, check_seed, initial_table, sample_markov, _check_n
from .types import FddSpec, ProcessKind

THETA_STEP = 0.02
# 1% point of the Kolmogorov distribution
KS_CRIT = 1.63


# ---------------------------------------------------------------------------
# One-time density of X


def goal_constant(params: BoundaryParams) -> float:
    """2^{m-1} Gamma(m) with m = (a + c)/2: the ratio of the two density routes."""
    params.require_pos_sum()
    m = 0.5 * (params.a + params.c)
    return 2.0 ** (m - 1.0) * math.gamma(m)


def _f_theta(x: float, m: float, tau: float, step: float) -> float:
    # f(x) = 1/2 int xi^m e^{m x} e^{-xi cosh x} theta(xi, tau/4) dxi/xi, in r = log xi
    ch = math.cosh(x)
    r_hi = math.log(45.0 / ch) + 4.0
    r_lo = min(-40.0 / max(m, 0.05), r_hi - 10.0)
    r = np.arange(r_lo, r_hi + step, step)
    xi = np.exp(r)
    body = np.exp(m * (r + x) - xi * ch) * _theta_contour(xi, 0.25 * tau)
    return 0.5 * step * float(np.sum(body))


def f_theta(params: BoundaryParams, x: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """The Hartman-Watson integral f at one point (the unnormalised X density times e^{a x})."""
    params.require_pos_sum()
    if params.tau < 4 * kernels.THETA_T_FLOOR:
        raise AccuracyError(f"the theta route needs tau >= {4 * kernels.THETA_T_FLOOR}")
    m = 0.5 * (params.a + params.c)
    val, _ = _checked(lambda k: _f_theta(x, m, params.tau, THETA_STEP * 64.0 / k), 64, quad,
                      "theta-route f")
    return val


def _tilde_f(x: float, m: float, tau: float, n_u: int, u_max: float, n_panel: int,
             lo: float, hi: float) -> float:
    edges = np.arange(lo, hi + 1.0, 1.0)
    g, gw = np.polynomial.legendre.leggauss(n_panel)
    y0 = (0.5 * (edges[1:] - edges[:-1])[:, None] * g[None, :]
          + 0.5 * (edges[1:] + edges[:-1])[:, None]).ravel()
    wy = (0.5 * (edges[1:] - edges[:-1])[:, None] * gw[None, :]).ravel()
    u, w = _gauss_legendre(0.0, u_max, n_u)
    k0 = bessel_k_imag_matrix(u, y0)
    k1 = bessel_k_imag_matrix(u, y0 + x)
    p = (k0 * k1) @ (w * spectral_weight(u, tau))
    return float(np.sum(wy * np.exp(-2.0 * m * y0) * np.maximum(p, 0.0)))


def tilde_f(params: BoundaryParams, x: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int e^{-(a+c) y0} p_tau(y0, x + y0) dy0 (the Y-difference route)."""
    params.require_pos_sum()
    m = 0.5 * (params.a + params.c)
    tau = params.tau
    lo = math.floor(-10.0 - max(x, 0.0) - 2.0 * math.sqrt(tau))
    hi = math.ceil(40.0 / m + abs(x) + 4.0 * math.sqrt(tau))
    u_max, n_u = _u_nodes(tau, max(abs(lo), abs(hi)) + abs(x), quad)
    val, _ = _checked(lambda k: _tilde_f(x, m, tau, k, u_max, max(8, k * 12 // n_u), lo, hi),
                      n_u, quad, "Y-difference route f")
    return val


def x_density_1pt(params: BoundaryParams, x: float, route: str = "theta",
                  quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Density of X_tau at ``x``.

    ``theta``: e^{-a x} f(x) 2^{m-1} Gamma(m) / C; ``y_based``: e^{-a x} tilde_f(x) / C.
    """
    params.require_pos_sum()
    c_val = kernels.const_C_value(params.a, params.c, params.tau)
    if route == "theta":
        core = f_theta(params, x, quad) * goal_constant(params)
    elif route == "y_based":
        core = tilde_f(params, x, quad)
    else:
        raise DomainError(f"unknown route {route!r}")
    return max(math.exp(-params.a * x) * core / c_val, 0.0)


def goal_ratio(params: BoundaryParams, xs, quad: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """tilde_f / f at each x; constant (= :func:`goal_constant`) when the two routes agree."""
    return np.array([tilde_f(params, float(x), quad) / f_theta(params, float(x), quad)
                     for x in np.atleast_1d(xs)])


def k_functional_exact(params: BoundaryParams) -> float:
    """E[e^{-a beta_tau} (int_0^tau e^{-2 beta_t} dt)^{-(a+c)/2}] for variance-1/2 beta.

    Writing I^{-m} = Gamma(m)^{-1} int z^{m-1} e^{-z I} dz and z = e^{-2x}/4
    turns the expectation into 2^{1-(a+c)} C / Gamma(m).
    """
    params.require_pos_sum()
    m = 0.5 * (params.a + params.c)
    return 2.0 ** (1.0 - 2.0 * m) * kernels.const_C_value(params.a, params.c, params.tau) \
        / math.gamma(m)


# ---------------------------------------------------------------------------
# Laplace transform of Y_0


def laplace_y0(params: BoundaryParams, s: float, route: str = "ratio",
               n_points: int = 8193) -> float:
    """E[e^{-s Y_0}], by C(a, c+s, tau)/C(a, c, tau) or by quadrature of the Y_0 density."""
    params.require_pos_sum()
    a, c, tau = params.a, params.c, params.tau
    if not (s >= 0 and a + c + s > 0):
        raise DomainError("laplace_y0 needs s >= 0 and a + c + s > 0")
    if route == "ratio":
        return kernels.const_C_value(a, c + s, tau) / kernels.const_C_value(a, c, tau)
    if route != "quadrature":
        raise DomainError(f"unknown route {route!r}")
    law = MarkovLaw(ProcessKind("Y", params))
    coarse = choose_grid(law, [], 1024)
    grid = np.linspace(coarse[0], coarse[-1], n_points)
    dens = law.marginal(grid, 0.0, law.basis_for(grid, []))
    return float(np.trapezoid(np.exp(-s * grid) * dens, grid))


# ---------------------------------------------------------------------------
# Gamma / GIG identities


def gig_mixture_check(a: float, c: float, n: int = 100_000, seed: int = 0,
                      tol: float | None = None) -> Check:
    """x ~ Z_hd initial law, then GIG(-a, e^{-x})/2 should be Gamma((c-a)/2)."""
    from ..limits.ks import ks_distance
    kind = ProcessKind("Z_hd", BoundaryParams(a, c))
    seed = check_seed(seed)
    n = _check_n(n)
    table = initial_table(kind)
    y = np.empty(n)
    for b, sl in blocks(n):
        rng = block_rng(seed, b)
        x = table.quantile(rng.random(sl.stop - sl.start))
        y[sl] = 0.5 * gig_draw(rng, -a, np.exp(-x))
    shape = (c - a) / 2.0
    tol = KS_CRIT / math.sqrt(n) if tol is None else tol
    d = ks_distance(y, lambda v: special.gammainc(shape, np.maximum(v, 0.0)))
    return Check("gig_mixture_gamma", d, tol, d < tol, "ks",
                 detail=f"a={a}, c={c}, n={n}, target Gamma({shape})")


def zmc_two_way_check(c: float, n: int = 100_000, seed: int = 0,
                      tol: float | None = None) -> Check:
    """Inverse-CDF draws of the Z_mc initial law vs -log(2 sqrt(g g')), g, g' ~ Gamma(c/2)."""
    from ..limits.ks import ks_distance
    kind = ProcessKind("Z_mc", BoundaryParams(1.0, c))
    seed = check_seed(seed)
    n = _check_n(n)
    table = initial_table(kind)
    inv = np.empty(n)
    prod = np.empty(n)
    for b, sl in blocks(n):
        m = sl.stop - sl.start
        inv[sl] = table.quantile(block_rng(seed, b, 0).random(m))
        rng = block_rng(seed, b, 1)
        g = rng.gamma(c / 2.0, size=(m, 2))
        prod[sl] = -np.log(2.0 * np.sqrt(g[:, 0] * g[:, 1]))
    tol = KS_CRIT * math.sqrt(2.0 / n) if tol is None else tol
    d = ks_distance(inv, prod)
    return Check("zmc_initial_two_way", d, tol, d < tol, "ks", detail=f"c={c}, n={n}")


# ---------------------------------------------------------------------------
# Hariya-Yor identity

HY_CATALOG_VERSION = 1
HY_CATALOG = {
    "one": lambda end: np.ones_like(end),
    "exp_endpoint_0.5": lambda end: np.exp(-0.5 * end),
    "exp_endpoint_1": lambda end: np.exp(-end),
}


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))


def hy_identity_check(a: float, x: float, t: float, functional: str, n: int = 100_000,
                      seed: int = 0, n_steps: int = N_STEPS) -> VerificationReport:
    """Both sides of the GIG-started path identity for one catalogue functional F.

    Left: F(X_t + log(1 + z int_0^t e^{-2 X_s} ds)) with X_s = B_s + a s/2 and
    z = GIG(-a, e^{-x})/2. Right: e^{-a^2 t/4} E_x[F(B_t - x) e^{-int e^{-2B}/4}
    K_a(e^{-B_t}) / K_a(e^{-x})]. The two sides use independent streams.
    """
    if not a <= 0:
        raise DomainError("hy_identity_check needs a <= 0")
    if functional not in HY_CATALOG:
        raise DomainError(f"unknown functional {functional!r}; catalogue v{HY_CATALOG_VERSION} "
                          f"has {sorted(HY_CATALOG)}")
    if not t > 0:
        raise DomainError("t must be positive")
    seed = check_seed(seed)
    n = _check_n(n)
    n_steps = _check_steps(n_steps)
    F = HY_CATALOG[functional]
    dt = t / n_steps
    last = np.array([n_steps])
    alpha = math.exp(-x)
    log_k_x = float(log_bessel_k_real_vec(a, np.array([x]))[0])
    lhs, lhs_c = np.empty(n), np.empty(n)
    rhs, rhs_c = np.empty(n), np.empty(n)
    for b, sl in blocks(n):
        m = sl.stop - sl.start
        rng = block_rng(seed, b, 0)
        z = 0.5 * gig_draw(rng, -a, alpha, size=m)
        paths = brownian_paths(rng, m, n_steps, t, drift=a / 2.0)
        fi, co = exp_functional(paths, dt, last)
        lhs[sl] = F(paths[:, -1] + np.log1p(z * fi[:, 0]))
        lhs_c[sl] = F(paths[:, -1] + np.log1p(z * co[:, 0]))
        rng = block_rng(seed, b, 1)
        paths = brownian_paths(rng, m, n_steps, t, start=x)
        fi, co = exp_functional(paths, dt, last)
        end = paths[:, -1]
        base = -a * a * t / 4.0 + log_bessel_k_real_vec(a, end) - log_k_x
        fe = F(end - x)
        rhs[sl] = fe * np.exp(base - 0.25 * fi[:, 0])
        rhs_c[sl] = fe * np.exp(base - 0.25 * co[:, 0])
    w = np.exp(np.log(np.maximum(rhs, 1e-300)) - np.log(np.maximum(rhs.max(), 1e-300)))
    ess = float(w.sum() ** 2 / np.sum(w * w))
    if ess < MIN_ESS:
        raise StatisticalQualityError(f"right side effective sample size {ess:.3g}", ess=ess)
    lm, ls = _mean_se(lhs)
    rm, rs = _mean_se(rhs)
    comb = math.hypot(ls, rs)
    z_stat = abs(lm - rm) / comb if comb > 0 else (0.0 if lm == rm else math.inf)
    cfg = {"a": a, "x": x, "t": t, "functional": functional,
           "catalog_version": HY_CATALOG_VERSION, "n": n, "n_steps": n_steps}
    rep = VerificationReport("hy_identity", config=cfg, seed=seed)
    rep.add(Check("sides_agree", z_stat, 3.0, z_stat < 3.0, "mc",
                  detail=f"left {lm:.6g} +- {ls:.2g}, right {rm:.6g} +- {rs:.2g}"))
    for name, fine, coarse, se in (("left_step_doubling", lhs, lhs_c, ls),
                                   ("right_step_doubling", rhs, rhs_c, rs)):
        shift = abs(float(fine.mean() - coarse.mean()))
        rep.add(Check(name, shift / se if se > 0 else 0.0, 1.0,
                      shift < se or shift == 0.0, "mc", detail="bias in standard errors"))
    return rep


def hy_vs_markov_check(params: BoundaryParams, t: float = 1.0, n: int = 100_000,
                       seed: int = 0, n_steps: int = N_STEPS, tol: float = 0.02) -> list:
    """The path formula at time t against Z_t - Z_0 sampled from the Markov law.

    For a = 0 the Markov side is Z_mc (the maximal-current law, which does
    not see a); otherwise Z_hd.
    """
    from ..limits.ks import ks_distance
    from .paths import hariya_yor_sample
    a, c = params.a, params.c
    kind = ProcessKind("Z_mc", BoundaryParams(1.0, c)) if a == 0 else ProcessKind("Z_hd", params)
    spec = FddSpec((t,), includes_t0=False)
    hy = hariya_yor_sample(params, spec, n_steps, n, seed)
    z = sample_markov(kind, FddSpec((t,), includes_t0=True), n, seed + 1)
    diff = z.values[:, 1] - z.values[:, 0]
    d = ks_distance(hy.values[:, 0], diff)
    mean_f = float(hy.values[:, 0].mean())
    mean_c = float(hy.aux["coarse_values"][:, 0].mean())
    se = float(hy.values[:, 0].std(ddof=1) / math.sqrt(n))
    return [
        Check(f"path_formula_vs_{kind.tag}", d, tol, d < tol, "ks",
              detail=f"a={a}, c={c}, t={t}, n={n}"),
        Check("path_formula_step_doubling", abs(mean_f - mean_c) / se, 1.0,
              abs(mean_f - mean_c) < se, "mc", detail="shift of the mean in standard errors"),
    ]
