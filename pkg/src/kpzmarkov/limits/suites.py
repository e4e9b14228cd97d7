"""Desk-scale checks of the scaling limits of the stationary-measure processes.

Density suites compare exact scaled densities with their limits on a
fixed grid: the initial density and the two-time joint density, as sup
norms. Joint densities avoid the 0/0 ratios that transition kernels have
where the limit is supported on a half line. Each such statistic gets a
trend verdict (nonincreasing along the ladder) and an endpoint verdict.

Monte Carlo suites test moments or KS distances at the 3-sigma level and
carry a step- or grid-doubling verdict (shift below one standard error).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from ..config import BoundaryParams
from ..errors import DomainError, KPZError
from .. import kernels
from ..kernels import g_closed
from ..processes.laws import MarkovLaw, choose_grid
from ..processes.paths import N_STEPS, x_weighted_ensemble
from ..processes.sampling import sample_markov
from ..processes.types import FddSpec, ProcessKind
from ..reports import Check, VerificationReport, endpoint_check, error_check, trend_check
from .ks import ks_distance

KS_CRIT = 1.63
GRID_POINTS = 201
JOINT_POINTS = 61
DENSITY_CUT = 1e-8

SUITE_NAMES = ("y2x", "kpz_fixed", "halfline_mc", "halfline_hd", "halfline_ld", "exp_limit",
               "asymp_normal", "bessel3", "rho_hd", "edwards_wilkinson", "scaling_fixed_point")

# scale ladders are listed in the direction of the limit
_DEFAULTS = {
    "y2x": dict(scales=(0.5, 1.0, 2.0), a=None, c=None, tol={"ks": 0.02}),
    "kpz_fixed": dict(scales=(256.0, 1024.0, 4096.0), a=1.0, c=1.0, tol={"density": 0.05}),
    "halfline_mc": dict(scales=(4.0, 16.0, 64.0), a=1.0, c=2.0,
                        tol={"density": 0.05, "laplace": 1e-6}),
    "halfline_hd": dict(scales=(4.0, 16.0, 64.0), a=-0.5, c=1.5,
                        tol={"density": 0.05, "laplace": 1e-6, "a0": 1e-10}),
    "halfline_ld": dict(scales=(4.0, 16.0, 64.0), a=2.0, c=-0.5, tol={"density": 0.05}),
    "exp_limit": dict(scales=(0.1, 0.02, 0.004), a=None, c=1.0, tol={"laplace": 0.02}),
    "asymp_normal": dict(scales=(400.0, 1600.0, 6400.0), a=2.0, c=-0.5, tol={"laplace": 0.05}),
    "bessel3": dict(scales=(64.0, 256.0, 1024.0), a=None, c=1.0,
                    tol={"density": 0.05, "conservation": 1e-6}),
    "rho_hd": dict(scales=(64.0, 256.0, 1024.0), a=-0.5, c=1.5, tol={"density": 0.05}),
    "edwards_wilkinson": dict(scales=(0.16, 0.04, 0.01), a=1.0, c=2.0, tol={"drift": 0.02}),
    "scaling_fixed_point": dict(scales=(4.0, 9.0, 16.0), a=1.0, c=1.0, tol={"identity": 1e-12}),
}

Y2X_PAIRS = ((1.0, 1.0), (1.5, 0.5), (-0.5, 1.5))


@dataclass(frozen=True)
class LimitSuite:
    """One verification suite.

    ``scale_sequence`` holds at least three scales ordered toward the
    limit (tau or T growing, or tau / epsilon shrinking). ``a`` and ``c``
    are the limit parameters; ``tolerances`` override the defaults by key.
    """

    name: str
    scale_sequence: tuple = ()
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    a: float | None = None
    c: float | None = None
    n: int = 100_000
    n_steps: int = N_STEPS

    def __post_init__(self):
        if self.name not in SUITE_NAMES:
            raise DomainError(f"unknown suite {self.name!r}; expected one of {SUITE_NAMES}")
        d = _DEFAULTS[self.name]
        if not self.scale_sequence:
            object.__setattr__(self, "scale_sequence", d["scales"])
        seq = tuple(float(s) for s in self.scale_sequence)
        object.__setattr__(self, "scale_sequence", seq)
        if len(seq) < 3:
            raise DomainError("a suite needs at least three scales")
        if not all(s > 0 and math.isfinite(s) for s in seq):
            raise DomainError("scales must be positive and finite")
        diffs = np.diff(seq)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise DomainError("scales must be strictly monotone")
        if np.all(diffs > 0) != (d["scales"][1] > d["scales"][0]):
            raise DomainError(f"scales for {self.name} must run "
                              f"{'up' if d['scales'][1] > d['scales'][0] else 'down'} "
                              "toward the limit")
        for key in ("a", "c"):
            if getattr(self, key) is None:
                object.__setattr__(self, key, d[key])
        tol = dict(d["tol"])
        unknown = set(self.tolerances) - set(tol)
        if unknown:
            raise DomainError(f"unknown tolerance keys {sorted(unknown)} for {self.name}")
        tol.update({k: float(v) for k, v in self.tolerances.items()})
        object.__setattr__(self, "tolerances", tol)
        if not (isinstance(self.n, int) and self.n >= 2):
            raise DomainError("n must be an integer >= 2")
        self._check_domain()

    def _check_domain(self):
        a, c, name = self.a, self.c, self.name
        ok = {
            "y2x": lambda: (a is None and c is None) or (a is not None and c is not None
                                                         and a + c > 0),
            "kpz_fixed": lambda: a + c > 0,
            "halfline_mc": lambda: a > 0 and c > 0,
            "halfline_hd": lambda: a <= 0 < a + c,
            "halfline_ld": lambda: c <= 0 < a + c,
            "exp_limit": lambda: c != 0,
            "asymp_normal": lambda: c < 0 < a + c,
            "bessel3": lambda: c > 0,
            "rho_hd": lambda: a < 0 and c > -a,
            "edwards_wilkinson": lambda: a + c > 0,
            "scaling_fixed_point": lambda: a + c > 0,
        }.get(name, lambda: True)
        if not ok():
            raise DomainError(f"(a, c) = ({a}, {c}) is outside the domain of {name}")

    def to_dict(self) -> dict:
        return {"name": self.name, "scale_sequence": list(self.scale_sequence),
                "tolerances": self.tolerances, "seed": self.seed, "a": self.a, "c": self.c,
                "n": self.n, "n_steps": self.n_steps}


# ---------------------------------------------------------------------------
# helpers


def _guard(report: VerificationReport, name: str, fn):
    """Run ``fn`` (returning checks); an upstream error becomes a failed check."""
    try:
        out = fn()
    except (KPZError, ArithmeticError, ValueError, FloatingPointError) as exc:
        report.add(error_check(name, exc))
        return None
    report.extend(out if isinstance(out, list) else [out])
    return out


def _limit_grids(limit: MarkovLaw, t: float):
    """1-D grid where the limit initial density exceeds DENSITY_CUT of its max, and a coarser one."""
    g = choose_grid(limit, [t], GRID_POINTS)
    scan = np.linspace(0.0 if limit.halfline else g[0], g[-1], 20_001)
    d = limit.marginal(scan, 0.0)
    keep = np.flatnonzero(d > DENSITY_CUT * d.max())
    lo, hi = scan[keep[0]], scan[keep[-1]]
    return np.linspace(lo, hi, GRID_POINTS), np.linspace(lo, hi, JOINT_POINTS)


def _density_suite(rep: VerificationReport, limit: MarkovLaw, make_law, scales, t: float,
                   tol: float, spatial):
    """Sup-norm deviations of the initial and the (0, t) joint densities.

    ``make_law(s)`` is the pre-limit law at scale s; ``spatial(s)`` its
    space factor r (time factor r^2): the pre-limit is compared through
    r f(r x) and r^2 f(r x0, r x1) at time r^2 t.
    """
    xs, x2 = _limit_grids(limit, t)
    lim0 = limit.marginal(xs, 0.0)
    limj = limit.joint2(x2, x2, t)
    dev0, devj = [], []
    for s in scales:
        law = make_law(s)
        r = spatial(s)
        d0 = r * law.marginal(r * xs, 0.0, law.basis_for(r * xs, []))
        dj = r * r * law.joint2(r * x2, r * x2, r * r * t)
        dev0.append(float(np.max(np.abs(d0 - lim0))))
        devj.append(float(np.max(np.abs(dj - limj))))
    out = []
    for label, dev in (("initial_density", dev0), (f"joint_density_t{t:g}", devj)):
        detail = f"sup over {xs.size if label.startswith('initial') else x2.size} grid points " \
                 f"in [{xs[0]:.4g}, {xs[-1]:.4g}]"
        out.append(trend_check(f"{label}_trend", scales, dev, detail=detail))
        out.append(endpoint_check(f"{label}_endpoint", scales, dev, tol, detail=detail))
    return out


def _zscore_check(name: str, est: float, se: float, target: float, detail: str = "") -> Check:
    z = abs(est - target) / se if se > 0 else (0.0 if est == target else math.inf)
    return Check(name, z, 3.0, z < 3.0, "mc",
                 detail=f"estimate {est:.6g} +- {se:.3g}, target {target:.6g}" +
                 (f"; {detail}" if detail else ""))


def _doubling(name: str, fine: float, coarse: float, se: float) -> Check:
    shift = abs(fine - coarse)
    stat = shift / se if se > 0 else 0.0
    return Check(name, stat, 1.0, stat < 1.0, "mc",
                 detail=f"fine {fine:.6g}, coarse {coarse:.6g}, in standard errors")


# ---------------------------------------------------------------------------
# suites


def _y2x(s: LimitSuite, rep: VerificationReport):
    tol = s.tolerances["ks"]
    # default pairs rotate along the ladder; an explicit (a, c) is used at every scale
    pairs = Y2X_PAIRS if s.a is None else ((s.a, s.c),)
    for i, (tau, (a, c)) in enumerate(zip(s.scale_sequence, pairs * len(s.scale_sequence))):
        params = BoundaryParams(a, c, tau)
        times = (tau / 2.0, tau)

        def run(params=params, times=times, i=i):
            y = sample_markov(ProcessKind("Y", params), FddSpec(times, True), s.n, s.seed + 2 * i)
            x = x_weighted_ensemble(params, s.n_steps, s.n, s.seed + 2 * i + 1, times=times)
            out = []
            for j, t in enumerate(times):
                d = ks_distance(y.values[:, j + 1] - y.values[:, 0], (x.values[:, j], x.weights))
                out.append(Check(f"ks_a{a:g}_c{c:g}_tau{tau:g}_t{t:g}", d, tol, d < tol, "ks",
                                 detail=f"Y differences vs weighted X, ESS {x.ess:.0f}"))
                fm, se = x.mean(t)
                cm, _ = x.mean(t, x.aux["coarse_weights"])
                out.append(_doubling(f"x_step_doubling_a{a:g}_c{c:g}_tau{tau:g}_t{t:g}",
                                     fm, cm, se))
            return out
        _guard(rep, f"y2x_a{a:g}_c{c:g}_tau{tau:g}", run)


def _kpz_fixed(s: LimitSuite, rep: VerificationReport):
    a, c = s.a, s.c
    limit = MarkovLaw(ProcessKind("eta", BoundaryParams(a, c, 1.0)))

    def make(tau):
        r = math.sqrt(tau)
        return MarkovLaw(ProcessKind("Y", BoundaryParams(a / r, c / r, tau)))
    _guard(rep, "kpz_fixed_density",
           lambda: _density_suite(rep, limit, make, s.scale_sequence, 0.5,
                                  s.tolerances["density"], math.sqrt))


def _laplace_table_check(name: str, kind: ProcessKind, exact, tol: float):
    law = MarkovLaw(kind)
    g = choose_grid(law, [], 1024)
    grid = np.linspace(g[0], g[-1], 16385)
    dens = law.marginal(grid, 0.0)
    out = []
    for sv in (0.5, 1.0, 2.0):
        quad = float(np.trapezoid(np.exp(-sv * grid) * dens, grid))
        ref = exact(sv)
        err = abs(quad / ref - 1.0)
        out.append(Check(f"{name}_s{sv:g}", err, tol, err < tol, "two_route",
                         detail=f"quadrature {quad:.10g}, Gamma form {ref:.10g}"))
    return out


def _halfline(s: LimitSuite, rep: VerificationReport, tag: str):
    a, c = s.a, s.c
    limit = MarkovLaw(ProcessKind(tag, BoundaryParams(a, c)))
    _guard(rep, f"{s.name}_density",
           lambda: _density_suite(rep, limit,
                                  lambda tau: MarkovLaw(ProcessKind("Y", BoundaryParams(a, c, tau))),
                                  s.scale_sequence, 1.0, s.tolerances["density"], lambda _: 1.0))
    # initial law as -log(2 sqrt(g g')) with Gamma shapes p, q
    p, q = ((c / 2.0, c / 2.0) if tag == "Z_mc" else ((a + c) / 2.0, (c - a) / 2.0))

    def exact(sv):
        return 2.0 ** sv * math.exp(special.gammaln(p + sv / 2) + special.gammaln(q + sv / 2)
                                    - special.gammaln(p) - special.gammaln(q))
    _guard(rep, "initial_gamma_product_laplace",
           lambda: _laplace_table_check("initial_gamma_product_laplace", limit.kind, exact,
                                        s.tolerances["laplace"]))
    if tag == "Z_hd":
        _guard(rep, "a0_matches_maximal_current", lambda: _a0_check(c, s.tolerances["a0"]))


def _a0_check(c: float, tol: float):
    hd = MarkovLaw(ProcessKind("Z_hd", BoundaryParams(0.0, c)))
    mc = MarkovLaw(ProcessKind("Z_mc", BoundaryParams(1.0, c)))
    xs = np.linspace(-3.0, 8.0, 45)
    j_hd = hd.joint2(xs, xs, 1.0)
    j_mc = mc.joint2(xs, xs, 1.0)
    i_hd, i_mc = hd.marginal(xs, 0.0), mc.marginal(xs, 0.0)
    err = max(float(np.max(np.abs(j_hd - j_mc))), float(np.max(np.abs(i_hd - i_mc))))
    return Check("a0_matches_maximal_current", err, tol, err < tol, "identity",
                 detail="max abs difference of initial and (0, 1) joint densities")


def _difference_density(law: MarkovLaw, t: float, zs, h: float = 0.05):
    g = choose_grid(law, [t], 512)
    x = np.arange(g[0], g[-1] + h, h)
    joint = law.joint2(x, x, t)
    ks = np.round(np.asarray(zs) / h).astype(int)
    return np.array([h * np.trace(joint, offset=k) for k in ks])


def _halfline_ld(s: LimitSuite, rep: VerificationReport):
    a, c, t = s.a, s.c, 1.0
    h = 0.05
    zs = np.arange(-4.0, 4.0 + h / 2, h) + round(c * t / 2.0 / h) * h
    target = np.exp(-(zs - c * t / 2.0) ** 2 / t) / math.sqrt(math.pi * t)

    def dens():
        dev = []
        for tau in s.scale_sequence:
            law = MarkovLaw(ProcessKind("Y", BoundaryParams(a, c, tau)))
            dev.append(float(np.max(np.abs(_difference_density(law, t, zs, h) - target))))
        detail = f"density of Y_1 - Y_0 vs N(c/2, 1/2), {zs.size} points"
        return [trend_check("difference_density_trend", s.scale_sequence, dev, detail=detail),
                endpoint_check("difference_density_endpoint", s.scale_sequence, dev,
                               s.tolerances["density"], detail=detail)]
    _guard(rep, "difference_density", dens)

    def mc():
        tau = s.scale_sequence[-1]
        kind = ProcessKind("Y", BoundaryParams(a, c, tau))
        spec = FddSpec((t,), True)
        e = sample_markov(kind, spec, s.n, s.seed)
        e2 = sample_markov(kind, spec, s.n, s.seed, grid_points=4096)
        d = e.values[:, 1] - e.values[:, 0]
        d2 = e2.values[:, 1] - e2.values[:, 0]
        se = float(d.std(ddof=1) / math.sqrt(d.size))
        ks = ks_distance(d, lambda z: 0.5 * special.erfc(-(z - c * t / 2.0) / math.sqrt(t)))
        crit = KS_CRIT / math.sqrt(d.size)
        return [
            _zscore_check("mc_mean_drift", float(d.mean()), se, c * t / 2.0, f"tau={tau:g}"),
            Check("mc_ks_normal", ks, crit, ks < crit, "ks", detail=f"tau={tau:g}, n={d.size}"),
            _doubling("mc_grid_doubling", float(d.mean()), float(d2.mean()), se),
        ]
    _guard(rep, "difference_mc", mc)


def _exp_limit(s: LimitSuite, rep: VerificationReport):
    c, sv, tau = s.c, 1.0, 1.0

    def run():
        dev = []
        for eps in s.scale_sequence:
            a = eps - c
            lap = kernels.const_C_value(a, c + sv * eps, tau) / kernels.const_C_value(a, c, tau)
            dev.append(abs(lap - 1.0 / (1.0 + sv)))
        detail = f"|E exp(-s eps Y_0) - 1/(1+s)| at s={sv:g}, a+c=eps, c={c:g}"
        return [trend_check("laplace_trend", s.scale_sequence, dev, detail=detail),
                endpoint_check("laplace_endpoint", s.scale_sequence, dev,
                               s.tolerances["laplace"], detail=detail)]
    _guard(rep, "exp_limit", run)


def asymp_normal_laplace(a: float, c: float, tau: float, sv: float) -> float:
    """E exp(-s (Y_0 + tau c/2)/sqrt(tau)) from the constants."""
    r = math.sqrt(tau)
    return math.exp(-sv * c * r / 2.0) * (kernels.const_C_value(a, c + sv / r, tau)
                                          / kernels.const_C_value(a, c, tau))


def _asymp_normal(s: LimitSuite, rep: VerificationReport):
    a, c, sv = s.a, s.c, -1.0

    def run():
        dev = [abs(asymp_normal_laplace(a, c, tau, sv) - math.exp(sv * sv / 4.0))
               for tau in s.scale_sequence]
        detail = f"|L_tau(s) - exp(s^2/4)| at s={sv:g}"
        return [trend_check("laplace_trend", s.scale_sequence, dev, detail=detail),
                endpoint_check("laplace_endpoint", s.scale_sequence, dev,
                               s.tolerances["laplace"], detail=detail)]
    _guard(rep, "asymp_normal", run)

    def growth():
        taus = (10.0, 20.0, 40.0)
        vals = [tau ** 1.5 * kernels.const_C_value(a, c, tau) for tau in taus]
        worst = min(b / a_ for a_, b in zip(vals[:-1], vals[1:]))
        return Check("constant_divergence", worst, 1.0, worst > 1.0, "identity",
                     detail=f"tau^1.5 C at tau={taus}: {[f'{v:.6g}' for v in vals]}; "
                            "statistic is the smallest step ratio")
    _guard(rep, "constant_divergence", growth)


def _bessel3(s: LimitSuite, rep: VerificationReport):
    c = s.c
    limit = MarkovLaw(ProcessKind("rho_mc", BoundaryParams(1.0, c)))

    def make(T):
        return MarkovLaw(ProcessKind("Z_mc", BoundaryParams(1.0, c / math.sqrt(T))))
    _guard(rep, "bessel3_density",
           lambda: _density_suite(rep, limit, make, s.scale_sequence, 1.0,
                                  s.tolerances["density"], math.sqrt))

    def conservation():
        out = []
        y = np.linspace(0.0, 40.0, 400_001)
        for x, t in ((0.3, 0.5), (1.0, 1.0), (2.0, 3.0)):
            mass = float(np.trapezoid(y / x * g_closed(x, y, t), y))
            err = abs(mass - 1.0)
            out.append(Check(f"transition_mass_x{x:g}_t{t:g}", err, s.tolerances["conservation"],
                             err < s.tolerances["conservation"], "identity",
                             detail=f"int (y/x) g_t(x, y) dy = {mass:.12g}"))
        return out
    _guard(rep, "bessel3_conservation", conservation)


def _rho_hd(s: LimitSuite, rep: VerificationReport):
    a, c = s.a, s.c
    limit = MarkovLaw(ProcessKind("rho_hd", BoundaryParams(a, c)))

    def make(T):
        r = math.sqrt(T)
        return MarkovLaw(ProcessKind("Z_hd", BoundaryParams(a / r, c / r)))
    _guard(rep, "rho_hd_density",
           lambda: _density_suite(rep, limit, make, s.scale_sequence, 1.0,
                                  s.tolerances["density"], math.sqrt))


def ew_exact_mean(a: float, c: float, tau: float) -> float:
    """E[(Y_tau - Y_0)/sqrt(tau)] for parameters (a, c)/sqrt(tau).

    Reversing time swaps a and c, so E Y_tau = -d_a log C and
    E Y_0 = -d_c log C; derivatives by central differences.
    """
    r = math.sqrt(tau)
    A, C = a / r, c / r
    h = 1e-4 * max(1.0, A, C)

    def dlog(da, dc):
        return (math.log(kernels.const_C_value(A + da, C + dc, tau))
                - math.log(kernels.const_C_value(A - da, C - dc, tau))) / (2.0 * h)
    return (dlog(0.0, h) - dlog(h, 0.0)) / r


def _edwards_wilkinson(s: LimitSuite, rep: VerificationReport):
    a, c = s.a, s.c
    target = c / 2.0 - (a + c) / 4.0

    def exact():
        dev = [abs(ew_exact_mean(a, c, tau) - target) for tau in s.scale_sequence]
        detail = f"|E (Y_tau - Y_0)/sqrt(tau) - {target:g}| from the constants"
        return [trend_check("exact_drift_trend", s.scale_sequence, dev, detail=detail),
                endpoint_check("exact_drift_endpoint", s.scale_sequence, dev,
                               s.tolerances["drift"], detail=detail)]
    _guard(rep, "exact_drift", exact)

    for i, tau in enumerate(s.scale_sequence):
        def mc(tau=tau, i=i):
            r = math.sqrt(tau)
            e = x_weighted_ensemble(BoundaryParams(a / r, c / r, tau), s.n_steps, s.n,
                                    s.seed + i, times=(tau,))
            m, se = e.mean(tau)
            mc_, _ = e.mean(tau, e.aux["coarse_weights"])
            out = [_zscore_check(f"mc_vs_exact_tau{tau:g}", m / r, se / r,
                                 ew_exact_mean(a, c, tau), f"ESS {e.ess:.0f}"),
                   _doubling(f"mc_step_doubling_tau{tau:g}", m, mc_, se)]
            if tau == s.scale_sequence[-1]:
                out.append(_zscore_check(f"mc_drift_tau{tau:g}", m / r, se / r, target,
                                         "limit drift c/2 - (a+c)/4"))
            return out
        _guard(rep, f"mc_tau{tau:g}", mc)


def _scaling_fixed_point(s: LimitSuite, rep: VerificationReport):
    a, c = s.a, s.c
    t, x, y = 0.5, 1.0, 2.0
    tol = s.tolerances["identity"]
    base = MarkovLaw(ProcessKind("eta", BoundaryParams(a, c, 1.0)))

    def run(tau):
        r = math.sqrt(tau)
        law = MarkovLaw(ProcessKind("eta", BoundaryParams(a / r, c / r, tau)))
        pairs = (
            ("kernel", r * float(g_closed(x * r, y * r, tau * t)), float(g_closed(x, y, t))),
            ("initial", r * law.marginal([x * r], 0.0)[0], base.marginal([x], 0.0)[0]),
            ("joint", tau * law.joint2([x * r], [y * r], tau * t)[0, 0],
             base.joint2([x], [y], t)[0, 0]),
        )
        out = []
        for what, lhs, rhs in pairs:
            err = abs(lhs / rhs - 1.0)
            out.append(Check(f"{what}_tau{tau:g}", err, tol, err < tol, "identity",
                             detail=f"scaled {lhs:.17g} vs horizon-1 {rhs:.17g} at "
                                    f"(t, x, y) = ({t}, {x}, {y})"))
        return out
    for tau in s.scale_sequence:
        _guard(rep, f"scaling_tau{tau:g}", lambda tau=tau: run(tau))


_RUNNERS = {
    "y2x": _y2x,
    "kpz_fixed": _kpz_fixed,
    "halfline_mc": lambda s, r: _halfline(s, r, "Z_mc"),
    "halfline_hd": lambda s, r: _halfline(s, r, "Z_hd"),
    "halfline_ld": _halfline_ld,
    "exp_limit": _exp_limit,
    "asymp_normal": _asymp_normal,
    "bessel3": _bessel3,
    "rho_hd": _rho_hd,
    "edwards_wilkinson": _edwards_wilkinson,
    "scaling_fixed_point": _scaling_fixed_point,
}


def run_suite(suite: LimitSuite | str) -> VerificationReport:
    """Run one suite; checks are deterministic functions of (suite, seed)."""
    if isinstance(suite, str):
        suite = LimitSuite(suite)
    rep = VerificationReport(suite.name, config=suite.to_dict(), seed=suite.seed)
    _RUNNERS[suite.name](suite, rep)
    return rep


def default_suite(name: str, **overrides) -> LimitSuite:
    return replace(LimitSuite(name), **overrides)
