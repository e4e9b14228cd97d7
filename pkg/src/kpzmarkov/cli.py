"""``kpz`` command line: evaluate, tabulate, sample and verify.

Exit status is 0 on success, 1 when a check or accuracy test fails and 2
on usage, domain or I/O errors. Every output embeds the resolved config.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import io, kernels
from .config import BoundaryParams, QuadratureSpec
from .errors import DomainError, KPZError
from .specfun import hartman_watson_theta

COMMANDS = ("eval", "table", "sample", "verify")
EVAL_NAMES = ("kernel-p", "kernel-g", "const-C", "const-K", "const-frakC", "doob-H",
              "doob-h-eta", "theta", "k-functional", "k-functional-mc", "x-density")
DEFAULT_PARAMS = {"a": 1.0, "c": 1.0, "tau": 1.0}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Fully resolved run; echoed into every output."""

    command: str
    params: BoundaryParams
    quad: QuadratureSpec
    seed: int
    output: str = "json"
    out_path: str | None = None
    what: str | None = None
    process: str | None = None
    suite: str | None = None
    point: dict = field(default_factory=dict)
    times: tuple = ()
    n: int | None = None
    steps: int | None = None

    def to_dict(self) -> dict:
        d = {"command": self.command, "params": self.params.to_dict(),
             "quad": self.quad.to_dict(), "seed": self.seed, "output": self.output}
        for key in ("what", "process", "suite"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.point:
            d["point"] = self.point
        if self.times:
            d["times"] = list(self.times)
        if self.n is not None:
            d["n"] = self.n
        if self.steps is not None:
            d["steps"] = self.steps
        return d


def _times(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpz", description="Stationary measures of open KPZ: "
                                "kernels, constants, density tables, samplers and limit checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--what", choices=EVAL_NAMES, help="quantity for eval")
    p.add_argument("--process", help="process family for table/sample "
                   "(Y, X, Z_mc, Z_hd, eta, rho_mc, rho_hd, hariya_yor)")
    p.add_argument("--suite", help="limit suite for verify, or 'all'")
    p.add_argument("--a", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--times", type=_times)
    p.add_argument("--n", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--quad-tol", type=float, dest="quad_tol")
    p.add_argument("--format", choices=("csv", "json"), default="json", dest="fmt")
    p.add_argument("--out")
    return p


def _default_seed() -> int:
    env = os.environ.get("KPZ_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"KPZ_SEED must be an integer, got {env!r}") from exc


def resolve(ns: argparse.Namespace) -> RunConfig:
    vals = {k: (getattr(ns, k) if getattr(ns, k) is not None else v)
            for k, v in DEFAULT_PARAMS.items()}
    params = BoundaryParams(**vals)
    quad = QuadratureSpec(rel_tol=ns.quad_tol) if ns.quad_tol is not None else QuadratureSpec()
    seed = ns.seed if ns.seed is not None else _default_seed()
    point = {k: getattr(ns, k) for k in ("t", "x", "y") if getattr(ns, k) is not None}
    cfg = RunConfig(ns.command, params, quad, seed, ns.fmt, ns.out, point=point,
                    times=ns.times or (), n=ns.n, steps=ns.steps)
    if ns.command == "eval":
        if ns.what is None:
            raise UsageError("eval needs --what")
        cfg.what = ns.what
    elif ns.command in ("table", "sample"):
        if ns.process is None:
            raise UsageError(f"{ns.command} needs --process")
        cfg.process = ns.process
        if ns.command == "sample" and not cfg.times:
            raise UsageError("sample needs --times")
    else:
        if ns.suite is None:
            raise UsageError("verify needs --suite")
        cfg.suite = ns.suite
    return cfg


def _need(cfg: RunConfig, *keys) -> list:
    missing = [k for k in keys if k not in cfg.point]
    if missing:
        raise UsageError(f"{cfg.what} needs " + ", ".join("--" + k for k in missing))
    return [cfg.point[k] for k in keys]


# ---------------------------------------------------------------------------
# commands


def _eval(cfg: RunConfig):
    p, q, what = cfg.params, cfg.quad, cfg.what
    if what == "kernel-p":
        x, y, t = _need(cfg, "x", "y", "t")
        res = kernels.yakubovich_p(x, y, t, q)
    elif what == "kernel-g":
        x, y, t = _need(cfg, "x", "y", "t")
        res = kernels.absorbing_g(x, y, t, quad=q)
    elif what == "const-C":
        res = kernels.const_C(p, q)
    elif what == "const-K":
        res = kernels.const_K(p, q)
    elif what == "const-frakC":
        res = kernels.const_frakC(p.a, p.c)
    elif what == "doob-H":
        x, t = _need(cfg, "x", "t")
        res = kernels.doob_H(x, t, p, q)
    elif what == "doob-h-eta":
        x, t = _need(cfg, "x", "t")
        res = kernels.doob_h_eta(x, t, p.a, q, horizon=p.tau)
    elif what == "theta":
        x, t = _need(cfg, "x", "t")
        if not x > 0:
            raise DomainError("theta needs --x > 0 (the xi argument)")
        res = kernels.KernelValue(float(hartman_watson_theta(x, t, q)), 0.0, "contour")
    elif what == "k-functional":
        from .processes.identities import k_functional_exact
        res = kernels.KernelValue(k_functional_exact(p), 0.0, "laplace_subordination")
    elif what == "k-functional-mc":
        from .processes.paths import N_STEPS, k_functional_mc
        est = k_functional_mc(p, cfg.n or 100_000, cfg.seed, cfg.steps or N_STEPS)
        return {"config": cfg.to_dict(), "result": est.to_dict()}, \
            [(what, est.value, est.stderr, "monte_carlo")]
    else:
        from .processes.identities import x_density_1pt
        (x,) = _need(cfg, "x")
        res = kernels.KernelValue(x_density_1pt(p, x, "theta", q), 0.0, "theta")
    result = {"value": float(res.value), "est_error": float(res.est_error), "method": res.method}
    return {"config": cfg.to_dict(), "result": result}, \
        [(what, float(res.value), float(res.est_error), res.method)]


def _kind(cfg: RunConfig):
    from .processes.types import ProcessKind
    return ProcessKind(cfg.process, cfg.params)


def _table(cfg: RunConfig):
    from .processes.sampling import TABLE_POINTS, initial_table, marginal_table
    kind = _kind(cfg)
    t = cfg.point.get("t", 0.0)
    n_points = cfg.n or TABLE_POINTS
    table = initial_table(kind, n_points) if t == 0 else marginal_table(kind, t, n_points)
    return table


def _sample(cfg: RunConfig):
    from .processes.paths import N_STEPS
    from .processes.sampling import sample_markov
    from .processes.types import FddSpec
    times = tuple(cfg.times)
    t0 = bool(times) and times[0] == 0.0
    spec = FddSpec(times[1:] if t0 else times, includes_t0=t0)
    return sample_markov(_kind(cfg), spec, cfg.n or 1000, cfg.seed,
                         n_steps=cfg.steps or N_STEPS)


def _verify(cfg: RunConfig, ns: argparse.Namespace):
    from .limits import SUITE_NAMES, LimitSuite, run_suite
    names = SUITE_NAMES if cfg.suite == "all" else (cfg.suite,)
    reports = []
    for name in names:
        kw = {"seed": cfg.seed}
        if ns.a is not None:
            kw["a"] = ns.a
        if ns.c is not None:
            kw["c"] = ns.c
        if cfg.n is not None:
            kw["n"] = cfg.n
        if cfg.steps is not None:
            kw["n_steps"] = cfg.steps
        reports.append(run_suite(LimitSuite(name, **kw)))
    return reports


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out_path:
        io.write_atomic(cfg.out_path, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        cfg = resolve(ns)
        status = 0
        if cfg.command == "eval":
            obj, rows = _eval(cfg)
            text = (io.dumps_json(obj) if cfg.output == "json" else
                    io.csv_text(["what", "value", "est_error", "method"], rows, cfg.to_dict()))
        elif cfg.command == "table":
            table = _table(cfg)
            text = (io.dumps_json({"config": cfg.to_dict(), "table": table.to_dict()})
                    if cfg.output == "json" else table.to_csv(cfg.to_dict()))
        elif cfg.command == "sample":
            ens = _sample(cfg)
            if cfg.output == "json":
                w = ens.weights if ens.weights is not None else None
                text = io.dumps_json({"config": cfg.to_dict(), "summary": ens.summary(),
                                      "times": ens.times, "values": ens.values,
                                      "weights": w})
            else:
                text = ens.to_csv(cfg.to_dict())
        else:
            reports = _verify(cfg, ns)
            status = 0 if all(r.passed for r in reports) else 1
            if cfg.output == "json":
                body = ({"config": cfg.to_dict(), **reports[0].to_dict()} if len(reports) == 1
                        else {"config": cfg.to_dict(), "pass": status == 0,
                              "reports": [r.to_dict() for r in reports]})
                text = io.dumps_json(body)
            else:
                rows = [row for r in reports for row in r.rows()]
                text = io.csv_text(["suite", "check", "scale", "statistic"], rows, cfg.to_dict())
        _emit(cfg, text)
        return status
    except (UsageError, DomainError) as exc:
        print(f"kpz: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except OSError as exc:
        print(f"kpz: I/O error: {exc}", file=sys.stderr)
        return 2
    except (KPZError, ArithmeticError) as exc:
        print(f"kpz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
