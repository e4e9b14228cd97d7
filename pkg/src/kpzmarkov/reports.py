"""Verification reports shared by the process checks and the limit suites."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One verdict.

    ``statistic`` is compared with ``tolerance`` by the producer, which
    sets ``passed``. Convergence checks carry the per-scale statistics in
    ``scales``/``series``; ``kind`` is one of ``endpoint``, ``trend``,
    ``identity``, ``two_route``, ``mc``, ``ks`` or ``error``.
    """

    name: str
    statistic: float
    tolerance: float
    passed: bool
    kind: str = "identity"
    scales: tuple = ()
    series: tuple = ()
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "statistic": self.statistic,
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
            "scales": list(self.scales),
            "series": list(self.series),
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "seed": self.seed,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
        }

    def rows(self):
        """Flat (suite, check, scale, statistic) rows; one per scale when present."""
        out = []
        for c in self.checks:
            if c.series:
                for s, v in zip(c.scales, c.series):
                    out.append((self.suite, c.name, s, v))
            else:
                out.append((self.suite, c.name, None, c.statistic))
        return out

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            verdict = "PASS" if c.passed else "FAIL"
            lines.append(f"[{verdict}] {self.suite}/{c.name}: {c.statistic:.4g} (tol {c.tolerance:.3g})")
        return lines


def trend_check(name: str, scales, series, slack: float = 0.0, detail: str = "") -> Check:
    """Deviation nonincreasing along the scale ladder, up to ``slack`` per step."""
    series = [float(v) for v in series]
    worst = -math.inf
    for prev, nxt in zip(series[:-1], series[1:]):
        worst = max(worst, nxt - prev)
    ok = len(series) >= 3 and all(math.isfinite(v) for v in series) and worst <= slack
    return Check(name, worst, slack, ok, "trend", tuple(scales), tuple(series), detail)


def endpoint_check(name: str, scales, series, tol: float, detail: str = "") -> Check:
    series = [float(v) for v in series]
    last = series[-1]
    return Check(name, last, tol, math.isfinite(last) and last < tol, "endpoint",
                 tuple(scales), tuple(series), detail)


def error_check(name: str, exc: BaseException) -> Check:
    """A failed check carrying the diagnostics of an upstream error."""
    return Check(name, math.nan, math.nan, False, "error",
                 detail=f"{type(exc).__name__}: {exc}")
