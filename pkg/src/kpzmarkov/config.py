"""Parameter containers used across the package."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict, replace

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and resolution settings for one-dimensional integrals.

    ``upper_cutoff`` overrides the automatic truncation point when set.
    ``nodes`` is a floor on the node count; the routines raise it further
    when the integrand demands. With ``check`` on, every call is repeated
    at doubled resolution and the two results must agree to
    ``rel_tol * |value| + abs_tol``.
    """

    upper_cutoff: float | None = None
    nodes: int = 64
    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    check: bool = True

    def __post_init__(self):
        if self.upper_cutoff is not None and not self.upper_cutoff > 0:
            raise DomainError("upper_cutoff must be positive")
        if int(self.nodes) < 16:
            raise DomainError("nodes must be at least 16")
        if not (0 < self.rel_tol <= 1e-2):
            raise DomainError("rel_tol must lie in (0, 1e-2]")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")

    def tolerance(self, value: float) -> float:
        return self.rel_tol * abs(value) + self.abs_tol

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class BoundaryParams:
    """Boundary parameters ``a``, ``c`` and interval length ``tau``."""

    a: float
    c: float
    tau: float = 1.0

    def __post_init__(self):
        for name in ("a", "c", "tau"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")

    @property
    def requires_pos_sum(self) -> bool:
        """True when ``a + c > 0`` (needed by the Y family and the constants)."""
        return self.a + self.c > 0

    def require_pos_sum(self, what: str = "this quantity") -> None:
        if not self.requires_pos_sum:
            raise DomainError(f"{what} needs a + c > 0, got a={self.a}, c={self.c}")

    def swapped(self) -> "BoundaryParams":
        return replace(self, a=self.c, c=self.a)

    def scaled(self, factor: float) -> "BoundaryParams":
        return replace(self, a=self.a * factor, c=self.c * factor)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KernelValue:
    """A kernel or constant value with its node-doubling discrepancy."""

    value: float
    est_error: float = 0.0
    method: str = "closed_form"
    meta: dict = field(default_factory=dict, compare=False)

    def __float__(self) -> float:
        return float(self.value)
