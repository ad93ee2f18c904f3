"""Outcome record for a single verification check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckReport:
    """One verification outcome.

    ``passed`` holds iff ``max_rel_err <= tolerance``, except for checks
    whose target is zero, which compare ``max_abs_err`` against the
    tolerance instead (``zero_target`` marks those).
    """

    name: str
    params: dict[str, Any] = field(default_factory=dict)
    max_abs_err: float = 0.0
    max_rel_err: float = 0.0
    tolerance: float = 0.0
    passed: bool = False
    samples: int = 0
    seed: int | None = None
    zero_target: bool = False

    @staticmethod
    def from_errors(
        name: str,
        *,
        max_abs_err: float,
        max_rel_err: float,
        tolerance: float,
        samples: int,
        params: dict | None = None,
        seed: int | None = None,
        zero_target: bool = False,
    ) -> "CheckReport":
        governing = max_abs_err if zero_target else max_rel_err
        return CheckReport(
            name=name,
            params=dict(params or {}),
            max_abs_err=float(max_abs_err),
            max_rel_err=float(max_rel_err),
            tolerance=float(tolerance),
            passed=bool(governing <= tolerance),
            samples=int(samples),
            seed=seed,
            zero_target=zero_target,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": dict(self.params),
            "max_abs_err": self.max_abs_err,
            "max_rel_err": self.max_rel_err,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "samples": self.samples,
            "seed": self.seed,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: max_abs={self.max_abs_err:.3e} "
            f"max_rel={self.max_rel_err:.3e} tol={self.tolerance:.1e} "
            f"(n={self.samples})"
        )
