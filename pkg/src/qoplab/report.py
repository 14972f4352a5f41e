"""The residual record every check returns."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one numerical check.

    ``holds`` says whether the checked relation is satisfied
    (``residual < tolerance``).  For negative controls (``expect_fail=True``)
    the check is *satisfied* when the relation does not hold, so ``ok`` is the
    flag a suite should aggregate.
    """

    name: str
    residual: float
    tolerance: float
    expect_fail: bool = False
    details: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return bool(self.residual < self.tolerance)

    @property
    def ok(self) -> bool:
        return self.holds != self.expect_fail

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "expect_fail": self.expect_fail,
            "holds": self.holds,
            "ok": self.ok,
            "details": self.details,
        }

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        kind = " (negative control)" if self.expect_fail else ""
        return f"[{tag}] {self.name}{kind}: residual={self.residual:.3e} tol={self.tolerance:.1e}"


def combine(name: str, reports: list[ResidualReport], tolerance: float | None = None) -> ResidualReport:
    """Fold several same-kind reports into one carrying the worst residual."""
    if not reports:
        raise ValueError("nothing to combine")
    expect_fail = reports[0].expect_fail
    if any(r.expect_fail != expect_fail for r in reports):
        raise ValueError("cannot combine positive checks with negative controls")
    tol = reports[0].tolerance if tolerance is None else tolerance
    if expect_fail:
        # a negative control is only as strong as its smallest violation
        worst = min(r.residual for r in reports)
    else:
        worst = max(r.residual for r in reports)
    return ResidualReport(name, float(worst), tol, expect_fail, {"count": len(reports)})
