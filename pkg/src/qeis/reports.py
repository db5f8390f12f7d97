"""Value objects returned by the exact identity checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .series import BiExpansion, QExpansion, format_rational


@dataclass(frozen=True)
class RecursionReport:
    """Outcome of one exact identity check; ``passed`` iff the residual is exactly zero."""

    identity_name: str
    order_checked: int
    max_abs_residual: Fraction
    passed: bool
    residuals: tuple[Fraction, ...] = field(default=(), compare=False, repr=False)
    detail: str = field(default="", compare=False)

    @property
    def pass_(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "identity": self.identity_name,
            "order": self.order_checked,
            "residual": format_rational(self.max_abs_residual),
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"{status}  {self.identity_name}  order={self.order_checked}  "
                f"max|residual|={format_rational(self.max_abs_residual)}{extra}")


def residual_report(name: str, residual: QExpansion | BiExpansion | Sequence[Fraction],
                    order: int, detail: str = "") -> RecursionReport:
    """Build a report from a difference series (exact zero means pass)."""
    if isinstance(residual, QExpansion):
        values = tuple(residual.coeffs)
    elif isinstance(residual, BiExpansion):
        values = tuple(c for _, _, c in residual.items())
    else:
        values = tuple(Fraction(v) for v in residual)
    worst = max((abs(v) for v in values), default=Fraction(0))
    return RecursionReport(name, order, worst, worst == 0, values, detail)


def combine(name: str, reports: Sequence[RecursionReport], order: int) -> RecursionReport:
    worst = max((r.max_abs_residual for r in reports), default=Fraction(0))
    failing = [r.identity_name for r in reports if not r.passed]
    detail = ("failing: " + ", ".join(failing)) if failing else ""
    return RecursionReport(name, order, worst, all(r.passed for r in reports), (), detail)
