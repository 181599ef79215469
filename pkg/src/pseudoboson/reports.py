"""Structured residual records shared by the check functions and the
batch verification runner."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

__all__ = ["ResidualRecord", "CheckReport", "format_report_table", "reports_to_json"]


@dataclass(frozen=True)
class ResidualRecord:
    """Outcome of a single residual evaluation inside a check.

    ``n`` is the level index the residual refers to (``None`` for
    whole-operator residuals).
    """

    check: str
    n: int | None
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass(frozen=True)
class CheckReport:
    """Aggregated verdict for one suite check.

    ``status`` is ``"pass"`` iff ``residual <= tolerance``, except for
    runs outside the accuracy regime which report ``"out-of-regime"``.
    """

    check_id: str
    params: dict = field(default_factory=dict)
    residual: float = 0.0
    tolerance: float = 0.0
    status: str = "pass"
    wall_time: float = 0.0


def format_report_table(reports: list[CheckReport]) -> str:
    """Fixed-width human-readable table, one line per report."""
    lines = [
        f"{'check':38s} {'residual':>12s} {'tolerance':>12s} {'status':>14s} {'time[s]':>8s}",
        "-" * 88,
    ]
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        name = f"{r.check_id} {params}".strip()
        lines.append(
            f"{name:38s} {r.residual:12.3e} {r.tolerance:12.3e} {r.status:>14s} {r.wall_time:8.3f}"
        )
    n_fail = sum(1 for r in reports if r.status == "fail")
    n_oor = sum(1 for r in reports if r.status == "out-of-regime")
    lines.append("-" * 88)
    lines.append(f"{len(reports)} checks: {len(reports) - n_fail - n_oor} pass, "
                 f"{n_fail} fail, {n_oor} out-of-regime")
    return "\n".join(lines)


def reports_to_json(reports: list[CheckReport]) -> str:
    """Machine-readable JSON array of report records."""
    return json.dumps([asdict(r) for r in reports], indent=2)
