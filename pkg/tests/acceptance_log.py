"""Collects the one-line verdicts printed by the acceptance module."""

from __future__ import annotations

LINES: list[str] = []


def record(criterion: str, ok: bool, seconds: float, limit: float | None, detail: str = "") -> str:
    within = limit is None or seconds < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"{status}  {criterion}: {seconds:.2f} s{budget}"
    if detail:
        line += f"  {detail}"
    LINES.append(line)
    print(line)
    return status
