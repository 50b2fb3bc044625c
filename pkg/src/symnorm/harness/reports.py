"""Verification reports and their CSV / JSON / markdown / .dat renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence


@dataclass
class VerificationReport:
    """One checked instance.

    ``flags`` holds asserted comparisons; every flag's two sides live in
    ``quantities``. ``constants`` are measured, never asserted.
    """

    kind: str
    descriptor: dict[str, Any]
    quantities: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, ok in self.flags.items() if not ok]

    def describe(self) -> str:
        desc = ",".join(f"{k}={v}" for k, v in self.descriptor.items())
        return f"{self.kind}[{desc}]"

    def sort_key(self) -> tuple:
        return (self.kind,) + tuple(_key_part(v) for v in self.descriptor.values())


def _key_part(v: Any) -> tuple:
    if isinstance(v, bool):
        return (0, int(v), "")
    if isinstance(v, (int, float)):
        return (0, float(v), "")
    return (1, 0.0, str(v))


def fmt(value: Any) -> str:
    """17 significant digits for floats so CSV values replay bit-for-bit."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def _columns(reports: Sequence[VerificationReport]) -> list[str]:
    cols: list[str] = ["kind"]
    seen = set(cols)
    for section in ("descriptor", "quantities", "constants", "flags"):
        for r in reports:
            for key in getattr(r, section):
                name = key if section != "flags" else f"ok_{key}"
                if name not in seen:
                    seen.add(name)
                    cols.append(name)
    return cols


def render_csv(reports: Sequence[VerificationReport], config: dict[str, Any]) -> str:
    """Descriptor columns first, then quantities and constants, then flags."""
    reports = sorted(reports, key=VerificationReport.sort_key)
    cols = _columns(reports)
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in reports:
        merged: dict[str, Any] = {"kind": r.kind, **r.descriptor, **r.quantities, **r.constants}
        merged.update({f"ok_{k}": v for k, v in r.flags.items()})
        writer.writerow([fmt(merged[c]) if c in merged else "" for c in cols])
    return buf.getvalue()


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        return fmt(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def render_summary(
    config: dict[str, Any],
    reports: Sequence[VerificationReport],
    constants: dict[str, float],
    checks: dict[str, bool],
    tables: dict[str, list[dict[str, Any]]],
    notes: Sequence[str] = (),
) -> str:
    failures = [f"{r.describe()}: {', '.join(r.failures)}" for r in sorted(reports, key=VerificationReport.sort_key) if not r.passed]
    failures += [f"campaign check {name}" for name, ok in checks.items() if not ok]
    body = {
        "config": config,
        "instances": len(reports),
        "empirical_constants": constants,
        "campaign_checks": checks,
        "tables": tables,
        "notes": list(notes),
        "failures": failures,
    }
    return json.dumps(_json_safe(body), indent=2, sort_keys=True) + "\n"


def render_markdown(
    title: str,
    config: dict[str, Any],
    reports: Sequence[VerificationReport],
    constants: dict[str, float],
    checks: dict[str, bool],
    tables: dict[str, list[dict[str, Any]]],
    notes: Sequence[str] = (),
) -> str:
    lines = [f"# {title}", "", "```json", json.dumps(config, indent=2, sort_keys=True), "```", ""]
    n_fail = sum(not r.passed for r in reports)
    lines.append(f"Instances: {len(reports)}; failing: {n_fail}.")
    lines.append("")
    if checks:
        lines += ["| campaign check | result |", "|---|---|"]
        lines += [f"| {k} | {'pass' if v else 'FAIL'} |" for k, v in checks.items()]
        lines.append("")
    if constants:
        lines += ["| empirical constant | value |", "|---|---|"]
        lines += [f"| {k} | {fmt(float(v))} |" for k, v in constants.items()]
        lines.append("")
    for name, rows in tables.items():
        if not rows:
            continue
        cols = list(rows[0])
        lines += [f"## {name}", "", "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        lines += ["| " + " | ".join(fmt(row[c]) for c in cols) + " |" for row in rows]
        lines.append("")
    for note in notes:
        lines.append(f"- {note}")
    return "\n".join(lines).rstrip() + "\n"


def render_dat(config: dict[str, Any], rows: Iterable[dict[str, Any]]) -> str:
    """Whitespace-separated columns with a commented header, readable by gnuplot."""
    rows = list(rows)
    out = ["# config: " + json.dumps(config, sort_keys=True)]
    if rows:
        cols = list(rows[0])
        out.append("# " + " ".join(cols))
        out += [" ".join(fmt(row[c]) for c in cols) for row in rows]
    return "\n".join(out) + "\n"


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
