"""Experiment reports with full provenance.

Every emitted file carries ``schema=1`` and the exact configuration
(including all seeds) needed to regenerate it bit-identically.  CSV files
start with one ``#``-prefixed provenance line followed by the documented
header; JSON files mirror the whole report and round-trip through
``read_report``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    command: str
    config: dict
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "columns": self.columns,
            "rows": self.rows,
            "aggregates": self.aggregates,
            "verdicts": self.verdicts,
        }


def _provenance_line(report: RunReport) -> str:
    cfg = json.dumps(report.config, sort_keys=True, separators=(",", ":"))
    return f"# schema={SCHEMA_VERSION} command={report.command} config={cfg}"


def render_csv(report: RunReport) -> str:
    lines = [_provenance_line(report), ",".join(report.columns)]
    for row in report.rows:
        lines.append(",".join(_cell(x) for x in row))
    return "\n".join(lines) + "\n"


def render_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_report(report: RunReport, fmt: str, path: str) -> None:
    """Write the report as ``csv`` or ``json``; deterministic bytes."""
    if fmt == "csv":
        text = render_csv(report)
    elif fmt == "json":
        text = render_json(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_report(path: str) -> RunReport:
    """Read back a JSON report emitted by ``emit_report``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc
    return RunReport(
        command=doc["command"],
        config=doc["config"],
        columns=doc["columns"],
        rows=doc["rows"],
        aggregates=doc["aggregates"],
        verdicts=doc["verdicts"],
    )
