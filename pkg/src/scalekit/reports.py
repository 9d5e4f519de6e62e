"""Report rendering: a JSON envelope plus CSV and markdown table views.

JSON output is byte-deterministic for a fixed configuration: keys are
sorted, floats go through repr, and every randomized quantity is driven by
the recorded seed.
"""

from __future__ import annotations

import json
from typing import Optional

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "envelope", "render"]


def envelope(subcommand: str, config: dict, passed: bool, report: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "subcommand": subcommand,
        "config": config,
        "passed": passed,
        "report": report,
    }


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_csv(doc: dict, rows: Optional[list]) -> str:
    lines = [f"# schema={doc['schema']} subcommand={doc['subcommand']} passed={doc['passed']}"]
    if rows:
        header = list(rows[0].keys())
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_fmt_cell(row.get(h, "")) for h in header))
    return "\n".join(lines) + "\n"


def _render_md(doc: dict, rows: Optional[list], title: str) -> str:
    lines = [f"## {title}", "", f"- subcommand: `{doc['subcommand']}`"]
    for key, value in sorted(doc["config"].items()):
        lines.append(f"- {key}: `{value}`")
    lines.append(f"- passed: **{doc['passed']}**")
    lines.append("")
    if rows:
        header = list(rows[0].keys())
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join([" --- "] * len(header)) + "|")
        for row in rows:
            lines.append(
                "| " + " | ".join(_fmt_cell(row.get(h, "")) for h in header) + " |"
            )
        lines.append("")
    return "\n".join(lines)


def render(
    doc: dict,
    fmt: str = "json",
    rows: Optional[list] = None,
    title: str = "report",
) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(doc, rows)
    if fmt == "md":
        return _render_md(doc, rows, title)
    raise ValueError(f"unknown format {fmt!r}")
