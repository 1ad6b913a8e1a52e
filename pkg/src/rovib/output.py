"""Self-describing CSV and JSON result files."""
from __future__ import annotations

import datetime
import json
import math
import sys

from . import __version__
from .config import config_hash
from .params import PhysicalParams


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def header_lines(params: PhysicalParams, timestamp=True, extra=None) -> list[str]:
    lines = [f"# rovib {__version__}", f"# config_sha256 {config_hash(params)}"]
    if timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# timestamp {now}")
    for key, value in params.as_dict().items():
        lines.append(f"# {key}={format_value(value)}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key}={format_value(value)}")
    return lines


def render_csv(columns, rows, params, timestamp=True, extra=None) -> str:
    out = header_lines(params, timestamp, extra)
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(format_value(v) for v in row))
    return "\n".join(out) + "\n"


def render_json(columns, rows, params, timestamp=True, extra=None, summary=None) -> str:
    doc = {"tool": "rovib", "version": __version__, "config_sha256": config_hash(params)}
    if timestamp:
        doc["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    doc["config"] = params.as_dict()
    if extra:
        doc["options"] = extra
    doc["columns"] = list(columns)
    doc["rows"] = [[_json_value(v) for v in row] for row in rows]
    if summary is not None:
        doc["summary"] = summary
    return json.dumps(doc, indent=2) + "\n"


def write_text(text: str, path=None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def emit_results(rows, columns, fmt, path, params, timestamp=True, extra=None, summary=None):
    """Write rows as CSV (``#`` header, 17 significant digits) or JSON."""
    if fmt == "csv":
        text = render_csv(columns, rows, params, timestamp, extra)
    elif fmt == "json":
        text = render_json(columns, rows, params, timestamp, extra, summary)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    write_text(text, path)
    return text


def data_section(text: str) -> str:
    """The non-comment part of a CSV document."""
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))
