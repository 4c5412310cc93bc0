"""CSV and JSON writers with a byte-deterministic layout."""
from __future__ import annotations

import io
import json
import math
from pathlib import Path

from .. import __version__
from .scans import ScanResult

NULL = "null"


def format_number(x, precision: int) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return NULL
    return f"{float(x):.{precision - 1}e}"


def _rounded(x, precision: int):
    if x is None or not math.isfinite(float(x)):
        return None
    return float(format_number(x, precision))


def _header(result: ScanResult) -> dict:
    return {"tool": "ensb", "version": __version__, "mode": result.mode, **result.meta}


def render_csv(result: ScanResult, precision: int) -> str:
    buf = io.StringIO()
    head = _header(result)
    buf.write(f"# ensb {head['version']} {result.mode}\n")
    buf.write("# config: " + json.dumps(head.get("config", {}), sort_keys=True) + "\n")
    derived = {k: _rounded(v, precision) for k, v in head.get("derived", {}).items()}
    buf.write("# derived: " + json.dumps(derived, sort_keys=True) + "\n")
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(format_number(x, precision) for x in row) + "\n")
    return buf.getvalue()


def render_json(result: ScanResult, precision: int) -> str:
    head = _header(result)
    head["derived"] = {k: _rounded(v, precision) for k, v in head.get("derived", {}).items()}
    doc = {
        "meta": head,
        "columns": list(result.columns),
        "rows": [[_rounded(x, precision) for x in row] for row in result.rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def render(result: ScanResult, fmt: str, precision: int) -> str:
    return render_csv(result, precision) if fmt == "csv" else render_json(result, precision)


def write_output(result: ScanResult, fmt: str, precision: int, path=None, stream=None) -> str:
    """Render and write to ``path`` (UTF-8, '\\n' newlines) or to ``stream``."""
    text = render(result, fmt, precision)
    if path is None:
        if stream is not None:
            stream.write(text)
        return text
    p = Path(path)
    try:
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write output {p}: {exc.strerror}") from exc
    return text
